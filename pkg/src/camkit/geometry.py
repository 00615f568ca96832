"""Pose sequences and the rotation/translation/curvature statistics.

Extrinsics are camera-to-world: R maps camera-frame axes into the world,
t is the camera center in world coordinates. All angles are degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from numpy.typing import NDArray

ORTHONORMAL_TOL = 1e-6
# Rotations below this angle (radians) are treated as identity when
# extracting an axis-angle vector; keeps near-identity extraction stable.
MIN_ROTATION_RAD = 1e-9


@dataclass(frozen=True)
class FrameConventions:
    """Camera-frame axes (unit vectors in camera coordinates) and world up.

    Defaults: forward is the negative x-axis, lateral(+) is +y, up is +z,
    and the world vertical is +z. The labeler and the synthesizer share one
    conventions record, which is what makes their sign conventions a
    self-consistent contract: positive pan is yaw toward lateral(+),
    positive roll tips the up axis toward lateral(+).
    """

    forward: tuple[float, float, float] = (-1.0, 0.0, 0.0)
    lateral: tuple[float, float, float] = (0.0, 1.0, 0.0)
    up: tuple[float, float, float] = (0.0, 0.0, 1.0)
    world_up: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        f, l, u = (np.asarray(v, dtype=float) for v in (self.forward, self.lateral, self.up))
        w = np.asarray(self.world_up, dtype=float)
        for name, v in (("forward", f), ("lateral", l), ("up", u), ("world_up", w)):
            if abs(np.linalg.norm(v) - 1.0) > ORTHONORMAL_TOL:
                raise ValueError(f"{name} axis must be a unit vector")
        for a, b in ((f, l), (f, u), (l, u)):
            if abs(float(a @ b)) > ORTHONORMAL_TOL:
                raise ValueError("camera axes must be mutually orthogonal")

    def axes(self) -> tuple[NDArray, NDArray, NDArray, NDArray]:
        return (
            np.asarray(self.forward, dtype=float),
            np.asarray(self.lateral, dtype=float),
            np.asarray(self.up, dtype=float),
            np.asarray(self.world_up, dtype=float),
        )


def _check_rotation(r: NDArray) -> None:
    if r.shape != (3, 3):
        raise ValueError("rotation must be 3x3")
    if not np.all(np.isfinite(r)):
        raise ValueError("rotation has non-finite entries")
    if np.max(np.abs(r @ r.T - np.eye(3))) > ORTHONORMAL_TOL:
        raise ValueError("rotation is not orthonormal")
    if abs(float(np.linalg.det(r)) - 1.0) > ORTHONORMAL_TOL:
        raise ValueError("rotation determinant is not +1")


@dataclass(frozen=True, eq=False)
class CameraPose:
    """One frame's extrinsics: rotation (3x3) and translation (meters)."""

    rotation: NDArray = field(repr=False)
    translation: NDArray = field(repr=False)

    def __post_init__(self) -> None:
        r = np.asarray(self.rotation, dtype=float)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        _check_rotation(r)
        if not np.all(np.isfinite(t)):
            raise ValueError("translation has non-finite entries")
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)


@dataclass(frozen=True, eq=False)
class PoseSequence:
    """Ordered per-frame poses for one segment, with the capture rate."""

    poses: tuple[CameraPose, ...]
    fps: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "poses", tuple(self.poses))
        if len(self.poses) < 2:
            raise ValueError("pose sequence needs at least 2 frames")
        if self.fps <= 0:
            raise ValueError("fps must be positive")

    def __len__(self) -> int:
        return len(self.poses)

    def __iter__(self) -> Iterator[CameraPose]:
        return iter(self.poses)

    def reversed(self) -> "PoseSequence":
        return PoseSequence(poses=tuple(reversed(self.poses)), fps=self.fps)


@dataclass(frozen=True)
class MotionStats:
    """Accumulated per-segment motion quantities consumed by the labeler.

    dt_cam is the end-to-end displacement expressed in the first frame's
    camera basis, in (forward, lateral, vertical) component order.
    """

    d_trans: float
    delta_pan: float
    delta_tilt: float
    delta_roll: float
    sigma_pan: float
    sigma_tilt: float
    sigma_roll: float
    dt_cam: tuple[float, float, float]
    curvature: float


def rotation_about_axis(axis: Sequence[float], angle_deg: float) -> NDArray:
    """Rodrigues rotation about a unit axis by an angle in degrees."""
    a = np.asarray(axis, dtype=float)
    n = np.linalg.norm(a)
    if n < 1e-12:
        raise ValueError("rotation axis must be nonzero")
    a = a / n
    th = math.radians(angle_deg)
    k = np.array(
        [
            [0.0, -a[2], a[1]],
            [a[2], 0.0, -a[0]],
            [-a[1], a[0], 0.0],
        ]
    )
    return np.eye(3) + math.sin(th) * k + (1.0 - math.cos(th)) * (k @ k)


def rotation_to_quat(r: NDArray) -> NDArray:
    """Unit quaternion (w, x, y, z) for a rotation matrix, w >= 0.

    Shepperd-style branch selection on the largest diagonal combination
    keeps the extraction stable for all rotation angles.
    """
    m = np.asarray(r, dtype=float)
    tr = float(m[0, 0] + m[1, 1] + m[2, 2])
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
        )
    elif m[0, 0] >= m[1, 1] and m[0, 0] >= m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        q = np.array(
            [(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
        )
    elif m[1, 1] >= m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        q = np.array(
            [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s, (m[1, 2] + m[2, 1]) / s]
        )
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        q = np.array(
            [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, 0.25 * s]
        )
    q = q / np.linalg.norm(q)
    if q[0] < 0.0:
        q = -q
    return q


def rotation_vector(r: NDArray) -> NDArray:
    """Axis-angle vector (radians) via quaternion extraction.

    Angles below MIN_ROTATION_RAD return the zero vector.
    """
    w, x, y, z = rotation_to_quat(r)
    v = np.array([x, y, z])
    s = float(np.linalg.norm(v))
    w = min(1.0, max(-1.0, float(w)))
    angle = 2.0 * math.atan2(s, w)
    if angle < MIN_ROTATION_RAD or s < 1e-300:
        return np.zeros(3)
    return v * (angle / s)


def relative_rotation(prev: CameraPose, curr: CameraPose) -> NDArray:
    """World-side relative rotation R_curr @ R_prev^T."""
    return curr.rotation @ prev.rotation.T


def _signed_horizontal_angle(h_prev: NDArray, h_curr: NDArray, world_up: NDArray) -> float:
    """Signed angle (radians) from h_prev to h_curr about world_up."""
    return math.atan2(float(np.cross(h_prev, h_curr) @ world_up), float(h_prev @ h_curr))


def compute_motion_stats(seq: PoseSequence, conv: FrameConventions) -> MotionStats:
    """Accumulate pan/tilt/roll deltas, path length, displacement, curvature.

    Pan is per-step yaw of the forward vector's horizontal projection about
    world up (positive toward lateral(+)); tilt is the per-step change of
    the forward vector's elevation (positive when elevation decreases, i.e.
    pitching down); roll is the forward-axis component of the camera-frame
    relative rotation (positive tips up toward lateral(+)).
    """
    f_cam, l_cam, u_cam, w_up = conv.axes()
    rs = [p.rotation for p in seq]
    ts = [p.translation for p in seq]

    fwd_world = [r @ f_cam for r in rs]

    # Positive pan is defined as yaw toward lateral(+); this sign maps the
    # measured world-frame angle onto that convention.
    s_pan = float(np.cross(f_cam, l_cam) @ w_up)
    s_pan = math.copysign(1.0, s_pan) if abs(s_pan) > 1e-12 else 1.0

    d_trans = 0.0
    delta_pan = sigma_pan = 0.0
    delta_tilt = sigma_tilt = 0.0
    delta_roll = sigma_roll = 0.0
    turn = 0.0  # curvature numerator: accumulated forward-vector change

    def elevation(f: NDArray) -> float:
        return math.asin(min(1.0, max(-1.0, float(f @ w_up))))

    for i in range(1, len(seq)):
        d_trans += float(np.linalg.norm(ts[i] - ts[i - 1]))
        turn += float(np.linalg.norm(fwd_world[i] - fwd_world[i - 1]))

        h_prev = fwd_world[i - 1] - (fwd_world[i - 1] @ w_up) * w_up
        h_curr = fwd_world[i] - (fwd_world[i] @ w_up) * w_up
        if np.linalg.norm(h_prev) > 1e-12 and np.linalg.norm(h_curr) > 1e-12:
            pan_step = s_pan * math.degrees(_signed_horizontal_angle(h_prev, h_curr, w_up))
        else:
            pan_step = 0.0  # forward parallel to vertical: yaw undefined
        delta_pan += pan_step
        sigma_pan += abs(pan_step)

        tilt_step = math.degrees(elevation(fwd_world[i - 1]) - elevation(fwd_world[i]))
        delta_tilt += tilt_step
        sigma_tilt += abs(tilt_step)

        rel_cam = rs[i - 1].T @ rs[i]
        roll_step = math.degrees(float(rotation_vector(rel_cam) @ f_cam))
        delta_roll += roll_step
        sigma_roll += abs(roll_step)

    d_world = ts[-1] - ts[0]
    d_cam = rs[0].T @ d_world
    dt_cam = (float(d_cam @ f_cam), float(d_cam @ l_cam), float(d_cam @ u_cam))

    curvature = turn / (d_trans + 1e-8) if turn > 0.0 else 0.0

    return MotionStats(
        d_trans=d_trans,
        delta_pan=delta_pan,
        delta_tilt=delta_tilt,
        delta_roll=delta_roll,
        sigma_pan=sigma_pan,
        sigma_tilt=sigma_tilt,
        sigma_roll=sigma_roll,
        dt_cam=dt_cam,
        curvature=curvature,
    )
