"""Parametric pose-sequence generator realizing a requested label set.

This is the labeler's round-trip oracle and the fixture factory for the
downstream modules. Per-primitive ingredients compose: pan/tilt/roll are
constant angular rates, straight translations are constant velocity, arcs
are circular paths with the heading locked to the travel tangent. All
magnitudes sit magnitude_scale above the labeler thresholds.

The synthesizer shares FrameConventions with the labeler; that pair is the
sign-convention contract (positive pan = toward lateral(+), etc.).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from camkit.geometry import (
    CameraPose,
    FrameConventions,
    PoseSequence,
    rotation_about_axis,
)
from camkit.labeler import LabelerThresholds
from camkit.seeds import stream
from camkit.taxonomy import (
    IncompatibilityMatrix,
    LabelSet,
    Rejected,
    build_matrix,
    canonicalize,
)

# Total turn of the heading for arc paths. A half circle makes the
# end-to-end forward displacement vanish exactly (no spurious dolly); the
# shallower turn is used when forward travel is wanted, which also keeps
# the yaw-while-tilted roll pickup far below the roll threshold.
ARC_TURN_PLAIN = math.pi
ARC_TURN_WITH_TRAVEL = math.pi / 6.0

# Fraction of the static/rotation thresholds the jitter budget may use.
JITTER_BUDGET = 0.2


@dataclass(frozen=True)
class SynthSpec:
    """What to synthesize: target labels, margin above thresholds, length."""

    target: LabelSet
    magnitude_scale: float = 2.0
    frames: int = 15
    seed: int = 0
    jitter: float = 0.0  # static only: fraction of the sub-threshold budget

    def __post_init__(self) -> None:
        if self.magnitude_scale < 1.1:
            raise ValueError("magnitude_scale must be at least 1.1")
        if self.frames < 2:
            raise ValueError("frames must be at least 2")
        if not 0.0 <= self.jitter <= 1.0:
            raise ValueError("jitter must be within [0, 1]")


def _pick(target: frozenset[str], *names: str) -> str | None:
    for name in names:
        if name in target:
            return name
    return None


def _heading_rotation(
    conv: FrameConventions, az_deg: float, el_deg: float
) -> np.ndarray:
    """Horizon-locked rotation with yaw az and elevation el (degrees)."""
    f0, l0, u0, w = conv.axes()
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    h = f0 * math.cos(az) + l0 * math.sin(az)
    f_w = math.cos(el) * h + math.sin(el) * w
    u_w = -math.sin(el) * h + math.cos(el) * w
    eps = float(l0 @ np.cross(u0, f0))
    eps = math.copysign(1.0, eps)
    l_w = eps * np.cross(u_w, f_w)
    cam = np.column_stack([f0, l0, u0])
    world = np.column_stack([f_w, l_w, u_w])
    return world @ cam.T


def _static_sequence(
    spec: SynthSpec, conv: FrameConventions, th: LabelerThresholds
) -> PoseSequence:
    t = spec.frames
    if spec.jitter == 0.0:
        poses = tuple(CameraPose(np.eye(3), np.zeros(3)) for _ in range(t))
        return PoseSequence(poses, fps=float(t))
    rng = stream(spec.seed, "jitter")
    # Budgets are totals over the whole walk, so the accumulated path and
    # angle sums stay strictly inside the static thresholds.
    step_len = JITTER_BUDGET * th.trans_static * spec.jitter / (t - 1)
    step_ang = JITTER_BUDGET * th.rot_min * spec.jitter / (t - 1)
    r = np.eye(3)
    q = np.zeros(3)
    poses = [CameraPose(r, q)]
    for _ in range(t - 1):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        r = r @ rotation_about_axis(axis, step_ang)
        q = q + step_len * direction
        poses.append(CameraPose(r, q))
    return PoseSequence(tuple(poses), fps=float(t))


def synthesize(
    spec: SynthSpec,
    conv: FrameConventions | None = None,
    th: LabelerThresholds | None = None,
) -> PoseSequence:
    """Build a pose sequence whose dominant motions match spec.target.

    Deterministic in all arguments. The target must be valid under the base
    matrix and free of zoom primitives (zoom is an intrinsics effect and
    has no extrinsic trajectory).
    """
    conv = conv if conv is not None else FrameConventions()
    th = th if th is not None else LabelerThresholds()
    matrix = build_matrix("base")

    for name in spec.target:
        if name.startswith("zoom-"):
            raise ValueError("zoom primitives have no pose-level realization")
    checked = canonicalize(spec.target, matrix)
    if isinstance(checked, Rejected):
        raise ValueError(f"target is not a valid label set: {checked.reason}")
    target = frozenset(spec.target)

    if target == {"static"}:
        return _static_sequence(spec, conv, th)

    f0, l0, u0, w = conv.axes()
    if abs(float(f0 @ w)) > 1e-9 or abs(float(l0 @ w)) > 1e-9 or float(u0 @ w) < 1.0 - 1e-9:
        raise ValueError("synthesis requires a horizon-aligned identity pose")

    t = spec.frames
    s = spec.magnitude_scale
    frac = np.linspace(0.0, 1.0, t)

    pan = _pick(target, "pan-left", "pan-right")
    tilt = _pick(target, "tilt-up", "tilt-down")
    roll = _pick(target, "roll-cw", "roll-ccw")
    truck = _pick(target, "truck-left", "truck-right")
    crane = _pick(target, "crane-up", "crane-down")
    dolly = _pick(target, "dolly-in", "dolly-out")
    arc = _pick(target, "arc-cw", "arc-ccw")

    az = np.zeros(t)
    el = np.zeros(t)
    roll_deg = np.zeros(t)
    pos = np.zeros((t, 3))

    rot_total = s * th.rot_min
    if pan:
        az += (rot_total if pan == "pan-right" else -rot_total) * frac
    if tilt:
        el += (rot_total if tilt == "tilt-up" else -rot_total) * frac
    if roll:
        roll_total = s * th.roll_min
        roll_deg += (roll_total if roll == "roll-cw" else -roll_total) * frac

    move = s * th.move_floor
    line = np.zeros(3)
    if dolly and not arc:
        line += (move if dolly == "dolly-in" else -move) * f0
    if truck:
        line += (move if truck == "truck-right" else -move) * l0
    if crane:
        line += (move if crane == "crane-up" else -move) * u0
    if roll and not dolly and not arc:
        line += move * f0  # forward travel so the roll gate opens
    pos += frac[:, None] * line

    if arc:
        sgn = 1.0 if arc == "arc-cw" else -1.0
        if dolly or roll:
            turn = ARC_TURN_WITH_TRAVEL
            radius = move / math.sin(turn)
            travel = -1.0 if dolly == "dolly-out" else 1.0
        else:
            turn = ARC_TURN_PLAIN
            radius = min(1.0, 1.0 / (s * th.curvature_min))
            travel = 1.0
        phi = turn * frac
        pos += travel * radius * (
            np.sin(phi)[:, None] * f0 + sgn * (1.0 - np.cos(phi))[:, None] * l0
        )
        az += np.degrees(sgn * phi)

    poses = []
    for i in range(t):
        r = _heading_rotation(conv, float(az[i]), float(el[i]))
        if roll_deg[i] != 0.0:
            r = r @ rotation_about_axis(f0, float(roll_deg[i]))
        poses.append(CameraPose(r, pos[i]))
    return PoseSequence(tuple(poses), fps=float(t))


def reachable_sets(matrix: IncompatibilityMatrix | None = None) -> list[LabelSet]:
    """Every label set the threshold labeler can actually emit.

    Computed mechanically from the labeler's output shapes: {static};
    rotation-branch subsets of pan/tilt; straight-translation subsets of
    dolly/truck/crane; roll plus dolly (roll is gated on forward travel,
    which forces the dolly label) with at most one more translation axis;
    arc with optional auxiliary tilt and dolly. Matrix-valid sets outside
    these shapes (for example pan with dolly) are unreachable because the
    branch structure never produces them.
    """
    matrix = matrix if matrix is not None else build_matrix("base")
    pans = ("pan-left", "pan-right")
    tilts = ("tilt-up", "tilt-down")
    rolls = ("roll-cw", "roll-ccw")
    trucks = ("truck-left", "truck-right")
    cranes = ("crane-up", "crane-down")
    dollies = ("dolly-in", "dolly-out")
    arcs = ("arc-cw", "arc-ccw")

    found: set[tuple[str, ...]] = set()

    def add(names: tuple[str, ...]) -> None:
        if not names:
            return
        got = canonicalize(names, matrix)
        assert isinstance(got, LabelSet)
        found.add(got.primitives)

    add(("static",))
    for p in (None, *pans):
        for ti in (None, *tilts):
            add(tuple(x for x in (p, ti) if x))
    for d in (None, *dollies):
        for tr in (None, *trucks):
            for c in (None, *cranes):
                add(tuple(x for x in (d, tr, c) if x))
    for d in dollies:
        for r in rolls:
            for extra in (None, *trucks, *cranes):
                add(tuple(x for x in (d, r, extra) if x))
    for a in arcs:
        for ti in (None, *tilts):
            for d in (None, *dollies):
                add(tuple(x for x in (a, ti, d) if x))

    index = {name: i for i, name in enumerate(matrix.names)}
    ordered = sorted(found, key=lambda names: tuple(index[n] for n in names))
    return [LabelSet(names) for names in ordered]
