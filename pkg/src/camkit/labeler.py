"""Pose-to-label mapping: thresholded branching over motion statistics.

The decision core is split out as labels_from_stats so threshold behavior
can be tested with exact injected statistics, independent of pose
construction noise.
"""

from __future__ import annotations

from dataclasses import dataclass

from camkit.geometry import FrameConventions, PoseSequence, compute_motion_stats
from camkit.geometry import MotionStats
from camkit.taxonomy import IncompatibilityMatrix, LabelSet, Rejected, canonicalize


@dataclass(frozen=True)
class LabelerThresholds:
    """Decision thresholds. Units: meters, degrees, per-meter."""

    trans_static: float = 0.05  # total path below this is rotation/static
    rot_min: float = 0.2  # accumulated pan/tilt must exceed this (degrees)
    roll_min: float = 0.5  # accumulated roll must exceed this (degrees)
    move_floor: float = 0.5  # minimum translation dominance threshold
    move_frac: float = 0.3  # adaptive fraction of the largest displacement
    curvature_min: float = 9e-4  # arc vs straight travel cutoff

    def __post_init__(self) -> None:
        for name in (
            "trans_static",
            "rot_min",
            "roll_min",
            "move_floor",
            "move_frac",
            "curvature_min",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"threshold {name} must be strictly positive")


def labels_from_stats(
    stats: MotionStats,
    th: LabelerThresholds,
    matrix: IncompatibilityMatrix,
) -> LabelSet | Rejected:
    """Map motion statistics to a canonical label set.

    Branch on total path length: below trans_static the segment is static
    or pure rotation; otherwise translation dominates and rotation labels
    are limited to arc-branch auxiliaries plus gated roll.
    """
    raw: list[str] = []

    if stats.d_trans < th.trans_static:
        if stats.sigma_pan < th.rot_min and stats.sigma_tilt < th.rot_min:
            return canonicalize(["static"], matrix)
        if stats.sigma_pan > th.rot_min:
            raw.append("pan-right" if stats.delta_pan > 0 else "pan-left")
        if stats.sigma_tilt > th.rot_min:
            raw.append("tilt-down" if stats.delta_tilt > 0 else "tilt-up")
        return canonicalize(raw, matrix)

    fwd, lat, vert = stats.dt_cam
    t_move = max(th.move_frac * max(abs(fwd), abs(lat), abs(vert)), th.move_floor)

    if stats.curvature > th.curvature_min:
        raw.append("arc-cw" if stats.delta_pan > 0 else "arc-ccw")
        if stats.sigma_tilt > th.rot_min:
            raw.append("tilt-down" if stats.delta_tilt > 0 else "tilt-up")
        if abs(fwd) > t_move:
            raw.append("dolly-in" if fwd > 0 else "dolly-out")
    else:
        if abs(fwd) > t_move:
            raw.append("dolly-in" if fwd > 0 else "dolly-out")
        if abs(lat) > t_move:
            raw.append("truck-right" if lat > 0 else "truck-left")
        if abs(vert) > t_move:
            raw.append("crane-up" if vert > 0 else "crane-down")

    # Roll only counts when clear forward travel is present.
    if abs(fwd) > t_move and stats.sigma_roll > th.roll_min:
        raw.append("roll-cw" if stats.delta_roll > 0 else "roll-ccw")

    return canonicalize(raw, matrix)


def pose_to_labels(
    seq: PoseSequence,
    th: LabelerThresholds,
    conv: FrameConventions,
    matrix: IncompatibilityMatrix,
) -> LabelSet | Rejected:
    """Label one segment's pose sequence."""
    return labels_from_stats(compute_motion_stats(seq, conv), th, matrix)
