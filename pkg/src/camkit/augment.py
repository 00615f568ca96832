"""Label-consistent augmentation planning.

Three transforms: temporal reversal (swaps every directional label), zoom
simulation via progressive center-crop schedules (adds a zoom label under
the extended taxonomy), and plain center crop (labels untouched). Only the
plans and the label bookkeeping live here; applying rectangles to pixels
is the consumer's job.
"""

from __future__ import annotations

from dataclasses import dataclass

from camkit.geometry import PoseSequence
from camkit.seeds import stream
from camkit.taxonomy import (
    IncompatibilityMatrix,
    LabelSet,
    Rejected,
    build_matrix,
    canonicalize,
    opposite_of,
)

ZOOM_KINDS = ("zoom_in", "zoom_out", "center_crop")
TARGET_RATIO_RANGE = (0.6, 0.9)


@dataclass(frozen=True)
class CropPlan:
    """Per-frame centered square crop rectangles in normalized coordinates."""

    kind: str
    rects: tuple[tuple[float, float, float, float], ...]

    def __post_init__(self):
        if self.kind not in ZOOM_KINDS:
            raise ValueError(f"unknown crop plan kind: {self.kind!r}")
        for cx, cy, w, h in self.rects:
            if not (cx == cy == 0.5 and w == h and 0.6 <= w <= 1.0):
                raise ValueError(f"invalid crop rect: {(cx, cy, w, h)}")

    def widths(self) -> tuple[float, ...]:
        return tuple(r[2] for r in self.rects)

    def to_json(self) -> dict:
        return {"kind": self.kind, "rects": [list(r) for r in self.rects]}


def reverse_labels(
    labels: LabelSet, matrix: IncompatibilityMatrix
) -> LabelSet | Rejected:
    """Swap every directional primitive for its opposite and re-canonicalize."""
    flipped = [opposite_of(name) or name for name in labels]
    return canonicalize(flipped, matrix)


def reverse_pose_sequence(seq: PoseSequence) -> PoseSequence:
    return seq.reversed()


def _zoom_label(kind: str) -> str | None:
    return {"zoom_in": "zoom-in", "zoom_out": "zoom-out"}.get(kind)


def zoom_plan(
    kind: str,
    target_ratio: float | None = None,
    frames: int = 8,
    seed: int = 0,
    labels: LabelSet | None = None,
    matrix: IncompatibilityMatrix | None = None,
) -> tuple[CropPlan, LabelSet | Rejected | None]:
    """Build a crop schedule and, when labels are given, the new label set.

    target_ratio=None draws one uniformly from [0.6, 0.9] using the named
    stream (seed, "augment", kind). Zoom-in interpolates the crop width
    linearly from 1.0 down to the target; zoom-out is the same schedule
    reversed; center_crop holds the target constant. The label delta is
    evaluated under the zoom-extended matrix, so a base set that already
    contains the conflicting dolly primitive comes back Rejected.
    """
    if kind not in ZOOM_KINDS:
        raise ValueError(f"unknown crop plan kind: {kind!r}")
    if frames < 2:
        raise ValueError("a crop schedule needs at least 2 frames")
    if target_ratio is None:
        lo, hi = TARGET_RATIO_RANGE
        target_ratio = float(stream(seed, "augment", kind).uniform(lo, hi))
    if not TARGET_RATIO_RANGE[0] <= target_ratio <= TARGET_RATIO_RANGE[1]:
        raise ValueError(f"target ratio {target_ratio} outside {TARGET_RATIO_RANGE}")

    if kind == "center_crop":
        widths = [target_ratio] * frames
    else:
        widths = [
            1.0 + (target_ratio - 1.0) * t / (frames - 1) for t in range(frames)
        ]
        if kind == "zoom_out":
            widths.reverse()
    plan = CropPlan(kind=kind, rects=tuple((0.5, 0.5, w, w) for w in widths))

    new_labels: LabelSet | Rejected | None = None
    if labels is not None:
        added = _zoom_label(kind)
        if added is None:
            new_labels = labels
        else:
            if matrix is None or matrix.mode != "zoom":
                matrix = build_matrix("zoom")
            new_labels = canonicalize(list(labels) + [added], matrix)
    return plan, new_labels


def manifest_row(
    source_segment_id: str,
    kind: str,
    labels: LabelSet,
    plan: CropPlan | None = None,
) -> dict:
    """One augmentation-manifest JSONL row."""
    row = {
        "source_segment_id": source_segment_id,
        "segment_id": f"{source_segment_id}#{kind}",
        "kind": kind,
        "labels": labels.as_list(),
    }
    if plan is not None:
        row["crop_plan"] = plan.to_json()
    return row
