"""Segment pose streams into 1-second windows, label, rebalance, split.

Windows tile each video front to back; a trailing partial window is
dropped and its frames are counted in the build report. Rebalancing and
splitting derive one seed per label group, so group iteration order can
never perturb the draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from camkit.geometry import CameraPose, FrameConventions, PoseSequence
from camkit.labeler import LabelerThresholds, pose_to_labels
from camkit.seeds import stream
from camkit.taxonomy import IncompatibilityMatrix, LabelSet, Rejected

SAMPLED_FRAMES = 8
DEFAULT_CAP = 200
DEFAULT_FRACTIONS = (0.8, 0.1, 0.1)
SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True)
class SegmentRecord:
    """One labeled 1-second segment."""

    segment_id: str
    video_id: str
    start_frame: int
    frame_count: int
    sampled_frame_indices: tuple[int, ...]
    labels: LabelSet
    split: str = "unassigned"

    def to_json(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "video_id": self.video_id,
            "start_frame": self.start_frame,
            "frame_count": self.frame_count,
            "sampled_frame_indices": list(self.sampled_frame_indices),
            "labels": self.labels.as_list(),
            "split": self.split,
        }

    @classmethod
    def from_json(cls, row: dict) -> "SegmentRecord":
        return cls(
            segment_id=row["segment_id"],
            video_id=row["video_id"],
            start_frame=int(row["start_frame"]),
            frame_count=int(row["frame_count"]),
            sampled_frame_indices=tuple(int(i) for i in row["sampled_frame_indices"]),
            labels=LabelSet(tuple(row["labels"])),
            split=row.get("split", "unassigned"),
        )


@dataclass
class BuildReport:
    """Window-level accounting for one labeling run."""

    accepted: int = 0
    rejected_conflict: int = 0
    rejected_empty: int = 0
    rejected_over_cardinality: int = 0
    dropped_partial_frames: int = 0
    errors: list[dict] = field(default_factory=list)

    def count_rejection(self, reason: str) -> None:
        key = f"rejected_{reason}"
        setattr(self, key, getattr(self, key) + 1)

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected_conflict": self.rejected_conflict,
            "rejected_empty": self.rejected_empty,
            "rejected_over_cardinality": self.rejected_over_cardinality,
            "dropped_partial_frames": self.dropped_partial_frames,
            "errors": self.errors,
        }


def sampled_indices(frame_count: int, samples: int = SAMPLED_FRAMES) -> tuple[int, ...]:
    """Uniform frame subsample: floor(k * frame_count / samples), k = 0..samples-1."""
    return tuple(k * frame_count // samples for k in range(samples))


def segment_video(
    video_id: str,
    fps: float,
    poses: Sequence[CameraPose],
    th: LabelerThresholds,
    conv: FrameConventions,
    matrix: IncompatibilityMatrix,
    report: BuildReport,
) -> list[SegmentRecord]:
    """Tile one video into 1-second windows and label each."""
    window = int(round(fps))
    if window < 2:
        raise ValueError(f"fps {fps} gives a window below 2 frames")
    records: list[SegmentRecord] = []
    n_full = len(poses) // window
    report.dropped_partial_frames += len(poses) - n_full * window
    for k in range(n_full):
        start = k * window
        seq = PoseSequence(tuple(poses[start : start + window]), fps=fps)
        labels = pose_to_labels(seq, th, conv, matrix)
        if isinstance(labels, Rejected):
            report.count_rejection(labels.reason)
            continue
        report.accepted += 1
        records.append(
            SegmentRecord(
                segment_id=f"{video_id}:{start}",
                video_id=video_id,
                start_frame=start,
                frame_count=window,
                sampled_frame_indices=sampled_indices(window),
                labels=labels,
            )
        )
    return records


def segment_and_label(
    videos: Iterable[tuple[str, float, Sequence[CameraPose]]],
    th: LabelerThresholds | None = None,
    conv: FrameConventions | None = None,
    matrix: IncompatibilityMatrix | None = None,
) -> tuple[list[SegmentRecord], BuildReport]:
    """Label a stream of (video_id, fps, poses) videos.

    Per-video failures are recorded in the report and the stream continues.
    """
    from camkit.taxonomy import build_matrix

    th = th if th is not None else LabelerThresholds()
    conv = conv if conv is not None else FrameConventions()
    matrix = matrix if matrix is not None else build_matrix("base")
    report = BuildReport()
    records: list[SegmentRecord] = []
    for video_id, fps, poses in videos:
        try:
            records.extend(
                segment_video(video_id, fps, poses, th, conv, matrix, report)
            )
        except (ValueError, KeyError) as exc:
            report.errors.append({"video_id": video_id, "error": str(exc)})
    records.sort(key=lambda r: r.segment_id)
    return records, report


def _group_by_labels(records: Iterable[SegmentRecord]) -> dict[tuple[str, ...], list[SegmentRecord]]:
    groups: dict[tuple[str, ...], list[SegmentRecord]] = {}
    for rec in records:
        groups.setdefault(rec.labels.primitives, []).append(rec)
    return groups


def rebalance(
    records: Sequence[SegmentRecord], cap: int = DEFAULT_CAP, seed: int = 0
) -> list[SegmentRecord]:
    """Cap every exact-label-set group at cap via a uniform seeded sample."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    kept: list[SegmentRecord] = []
    for key, group in _group_by_labels(records).items():
        group = sorted(group, key=lambda r: r.segment_id)
        if len(group) > cap:
            rng = stream(seed, "rebalance", ",".join(key))
            picked = rng.choice(len(group), size=cap, replace=False)
            group = [group[i] for i in sorted(picked)]
        kept.extend(group)
    kept.sort(key=lambda r: r.segment_id)
    return kept


def _quotas(n: int, fractions: Sequence[float]) -> list[int]:
    """Largest-remainder apportionment; ties go to the earlier fold."""
    exact = [n * f for f in fractions]
    base = [int(e) for e in exact]
    leftover = n - sum(base)
    order = sorted(
        range(len(fractions)), key=lambda i: (-(exact[i] - base[i]), i)
    )
    for i in order[:leftover]:
        base[i] += 1
    return base


def split(
    records: Sequence[SegmentRecord],
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seed: int = 0,
) -> list[SegmentRecord]:
    """Stratified split by exact label set, largest-remainder rounding.

    Within each group the order is a seeded shuffle; train fills first, so
    singleton groups land in train.
    """
    if len(fractions) != 3:
        raise ValueError("fractions must have exactly three entries")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    out: list[SegmentRecord] = []
    for key, group in _group_by_labels(records).items():
        group = sorted(group, key=lambda r: r.segment_id)
        rng = stream(seed, "split", ",".join(key))
        order = rng.permutation(len(group))
        quotas = _quotas(len(group), fractions)
        bounds = [quotas[0], quotas[0] + quotas[1]]
        for pos, idx in enumerate(order):
            name = SPLIT_NAMES[0 if pos < bounds[0] else 1 if pos < bounds[1] else 2]
            out.append(replace(group[idx], split=name))
    out.sort(key=lambda r: r.segment_id)
    return out
