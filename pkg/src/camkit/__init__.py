"""camkit: deterministic camera-motion labeling, VQA generation, and scoring.

The pipeline goes pose trajectories -> constrained multi-label motion
primitives -> balanced 4-way multiple-choice records -> scores, plus the
structured-prompt and label-consistent augmentation utilities around it.
Everything is seeded and pure; no neural inference happens here.
"""

from camkit.geometry import (
    CameraPose,
    FrameConventions,
    MotionStats,
    PoseSequence,
    compute_motion_stats,
    relative_rotation,
)
from camkit.taxonomy import (
    IncompatibilityMatrix,
    LabelSet,
    Rejected,
    build_matrix,
    canonicalize,
    enumerate_valid_sets,
    opposite_of,
)
from camkit.labeler import LabelerThresholds, labels_from_stats, pose_to_labels
from camkit.synth import SynthSpec, reachable_sets, synthesize
from camkit.dataset import BuildReport, SegmentRecord, rebalance, segment_and_label, split
from camkit.vqa import VqaRecord, build_vqa, make_record, sample_distractors
from camkit.evaluate import EvalReport, multilabel_metrics, normalize_answer, score_mcq
from camkit.constraints import project, total_loss
from camkit.augment import CropPlan, reverse_labels, reverse_pose_sequence, zoom_plan
from camkit.prompts import (
    JudgeScores,
    judge_final,
    motion_header,
    render_judge_prompt,
    render_prompt,
)

__version__ = "0.1.0"

__all__ = [
    "BuildReport",
    "CameraPose",
    "CropPlan",
    "EvalReport",
    "FrameConventions",
    "IncompatibilityMatrix",
    "JudgeScores",
    "LabelSet",
    "LabelerThresholds",
    "MotionStats",
    "PoseSequence",
    "Rejected",
    "SegmentRecord",
    "SynthSpec",
    "VqaRecord",
    "build_matrix",
    "build_vqa",
    "canonicalize",
    "compute_motion_stats",
    "enumerate_valid_sets",
    "judge_final",
    "labels_from_stats",
    "make_record",
    "motion_header",
    "multilabel_metrics",
    "normalize_answer",
    "opposite_of",
    "pose_to_labels",
    "project",
    "reachable_sets",
    "rebalance",
    "relative_rotation",
    "render_judge_prompt",
    "render_prompt",
    "reverse_labels",
    "reverse_pose_sequence",
    "sample_distractors",
    "score_mcq",
    "segment_and_label",
    "split",
    "synthesize",
    "total_loss",
    "zoom_plan",
]
