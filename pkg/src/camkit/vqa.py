"""4-way multiple-choice record construction with complexity-matched distractors.

Distractors come from the precomputed pool of constraint-valid label sets,
stratified by cardinality and mixed per the ground-truth cardinality rule.
Draws are without replacement and never equal the ground truth; for
cardinalities 1 and 2 a uniformly chosen drawn element is then replaced by
the ground truth, for cardinality 3 the ground truth is appended.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from camkit.dataset import SegmentRecord
from camkit.seeds import derive_seed
from camkit.taxonomy import LabelSet, pools_by_cardinality

LETTERS = ("A", "B", "C", "D")

PROMPT_TEMPLATE = (
    "<video>\n"
    "Identify the camera motion depicted in the video using standard "
    "cinematographic terminology.\n"
    "Options:\n"
    "(A) {a}\n"
    "(B) {b}\n"
    "(C) {c}\n"
    "(D) {d}"
)

# Verbal forms: hyphenated wire names become spaced display names and the
# rotation-direction abbreviations are expanded.
_WORD_EXPANSION = {"cw": "clockwise", "ccw": "counterclockwise"}


def display_name(primitive: str) -> str:
    words = primitive.split("-")
    return " ".join(_WORD_EXPANSION.get(w, w) for w in words)


def verbalize(labels: LabelSet) -> str:
    """Comma-joined display names in canonical order."""
    return ", ".join(display_name(p) for p in labels)


class PoolExhausted(RuntimeError):
    """A cardinality pool cannot supply the requested number of draws."""


# Draw counts per ground-truth cardinality: list of (pool_card, n_draws)
# in assembly order.
_DRAW_RULE: dict[int, tuple[tuple[int, int], ...]] = {
    1: ((2, 1), (1, 3)),
    2: ((1, 1), (3, 1), (2, 2)),
    3: ((2, 2), (3, 1)),
}


@dataclass(frozen=True)
class DistractorSample:
    """Four options plus the audit trail of the pre-replacement draws."""

    options: tuple[LabelSet, ...]
    correct_index: int
    drawn: tuple[tuple[int, LabelSet], ...]  # (pool cardinality, set) per draw


def sample_distractors(
    gt: LabelSet,
    pools: dict[int, list[LabelSet]],
    rng: np.random.Generator,
) -> DistractorSample:
    card = len(gt)
    if card not in _DRAW_RULE:
        raise ValueError(f"ground-truth cardinality {card} out of range")
    drawn: list[tuple[int, LabelSet]] = []
    options: list[LabelSet] = []
    for pool_card, n_draws in _DRAW_RULE[card]:
        pool = [s for s in pools.get(pool_card, []) if s != gt]
        if len(pool) < n_draws:
            raise PoolExhausted(
                f"cardinality-{pool_card} pool has {len(pool)} candidates, "
                f"needs {n_draws}"
            )
        picked = rng.choice(len(pool), size=n_draws, replace=False)
        for i in picked:
            drawn.append((pool_card, pool[i]))
            options.append(pool[i])
    if card == 3:
        options.append(gt)
        correct = len(options) - 1
    else:
        correct = int(rng.integers(len(options)))
        options[correct] = gt
    return DistractorSample(
        options=tuple(options), correct_index=correct, drawn=tuple(drawn)
    )


@dataclass(frozen=True)
class VqaRecord:
    question_id: str
    segment_id: str
    prompt_text: str
    options: dict[str, str]
    answer_letter: str
    answer_labels: LabelSet

    def to_json(self) -> dict:
        return {
            "question_id": self.question_id,
            "segment_id": self.segment_id,
            "prompt": self.prompt_text,
            "options": dict(self.options),
            "answer": self.answer_letter,
            "answer_labels": self.answer_labels.as_list(),
        }

    @classmethod
    def from_json(cls, row: dict) -> "VqaRecord":
        return cls(
            question_id=row["question_id"],
            segment_id=row["segment_id"],
            prompt_text=row["prompt"],
            options=dict(row["options"]),
            answer_letter=row["answer"],
            answer_labels=LabelSet(tuple(row["answer_labels"])),
        )


def make_record(
    segment: SegmentRecord,
    pools: dict[int, list[LabelSet]],
    seed_base: int,
) -> VqaRecord:
    """One MCQ record; independently reproducible from (seed_base, segment_id)."""
    rng = np.random.default_rng(derive_seed(seed_base, "vqa", segment.segment_id))
    sample = sample_distractors(segment.labels, pools, rng)
    order = rng.permutation(4)
    shuffled = [sample.options[i] for i in order]
    answer_letter = LETTERS[list(order).index(sample.correct_index)]
    options = {letter: verbalize(s) for letter, s in zip(LETTERS, shuffled)}
    prompt = PROMPT_TEMPLATE.format(
        a=options["A"], b=options["B"], c=options["C"], d=options["D"]
    )
    return VqaRecord(
        question_id=f"q-{segment.segment_id}",
        segment_id=segment.segment_id,
        prompt_text=prompt,
        options=options,
        answer_letter=answer_letter,
        answer_labels=segment.labels,
    )


def build_vqa(
    segments: list[SegmentRecord],
    valid_sets: list[LabelSet],
    seed_base: int = 0,
) -> list[VqaRecord]:
    pools = pools_by_cardinality(valid_sets)
    return [make_record(seg, pools, seed_base) for seg in segments]
