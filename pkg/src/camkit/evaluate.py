"""Answer-file parsing, MCQ scoring, and multi-label diagnostics.

Answer normalization runs in two stages: first the scan for a standalone
choice letter (first occurrence wins, case-insensitive, letters embedded
in words or numbers do not count), then a verbalized-label fallback that
collects primitive phrases from the text and matches the exact set against
the record's options. Anything else is Invalid and scores as incorrect.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from camkit.taxonomy import IncompatibilityMatrix, LabelSet, ZOOM_NAMES
from camkit.vqa import LETTERS, VqaRecord, display_name

_LETTER_RE = re.compile(r"(?<![A-Za-z0-9])([ABCDabcd])(?![A-Za-z0-9])")

_DISPLAY_INVERSE = {display_name(n): n for n in ZOOM_NAMES}

# Plural forms seen in free-form answers, folded before phrase matching.
_SINGULAR = {
    "pans": "pan",
    "tilts": "tilt",
    "rolls": "roll",
    "trucks": "truck",
    "cranes": "crane",
    "dollies": "dolly",
    "arcs": "arc",
    "zooms": "zoom",
}


@dataclass(frozen=True)
class ParsedAnswer:
    """Outcome of normalize_answer: a letter, a matched label set, or invalid."""

    kind: str  # "letter" | "matched" | "invalid"
    letter: str | None = None
    labels: LabelSet | None = None

    @property
    def is_invalid(self) -> bool:
        return self.kind == "invalid"


def _phrase_tokens(text: str) -> list[str]:
    words = re.sub(r"[^a-z0-9]+", " ", text.lower()).split()
    return [_SINGULAR.get(w, w) for w in words]


def _found_primitives(tokens: Sequence[str], names: Sequence[str]) -> tuple[str, ...]:
    """Primitives whose display phrase occurs as a contiguous word run."""
    found = []
    for name in names:
        phrase = display_name(name).split()
        n = len(phrase)
        if any(tokens[i : i + n] == phrase for i in range(len(tokens) - n + 1)):
            found.append(name)
    return tuple(found)


def normalize_answer(
    raw: str, names: Sequence[str] | IncompatibilityMatrix | None = None
) -> ParsedAnswer:
    """First standalone A-D letter, else a verbalized-label set, else invalid."""
    if raw:
        m = _LETTER_RE.search(raw)
        if m:
            return ParsedAnswer(kind="letter", letter=m.group(1).upper())
        if names is not None:
            if isinstance(names, IncompatibilityMatrix):
                names = names.names
            tokens = _phrase_tokens(raw)
            found = _found_primitives(tokens, names)
            if found:
                return ParsedAnswer(kind="matched", labels=LabelSet(found))
    return ParsedAnswer(kind="invalid")


@dataclass(frozen=True)
class LabelMetrics:
    precision: float
    recall: float
    f1: float


@dataclass
class EvalReport:
    n: int
    mcq_accuracy: float | None
    instance_accuracy: float
    per_label: dict[str, LabelMetrics]
    macro_f1: float
    weighted_f1: float
    confusion: np.ndarray = field(repr=False)
    invalid_count: int = 0
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mcq_accuracy": self.mcq_accuracy,
            "instance_accuracy": self.instance_accuracy,
            "per_label": {
                name: {"precision": m.precision, "recall": m.recall, "f1": m.f1}
                for name, m in self.per_label.items()
            },
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "confusion": self.confusion.tolist(),
            "invalid_count": self.invalid_count,
            "warnings": list(self.warnings),
        }

    def to_table(self) -> str:
        """Aligned plain-text summary."""
        lines = [f"{'label':<14} {'P':>7} {'R':>7} {'F1':>7}"]
        for name, m in self.per_label.items():
            lines.append(
                f"{name:<14} {m.precision:>7.3f} {m.recall:>7.3f} {m.f1:>7.3f}"
            )
        lines.append("")
        if self.mcq_accuracy is not None:
            lines.append(f"mcq_accuracy      {self.mcq_accuracy:.4f}")
        lines.append(f"instance_accuracy {self.instance_accuracy:.4f}")
        lines.append(f"macro_f1          {self.macro_f1:.4f}")
        lines.append(f"weighted_f1       {self.weighted_f1:.4f}")
        lines.append(f"n                 {self.n}")
        lines.append(f"invalid_count     {self.invalid_count}")
        return "\n".join(lines)


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def multilabel_metrics(
    pairs: Sequence[tuple[LabelSet, LabelSet]],
    names: Sequence[str],
) -> EvalReport:
    """Instance accuracy, per-label P/R/F1, macro/weighted F1, confusion.

    All 0/0 ratios are defined as 0. Macro-F1 averages over every label in
    the taxonomy; weighted F1 weights by ground-truth support. Confusion
    counts one (i, j) pair per sample for each i in the ground truth and
    each falsely predicted j.
    """
    if not pairs:
        raise ValueError("multilabel_metrics needs at least one pair")
    k = len(names)
    index = {name: i for i, name in enumerate(names)}
    tp = np.zeros(k)
    fp = np.zeros(k)
    fn = np.zeros(k)
    support = np.zeros(k)
    confusion = np.zeros((k, k), dtype=int)
    exact = 0
    for gt, pred in pairs:
        gt_set = set(gt.primitives)
        pred_set = set(pred.primitives)
        if gt_set == pred_set:
            exact += 1
        for name in gt_set:
            support[index[name]] += 1
        for name in gt_set & pred_set:
            tp[index[name]] += 1
        for name in pred_set - gt_set:
            fp[index[name]] += 1
        for name in gt_set - pred_set:
            fn[index[name]] += 1
        for g in gt_set:
            for p in pred_set - gt_set:
                confusion[index[g], index[p]] += 1

    per_label: dict[str, LabelMetrics] = {}
    f1s = np.zeros(k)
    for name, i in index.items():
        prec = float(tp[i] / (tp[i] + fp[i])) if tp[i] + fp[i] > 0 else 0.0
        rec = float(tp[i] / (tp[i] + fn[i])) if tp[i] + fn[i] > 0 else 0.0
        f1s[i] = _f1(prec, rec)
        per_label[name] = LabelMetrics(precision=prec, recall=rec, f1=float(f1s[i]))

    weighted = float(f1s @ support / support.sum()) if support.sum() > 0 else 0.0
    return EvalReport(
        n=len(pairs),
        mcq_accuracy=None,
        instance_accuracy=exact / len(pairs),
        per_label=per_label,
        macro_f1=float(f1s.mean()),
        weighted_f1=weighted,
        confusion=confusion,
    )


def score_mcq(
    records: Sequence[VqaRecord],
    answers: Iterable[Mapping],
    matrix: IncompatibilityMatrix,
) -> EvalReport:
    """Score answer rows {"question_id", "output"} against the key.

    Every known record counts toward n; records with no answer or an
    unparseable answer score as incorrect and increment invalid_count.
    Unknown question ids are warned about and skipped. The multi-label
    diagnostic fields are computed over parseable answers only.
    """
    by_id = {rec.question_id: rec for rec in records}
    outputs: dict[str, str] = {}
    warnings: list[str] = []
    for row in answers:
        qid = row.get("question_id")
        if qid not in by_id:
            warnings.append(f"unknown question_id skipped: {qid!r}")
            continue
        outputs[qid] = row.get("output", "")

    option_sets: dict[str, dict[str, LabelSet]] = {}
    correct = 0
    invalid = 0
    pairs: list[tuple[LabelSet, LabelSet]] = []
    for rec in records:
        raw = outputs.get(rec.question_id)
        if raw is None:
            invalid += 1
            continue
        parsed = normalize_answer(raw, matrix.names)
        letter = parsed.letter
        if parsed.kind == "matched":
            match = [
                lt
                for lt in LETTERS
                if _option_labels(rec, lt, option_sets) == parsed.labels
            ]
            letter = match[0] if len(match) == 1 else None
        if letter is None:
            invalid += 1
            continue
        if letter == rec.answer_letter:
            correct += 1
        pairs.append((rec.answer_labels, _option_labels(rec, letter, option_sets)))

    if pairs:
        report = multilabel_metrics(pairs, matrix.names)
    else:
        report = EvalReport(
            n=0,
            mcq_accuracy=None,
            instance_accuracy=0.0,
            per_label={},
            macro_f1=0.0,
            weighted_f1=0.0,
            confusion=np.zeros((matrix.size, matrix.size), dtype=int),
        )
    report.n = len(records)
    report.mcq_accuracy = correct / len(records) if records else 0.0
    report.invalid_count = invalid
    report.warnings = warnings
    return report


def _option_labels(
    rec: VqaRecord, letter: str, cache: dict[str, dict[str, LabelSet]]
) -> LabelSet:
    """Label set behind one displayed option, via the display-form inverse."""
    per_rec = cache.get(rec.question_id)
    if per_rec is None:
        per_rec = {}
        for lt, text in rec.options.items():
            names = tuple(_DISPLAY_INVERSE[p.strip()] for p in text.split(","))
            per_rec[lt] = LabelSet(names)
        cache[rec.question_id] = per_rec
    return per_rec[letter]
