"""Description-prompt rendering, motion-header serialization, judge scoring.

The three description prompts share one frames preamble and differ in the
instruction body and whether a per-second motion header is injected between
the two. The judge prompt is a fixed rubric with two substitution slots;
its five 1-5 scores reduce to a weighted final value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from camkit.taxonomy import IncompatibilityMatrix, LabelSet, canonicalize
from camkit.vqa import display_name

PROMPT_KINDS = ("baseline", "structured", "injected")

FRAMES_LINE = (
    "Here are {n} consecutive video frames. "
    "They are evenly sampled at a frame rate of {fps} FPS."
)

BASELINE_BODY = (
    "Describe the video clip using clear and concise language. "
    "Make your description in one paragraph."
)

STRUCTURED_BODY = (
    "Describe this video using the filmmaker's language, highlighting the "
    "lighting, framing, video composition, and especially camera usage that "
    "connects different frames. For example: \"At the beginning, <video "
    "content>; then <camera motion>, <video content>; ...; finally, <camera "
    "motion>, <video content>\". Make your description in a paragraph."
)

HEADER_PREFIX = "Per-second camera motion: ["

JUDGE_WEIGHTS = {"ca": 0.30, "tc": 0.25, "rd": 0.25, "nm": 0.10, "lq": 0.10}

JUDGE_TEMPLATE = """You are an expert cinematographer evaluating a video description. You are given:
- Ground-truth per-second camera motion labels: [{motion_labels}]
- The generated video description: [{description}]
Score the description from 1 to 5 on each of the following dimensions:
1. Cinematographic Accuracy (CA)
Assess whether the description correctly and precisely identifies camera angle, framing, lens focal length, camera movement (direction and speed), lighting type and direction, and composition.
- 5: All key elements correct, using industry-standard terminology.
- 4: Mostly accurate with minor omissions or ambiguity.
- 3: Some inaccuracies or generalizations; partially correct terminology.
- 2: Several incorrect elements; relies on non-technical language.
- 1: Inaccurate or vague; lacks meaningful cinematographic detail.
2. Temporal Continuity (TC)
Measure how clearly the description communicates the sequence of events, camera transitions, and rhythmic or pacing logic throughout the scene.
- 5: Seamless, accurate timeline; per-shot motion and transitions are logically and temporally clear.
- 4: Mostly clear sequence with minor inconsistencies or vague transitions.
- 3: Partial timeline or implied transitions; lacks precise continuity.
- 2: Confusing or incorrect sequence; missing or inaccurate motion description.
- 1: Lacks chronological structure; incoherent scene progression.
3. Reproducibility Detail (RD)
Evaluate whether the description provides sufficient technical detail for a filmmaker to recreate the scene, including shot scale, camera positioning, blocking, movement mechanics, lighting setup, frame duration, and scene geometry.
- 5: Fully reproducible; contains all necessary technical elements.
- 4: Mostly reproducible; a few minor missing parameters.
- 3: Some useful information; key elements (e.g., camera height, lighting angles) are missing.
- 2: Vague and incomplete; only general scene description present.
- 1: Not reproducible; lacks all relevant production-level detail.
4. Narrative Mood & Tone (NM)
Measure the description's ability to convey the emotional atmosphere, dramatic intention, and cinematic tone (e.g., tension, melancholy, exuberance), as well as the subjective energy of the scene.
- 5: Strong emotional clarity aligned with visual style and editing rhythm.
- 4: Clear tone with some expressive nuance.
- 3: Functional tone description; lacks depth or resonance.
- 2: Tone is underdeveloped or inconsistent.
- 1: No discernible mood or emotional quality.
5. Language Quality & Fluency (LQ)
Assess overall clarity, precision, and fluency of the writing, with a focus on cinematographic vocabulary, cohesion, and technical correctness in grammar and syntax.
- 5: Polished, technically fluent, and lexically precise.
- 4: Clear and correct with minor stylistic or lexical weaknesses.
- 3: Mostly clear; occasional awkward phrasing or imprecise terminology.
- 2: Grammatically flawed or inconsistent in tone or register.
- 1: Unclear, ungrammatical, or non-professional.
For each dimension, provide: (1) Score (1-5), and (2) One-sentence justification.
Finally, compute the weighted average:
Final = 0.30*CA + 0.25*TC + 0.25*RD + 0.10*NM + 0.10*LQ"""


def _fps_text(fps: float) -> str:
    # 2.0 prints as "2", 2.5 stays "2.5"
    return str(int(fps)) if float(fps).is_integer() else str(fps)


def motion_header(per_second: Sequence[LabelSet]) -> str:
    """Serialize one label set per second into the bracketed header string."""
    if not per_second:
        raise ValueError("motion_header needs at least one segment")
    segments = [
        " and ".join(display_name(p) for p in labels) for labels in per_second
    ]
    return HEADER_PREFIX + ", ".join(segments) + "]"


def parse_motion_header(
    header: str, matrix: IncompatibilityMatrix
) -> list[LabelSet]:
    """Inverse of motion_header, for round-trip checks and manifest ingest."""
    m = re.fullmatch(re.escape(HEADER_PREFIX[:-1]) + r"\[(.*)\]", header)
    if m is None:
        raise ValueError(f"not a motion header: {header!r}")
    display_to_name = {display_name(n): n for n in matrix.names}
    out = []
    for segment in m.group(1).split(", "):
        names = []
        for phrase in segment.split(" and "):
            if phrase not in display_to_name:
                raise ValueError(f"unknown primitive phrase: {phrase!r}")
            names.append(display_to_name[phrase])
        labels = canonicalize(names, matrix)
        if not labels:
            raise ValueError(f"segment does not canonicalize: {segment!r}")
        out.append(labels)
    return out


def render_prompt(
    kind: str, n_frames: int, fps: float, header: str | None = None
) -> str:
    """Render one of the three description prompts.

    baseline and structured are the frames preamble plus their body; the
    injected variant puts the motion header (with a closing period) on the
    line right after the preamble, then the structured body.
    """
    if kind not in PROMPT_KINDS:
        raise ValueError(f"unknown prompt kind: {kind!r}")
    first = FRAMES_LINE.format(n=n_frames, fps=_fps_text(fps))
    if kind == "baseline":
        return first + "\n\n" + BASELINE_BODY
    if kind == "structured":
        return first + "\n\n" + STRUCTURED_BODY
    if header is None:
        raise ValueError("injected prompt needs a motion header")
    return first + "\n" + header + ".\n\n" + STRUCTURED_BODY


@dataclass(frozen=True)
class JudgeScores:
    """Five rubric scores plus the derived weighted final."""

    ca: int
    tc: int
    rd: int
    nm: int
    lq: int

    def __post_init__(self):
        for field_name in JUDGE_WEIGHTS:
            value = getattr(self, field_name)
            if not isinstance(value, int) or not 1 <= value <= 5:
                raise ValueError(f"{field_name} must be an integer in 1..5")

    @property
    def final(self) -> float:
        return judge_final(self.ca, self.tc, self.rd, self.nm, self.lq)

    def to_json(self) -> dict:
        return {
            "ca": self.ca,
            "tc": self.tc,
            "rd": self.rd,
            "nm": self.nm,
            "lq": self.lq,
            "final": self.final,
        }


def judge_final(ca: int, tc: int, rd: int, nm: int, lq: int) -> float:
    """Weighted rubric average 0.30 CA + 0.25 TC + 0.25 RD + 0.10 NM + 0.10 LQ.

    Computed on the integer-scaled numerator so the published values come
    out exactly (1.75, 3.65, 3.85) instead of within an epsilon.
    """
    for value in (ca, tc, rd, nm, lq):
        if not isinstance(value, int) or not 1 <= value <= 5:
            raise ValueError("judge scores must be integers in 1..5")
    return (30 * ca + 25 * tc + 25 * rd + 10 * nm + 10 * lq) / 100.0


def render_judge_prompt(motion_labels: str | Sequence[LabelSet], description: str) -> str:
    """Fill the two slots of the judge rubric.

    motion_labels may be pre-serialized text or a per-second list of label
    sets, in which case it is serialized the same way as the motion header's
    bracket interior.
    """
    if not isinstance(motion_labels, str):
        segments = [
            " and ".join(display_name(p) for p in labels)
            for labels in motion_labels
        ]
        motion_labels = ", ".join(segments)
    return JUDGE_TEMPLATE.format(
        motion_labels=motion_labels, description=description
    )


def judge_report(rows: Iterable[dict]) -> dict:
    """Aggregate ingested judge scores: per-clip finals plus the mean.

    The mean across clips is this toolkit's own summary statistic, flagged
    as such in the output.
    """
    per_clip = []
    for row in rows:
        scores = JudgeScores(
            ca=row["ca"], tc=row["tc"], rd=row["rd"], nm=row["nm"], lq=row["lq"]
        )
        per_clip.append({"clip_id": row["clip_id"], **scores.to_json()})
    if not per_clip:
        raise ValueError("no judge rows to aggregate")
    return {
        "clips": per_clip,
        "mean_final": sum(c["final"] for c in per_clip) / len(per_clip),
        "mean_is_toolkit_extension": True,
    }
