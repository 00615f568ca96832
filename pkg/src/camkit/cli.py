"""Pipeline command line.

Every stage of the pose-to-benchmark pipeline is a subcommand reading and
writing UTF-8 JSONL with LF newlines. Randomness flows from one base seed
(--seed, falling back to the CAMKIT_SEED environment variable) through
named per-purpose streams, so reruns are byte-identical and stages cannot
perturb each other. Each file-producing run writes a .run.json sidecar
with the resolved configuration.

Malformed input exits nonzero with a one-line JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from camkit import __version__
from camkit.augment import ZOOM_KINDS, manifest_row, reverse_labels, zoom_plan
from camkit.constraints import DEFAULT_TAU, project
from camkit.dataset import (
    DEFAULT_CAP,
    DEFAULT_FRACTIONS,
    SAMPLED_FRAMES,
    SegmentRecord,
    rebalance,
    segment_and_label,
    split,
)
from camkit.evaluate import score_mcq
from camkit.geometry import FrameConventions, PoseSequence
from camkit.io import (
    parse_pose_record,
    pose_record,
    read_jsonl,
    write_json,
    write_jsonl,
)
from camkit.labeler import LabelerThresholds, pose_to_labels
from camkit.prompts import (
    PROMPT_KINDS,
    judge_report,
    motion_header,
    render_judge_prompt,
    render_prompt,
)
from camkit.seeds import derive_seed
from camkit.synth import SynthSpec, synthesize
from camkit.taxonomy import (
    LabelSet,
    Rejected,
    build_matrix,
    enumerate_valid_sets,
    pools_by_cardinality,
)
from camkit.vqa import VqaRecord, build_vqa


@dataclass
class RunConfig:
    """Everything a rerun needs; written next to each output file."""

    command: str
    seed: int
    taxonomy: str = "base"
    pose_convention: str = "c2w"
    cap: int = DEFAULT_CAP
    fractions: tuple[float, float, float] = DEFAULT_FRACTIONS
    thresholds: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    output: str | None = None
    version: str = __version__

    def write_sidecar(self) -> None:
        if self.output:
            write_json(f"{self.output}.run.json", asdict(self))


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("CAMKIT_SEED", "0"))


def _thresholds(args) -> LabelerThresholds:
    return LabelerThresholds(
        trans_static=args.th_trans_static,
        rot_min=args.th_rot_min,
        roll_min=args.th_roll_min,
        move_floor=args.th_move_floor,
        move_frac=args.th_move_frac,
        curvature_min=args.th_curvature,
    )


def _config(args, seed: int, **inputs) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        seed=seed,
        taxonomy=getattr(args, "taxonomy", "base"),
        pose_convention=getattr(args, "pose_convention", "c2w"),
        cap=getattr(args, "cap", DEFAULT_CAP),
        fractions=getattr(args, "fractions", DEFAULT_FRACTIONS),
        inputs={k: v for k, v in inputs.items() if v is not None},
        output=getattr(args, "out", None),
    )
    if hasattr(args, "th_trans_static"):
        cfg.thresholds = asdict(_thresholds(args))
    return cfg


def _read_segments(path: str) -> list[SegmentRecord]:
    return [SegmentRecord.from_json(row) for row in read_jsonl(path)]


def _cmd_label(args) -> int:
    th = _thresholds(args)
    videos = (
        parse_pose_record(row, args.pose_convention) for row in read_jsonl(args.inp)
    )
    records, report = segment_and_label(videos, th=th)
    write_jsonl(args.out, (r.to_json() for r in records))
    write_json(args.report or f"{args.out}.report.json", report.to_json())
    _config(args, _resolve_seed(args), poses=args.inp).write_sidecar()
    return 0


def _cmd_balance(args) -> int:
    seed = _resolve_seed(args)
    records = rebalance(_read_segments(args.inp), cap=args.cap, seed=seed)
    write_jsonl(args.out, (r.to_json() for r in records))
    _config(args, seed, segments=args.inp).write_sidecar()
    return 0


def _cmd_split(args) -> int:
    seed = _resolve_seed(args)
    records = split(_read_segments(args.inp), fractions=args.fractions, seed=seed)
    write_jsonl(args.out, (r.to_json() for r in records))
    _config(args, seed, segments=args.inp).write_sidecar()
    return 0


def _cmd_vqa(args) -> int:
    seed = _resolve_seed(args)
    matrix = build_matrix(args.taxonomy)
    records = build_vqa(
        _read_segments(args.inp), enumerate_valid_sets(matrix), seed_base=seed
    )
    write_jsonl(args.out, (r.to_json() for r in records))
    _config(args, seed, segments=args.inp).write_sidecar()
    return 0


def _cmd_score(args) -> int:
    matrix = build_matrix(args.taxonomy)
    key = [VqaRecord.from_json(row) for row in read_jsonl(args.inp)]
    report = score_mcq(key, read_jsonl(args.answers), matrix)
    if args.out:
        write_json(args.out, report.to_json())
        _config(args, _resolve_seed(args), key=args.inp, answers=args.answers).write_sidecar()
    print(report.to_table())
    return 0


def _cmd_project(args) -> int:
    matrix = build_matrix(args.taxonomy)
    rows = []
    for row in read_jsonl(args.inp):
        labels = project(row["probs"], matrix, tau=args.tau)
        rows.append(
            {
                "segment_id": row.get("segment_id"),
                "labels": labels.as_list() if not isinstance(labels, Rejected) else None,
                "rejected": labels.reason if isinstance(labels, Rejected) else None,
            }
        )
    write_jsonl(args.out, rows)
    _config(args, _resolve_seed(args), probs=args.inp).write_sidecar()
    return 0


def _cmd_synth(args) -> int:
    seed = _resolve_seed(args)
    th = _thresholds(args)
    conv = FrameConventions()
    poses, truth = [], []
    for i, row in enumerate(read_jsonl(args.inp)):
        spec = SynthSpec(
            target=LabelSet(tuple(row["target"])),
            magnitude_scale=float(row.get("magnitude_scale", 2.0)),
            frames=int(row.get("frames", 15)),
            seed=int(row.get("seed", derive_seed(seed, "synth", i))),
            jitter=float(row.get("jitter", 0.0)),
        )
        video_id = row.get("video_id") or f"synth-{i:05d}"
        seq = synthesize(spec, conv=conv, th=th)
        poses.append(pose_record(video_id, seq))
        truth.append({"video_id": video_id, "labels": spec.target.as_list()})
    write_jsonl(args.out, poses)
    write_jsonl(args.sidecar or f"{args.out}.truth.jsonl", truth)
    _config(args, seed, specs=args.inp).write_sidecar()
    return 0


def _cmd_augment(args) -> int:
    seed = _resolve_seed(args)
    base = build_matrix("base")
    rows, skipped = [], 0
    for rec in _read_segments(args.inp):
        for kind in args.kinds:
            if kind == "reverse":
                labels = reverse_labels(rec.labels, base)
                plan = None
            else:
                plan, labels = zoom_plan(
                    kind,
                    frames=SAMPLED_FRAMES,
                    seed=derive_seed(seed, "augment", rec.segment_id),
                    labels=rec.labels,
                )
            if isinstance(labels, Rejected):
                skipped += 1
                continue
            rows.append(manifest_row(rec.segment_id, kind, labels, plan))
    write_jsonl(args.out, rows)
    _config(args, seed, segments=args.inp).write_sidecar()
    print(json.dumps({"written": len(rows), "skipped_conflicts": skipped}))
    return 0


def _segments_by_video(records: list[SegmentRecord]) -> dict[str, list[SegmentRecord]]:
    videos: dict[str, list[SegmentRecord]] = {}
    for rec in sorted(records, key=lambda r: (r.video_id, r.start_frame)):
        videos.setdefault(rec.video_id, []).append(rec)
    return videos


def _cmd_prompt(args) -> int:
    if args.judge_report:
        report = judge_report(read_jsonl(args.judge_report))
        if args.out:
            write_json(args.out, report)
        else:
            print(json.dumps(report, indent=2))
        return 0
    if args.kind == "judge":
        if args.inp is None or args.out is None:
            raise ValueError("prompt --kind judge needs --in and --out")
        rows = []
        for row in read_jsonl(args.inp):
            labels = row.get("motion_labels") or [
                LabelSet(tuple(s)) for s in row["labels"]
            ]
            rows.append(
                {
                    "clip_id": row["clip_id"],
                    "prompt": render_judge_prompt(labels, row["description"]),
                }
            )
        write_jsonl(args.out, rows)
        return 0
    if args.kind in ("baseline", "structured") and args.inp is None:
        print(render_prompt(args.kind, args.frames, args.fps))
        return 0
    if args.inp is None or args.out is None:
        raise ValueError(f"prompt --kind {args.kind} needs --in and --out")
    rows = []
    for video_id, recs in _segments_by_video(_read_segments(args.inp)).items():
        header = motion_header([r.labels for r in recs])
        rows.append(
            {
                "video_id": video_id,
                "kind": args.kind,
                "prompt": render_prompt(
                    args.kind,
                    args.frames,
                    args.fps,
                    header=header if args.kind == "injected" else None,
                ),
            }
        )
    write_jsonl(args.out, rows)
    return 0


def _cmd_enumerate(args) -> int:
    matrix = build_matrix(args.taxonomy)
    pools = pools_by_cardinality(enumerate_valid_sets(matrix))
    write_json(
        args.out,
        {
            "mode": matrix.mode,
            "names": list(matrix.names),
            "counts": {str(c): len(sets) for c, sets in pools.items()},
            "sets": {
                str(c): [s.as_list() for s in sets] for c, sets in pools.items()
            },
        },
    )
    return 0


def _fractions(text: str) -> tuple[float, float, float]:
    parts = tuple(float(p) for p in text.split(","))
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("fractions must be three comma-separated numbers")
    return parts


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="base seed (default: $CAMKIT_SEED or 0)")


def _add_taxonomy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--taxonomy", choices=("base", "zoom"), default="base")


def _add_thresholds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--th-trans-static", type=float, default=0.05)
    p.add_argument("--th-rot-min", type=float, default=0.2)
    p.add_argument("--th-roll-min", type=float, default=0.5)
    p.add_argument("--th-move-floor", type=float, default=0.5)
    p.add_argument("--th-move-frac", type=float, default=0.3)
    p.add_argument("--th-curvature", type=float, default=9e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camkit",
        description="camera-motion labeling, VQA building, and scoring pipeline",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("label", help="pose JSONL -> labeled segment JSONL")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--pose-convention", choices=("c2w", "w2c"), default="c2w")
    _add_seed(p)
    _add_thresholds(p)
    p.set_defaults(func=_cmd_label)

    p = sub.add_parser("balance", help="cap per-label-set group sizes")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_seed(p)
    p.set_defaults(func=_cmd_balance)

    p = sub.add_parser("split", help="assign stratified train/val/test splits")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fractions", type=_fractions, default=DEFAULT_FRACTIONS)
    _add_seed(p)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("vqa", help="segments -> 4-way multiple-choice records")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    _add_taxonomy(p)
    _add_seed(p)
    p.set_defaults(func=_cmd_vqa)

    p = sub.add_parser("score", help="score an answer file against a VQA key")
    p.add_argument("--in", dest="inp", required=True, help="VQA key JSONL")
    p.add_argument("--answers", required=True)
    p.add_argument("--out", default=None)
    _add_taxonomy(p)
    _add_seed(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("project", help="probability rows -> constrained label sets")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    _add_taxonomy(p)
    _add_seed(p)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("synth", help="target label sets -> pose JSONL + truth sidecar")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", default=None)
    _add_seed(p)
    _add_thresholds(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("augment", help="segments -> augmentation manifest")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--kinds",
        type=lambda s: tuple(s.split(",")),
        default=("reverse",) + ZOOM_KINDS,
        help="comma list from: reverse,zoom_in,zoom_out,center_crop",
    )
    _add_seed(p)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("prompt", help="render description or judge prompts")
    p.add_argument("--in", dest="inp", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--kind", choices=PROMPT_KINDS + ("judge",), default="structured")
    p.add_argument("--frames", type=int, default=SAMPLED_FRAMES)
    p.add_argument("--fps", type=float, default=1.0)
    p.add_argument("--judge-report", default=None, help="aggregate a judge-score JSONL")
    _add_seed(p)
    p.set_defaults(func=_cmd_prompt)

    p = sub.add_parser("enumerate", help="valid label-set pools as JSON")
    p.add_argument("--out", required=True)
    _add_taxonomy(p)
    p.set_defaults(func=_cmd_enumerate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
