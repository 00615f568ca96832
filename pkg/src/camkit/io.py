"""JSONL and pose wire-format helpers. UTF-8, LF newlines throughout."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from camkit.geometry import CameraPose, PoseSequence


def read_jsonl(path: str | Path) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")


def write_json(path: str | Path, obj: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def pose_from_flat(values: list[float], convention: str = "c2w") -> CameraPose:
    """One frame from the 12-float row-major [R|t] layout.

    Layout: r11 r12 r13 t1 r21 r22 r23 t2 r31 r32 r33 t3. The stored
    transform is camera-to-world by default; world-to-camera inputs are
    inverted on ingest so everything downstream sees camera-to-world.
    """
    arr = np.asarray(values, dtype=float)
    if arr.shape != (12,):
        raise ValueError("extrinsic row must contain exactly 12 floats")
    mat = arr.reshape(3, 4)
    r, t = mat[:, :3], mat[:, 3]
    if convention == "c2w":
        return CameraPose(r, t)
    if convention == "w2c":
        return CameraPose(r.T, -(r.T @ t))
    raise ValueError(f"unknown pose convention: {convention!r}")


def pose_to_flat(pose: CameraPose) -> list[float]:
    mat = np.hstack([pose.rotation, pose.translation.reshape(3, 1)])
    return [float(v) for v in mat.reshape(12)]


def parse_pose_record(row: dict, convention: str = "c2w") -> tuple[str, float, list[CameraPose]]:
    """Parse one pose JSONL record into (video_id, fps, poses)."""
    try:
        video_id = row["video_id"]
        fps = float(row["fps"])
        frames = row["extrinsics"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed pose record: {exc}") from exc
    if not isinstance(video_id, str) or not video_id:
        raise ValueError("video_id must be a non-empty string")
    poses = [pose_from_flat(frame, convention) for frame in frames]
    return video_id, fps, poses


def pose_record(video_id: str, seq: PoseSequence) -> dict:
    return {
        "video_id": video_id,
        "fps": seq.fps,
        "extrinsics": [pose_to_flat(p) for p in seq],
    }
