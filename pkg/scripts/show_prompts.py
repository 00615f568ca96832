"""Print every prompt template the toolkit renders, filled with live labels.

Covers the three description prompts (baseline, structured, injected), the
motion header serialization it injects, and the judge rubric with its
weighted composite.
"""

import argparse

from camkit.prompts import (
    judge_final,
    motion_header,
    render_judge_prompt,
    render_prompt,
)
from camkit.taxonomy import LabelSet

RULE = "-" * 72

PER_SECOND = [
    LabelSet(("pan-left", "tilt-up")),
    LabelSet(("static",)),
    LabelSet(("truck-right", "dolly-in")),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=10)
    parser.add_argument("--fps", type=float, default=2.0)
    args = parser.parse_args()

    header = motion_header(PER_SECOND)
    print(RULE)
    print("motion header")
    print(RULE)
    print(header)

    for kind in ("baseline", "structured", "injected"):
        print(RULE)
        print(f"{kind} prompt ({args.frames} frames @ {args.fps} fps)")
        print(RULE)
        print(
            render_prompt(
                kind,
                args.frames,
                args.fps,
                header=header if kind == "injected" else None,
            )
        )

    print(RULE)
    print("judge prompt")
    print(RULE)
    description = (
        "The shot opens on a hillside, pans left while tilting up to the "
        "ridge, holds briefly, then trucks right and pushes in on the cabin."
    )
    print(render_judge_prompt(PER_SECOND, description))

    print(RULE)
    scores = {"ca": 4, "tc": 4, "rd": 3, "nm": 4, "lq": 5}
    print(f"example scores {scores} -> final {judge_final(**scores)}")


if __name__ == "__main__":
    main()
