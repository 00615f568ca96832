"""Deterministic seed derivation for named random streams.

Every stage that draws randomness derives its own 64-bit seed from the run
seed plus a purpose tag (and usually a record id), so changing how many
draws one stage makes can never perturb another stage's stream.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEP = b"\x1f"


def derive_seed(base: int, *parts: str | int) -> int:
    """Mix a base seed and any number of string/int parts into a 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(base)).encode("utf-8"))
    for part in parts:
        h.update(_SEP)
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest(), "big")


def stream(base: int, *parts: str | int) -> np.random.Generator:
    """A PCG64 generator seeded by derive_seed(base, *parts)."""
    return np.random.default_rng(derive_seed(base, *parts))
