"""Camera-motion primitive taxonomy, incompatibility constraints, label sets.

The 15 base primitives live in a fixed canonical order; an optional extended
mode appends zoom-in/zoom-out. A symmetric boolean matrix marks primitive
pairs that cannot co-occur within one segment, and every label set that
leaves this module is deduped, constraint-checked, sorted by canonical
index, and holds 1 to 3 primitives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

# Canonical index order. Base taxonomy is indices 0..14; the extended
# taxonomy appends the two zoom primitives so base indices stay stable.
BASE_NAMES: tuple[str, ...] = (
    "pan-left",
    "pan-right",
    "tilt-up",
    "tilt-down",
    "roll-cw",
    "roll-ccw",
    "truck-left",
    "truck-right",
    "crane-up",
    "crane-down",
    "dolly-in",
    "dolly-out",
    "arc-cw",
    "arc-ccw",
    "static",
)
ZOOM_NAMES: tuple[str, ...] = BASE_NAMES + ("zoom-in", "zoom-out")

STATIC = "static"

# Same-axis opposites. static has none.
_OPPOSITE: dict[str, str] = {}
for _a, _b in (
    ("pan-left", "pan-right"),
    ("tilt-up", "tilt-down"),
    ("roll-cw", "roll-ccw"),
    ("truck-left", "truck-right"),
    ("crane-up", "crane-down"),
    ("dolly-in", "dolly-out"),
    ("arc-cw", "arc-ccw"),
    ("zoom-in", "zoom-out"),
):
    _OPPOSITE[_a] = _b
    _OPPOSITE[_b] = _a

MAX_CARDINALITY = 3


def opposite_of(name: str) -> str | None:
    """Same-axis opposite primitive; None for static."""
    if name == STATIC:
        return None
    if name not in _OPPOSITE:
        raise KeyError(f"unknown primitive: {name!r}")
    return _OPPOSITE[name]


@dataclass(frozen=True)
class Rejected:
    """A label list that failed canonicalization, with the failure reason."""

    reason: str  # one of: conflict, empty, over_cardinality

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class LabelSet:
    """Duplicate-free primitives in canonical index order, cardinality 1..3."""

    primitives: tuple[str, ...]

    def __iter__(self) -> Iterator[str]:
        return iter(self.primitives)

    def __len__(self) -> int:
        return len(self.primitives)

    def __contains__(self, name: str) -> bool:
        return name in self.primitives

    def as_list(self) -> list[str]:
        return list(self.primitives)


@dataclass(frozen=True, eq=False)
class IncompatibilityMatrix:
    """Symmetric K x K exclusivity structure over the active taxonomy."""

    mode: str  # "base" or "zoom"
    names: tuple[str, ...]
    entries: np.ndarray = field(repr=False)  # bool, K x K

    def __post_init__(self) -> None:
        k = len(self.names)
        if self.entries.shape != (k, k):
            raise ValueError("matrix shape does not match name count")
        if not np.array_equal(self.entries, self.entries.T):
            raise ValueError("matrix must be symmetric")
        if self.entries.diagonal().any():
            raise ValueError("matrix diagonal must be zero")
        self.entries.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown primitive: {name!r}") from None

    def excludes(self, a: str, b: str) -> bool:
        return bool(self.entries[self.index(a), self.index(b)])

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "names": list(self.names),
            "matrix": self.entries.astype(int).tolist(),
        }


def build_matrix(mode: str = "base") -> IncompatibilityMatrix:
    """Exclusivity matrix: zero diagonal, static vs everything, opposites.

    Extended mode additionally forbids zoom-in with dolly-in and zoom-out
    with dolly-out (a simulated zoom must not masquerade as the matching
    physical dolly).
    """
    if mode not in ("base", "zoom"):
        raise ValueError(f"unknown taxonomy mode: {mode!r}")
    names = BASE_NAMES if mode == "base" else ZOOM_NAMES
    k = len(names)
    m = np.zeros((k, k), dtype=bool)
    static_i = names.index(STATIC)
    for i, name in enumerate(names):
        if name == STATIC:
            continue
        m[static_i, i] = m[i, static_i] = True
        opp = _OPPOSITE[name]
        if opp in names:
            j = names.index(opp)
            m[i, j] = m[j, i] = True
    if mode == "zoom":
        for a, b in (("zoom-in", "dolly-in"), ("zoom-out", "dolly-out")):
            i, j = names.index(a), names.index(b)
            m[i, j] = m[j, i] = True
    return IncompatibilityMatrix(mode=mode, names=names, entries=m)


def canonicalize(
    raw: Iterable[str], matrix: IncompatibilityMatrix
) -> LabelSet | Rejected:
    """Dedupe, constraint-check, sort by canonical index, enforce 1..3.

    Unknown primitive names raise (caller bug); constraint failures return
    Rejected so pipelines can count them.
    """
    indices = sorted({matrix.index(name) for name in raw})
    if not indices:
        return Rejected("empty")
    for i, j in itertools.combinations(indices, 2):
        if matrix.entries[i, j]:
            return Rejected("conflict")
    if len(indices) > MAX_CARDINALITY:
        return Rejected("over_cardinality")
    return LabelSet(tuple(matrix.names[i] for i in indices))


def enumerate_valid_sets(
    matrix: IncompatibilityMatrix, max_card: int = MAX_CARDINALITY
) -> list[LabelSet]:
    """All constraint-valid sets of cardinality 1..max_card, brute force.

    Deterministic lexicographic order by index tuple.
    """
    combos: list[tuple[int, ...]] = []
    for card in range(1, max_card + 1):
        for combo in itertools.combinations(range(matrix.size), card):
            if any(matrix.entries[i, j] for i, j in itertools.combinations(combo, 2)):
                continue
            combos.append(combo)
    combos.sort()
    return [LabelSet(tuple(matrix.names[i] for i in c)) for c in combos]


def pools_by_cardinality(sets: Iterable[LabelSet]) -> dict[int, list[LabelSet]]:
    """Partition valid sets into pools keyed by cardinality."""
    pools: dict[int, list[LabelSet]] = {}
    for s in sets:
        pools.setdefault(len(s), []).append(s)
    return pools
