"""Constrained multi-label inference math: losses and the tau projection.

Pure reference functions over per-class probability vectors. No training
loop lives here; gradients are closed forms for checking, not autodiff.
"""

from __future__ import annotations

import itertools

import numpy as np
from numpy.typing import NDArray

from camkit.taxonomy import (
    STATIC,
    IncompatibilityMatrix,
    LabelSet,
    Rejected,
    canonicalize,
)

PROB_CLAMP = 1e-12
DEFAULT_TAU = 0.5
DEFAULT_LAMBDA_INC = 1.0
DEFAULT_LAMBDA_CARD = 1.0

CARD_LOW = 1.0
CARD_HIGH = 3.0


def _as_probs(p: NDArray | list[float]) -> NDArray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValueError("probability vector must be 1-D")
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise ValueError("probabilities must be finite and within [0, 1]")
    return arr


def bce_loss(p: NDArray | list[float], y: NDArray | list[float]) -> float:
    """Summed binary cross entropy with probabilities clamped away from 0/1."""
    p_arr = _as_probs(p)
    y_arr = np.asarray(y, dtype=float)
    if y_arr.shape != p_arr.shape:
        raise ValueError("probability and target lengths differ")
    q = np.clip(p_arr, PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(-np.sum(y_arr * np.log(q) + (1.0 - y_arr) * np.log(1.0 - q)))


def bce_grad(p: NDArray | list[float], y: NDArray | list[float]) -> NDArray:
    p_arr = np.clip(_as_probs(p), PROB_CLAMP, 1.0 - PROB_CLAMP)
    y_arr = np.asarray(y, dtype=float)
    return (p_arr - y_arr) / (p_arr * (1.0 - p_arr))


def incompatibility_penalty(
    p: NDArray | list[float], matrix: IncompatibilityMatrix
) -> float:
    """Sum of p_i * p_j over exclusive pairs i < j."""
    p_arr = _as_probs(p)
    if len(p_arr) != matrix.size:
        raise ValueError("probability length does not match matrix size")
    upper = np.triu(matrix.entries, k=1)
    return float(p_arr @ upper.astype(float) @ p_arr)


def incompatibility_grad(
    p: NDArray | list[float], matrix: IncompatibilityMatrix
) -> NDArray:
    p_arr = _as_probs(p)
    return matrix.entries.astype(float) @ p_arr


def cardinality_penalty(p: NDArray | list[float]) -> float:
    """Quadratic hinge outside the [1, 3] expected-cardinality band."""
    total = float(np.sum(_as_probs(p)))
    low = max(0.0, CARD_LOW - total)
    high = max(0.0, total - CARD_HIGH)
    return low * low + high * high


def cardinality_grad(p: NDArray | list[float]) -> NDArray:
    total = float(np.sum(_as_probs(p)))
    g = -2.0 * max(0.0, CARD_LOW - total) + 2.0 * max(0.0, total - CARD_HIGH)
    return np.full(len(np.asarray(p)), g)


def total_loss(
    p: NDArray | list[float],
    y: NDArray | list[float],
    matrix: IncompatibilityMatrix,
    lambda_inc: float = DEFAULT_LAMBDA_INC,
    lambda_card: float = DEFAULT_LAMBDA_CARD,
) -> float:
    return (
        bce_loss(p, y)
        + lambda_inc * incompatibility_penalty(p, matrix)
        + lambda_card * cardinality_penalty(p)
    )


def project(
    p: NDArray | list[float],
    matrix: IncompatibilityMatrix,
    tau: float = DEFAULT_TAU,
) -> LabelSet | Rejected:
    """Threshold at tau, resolve exclusive pairs, canonicalize.

    Within each exclusive pair of active non-static labels only the
    higher-probability member survives (ties keep the lower canonical
    index). If static and non-static labels both survive, static wins only
    when it is strictly more probable than every non-static survivor.
    """
    p_arr = _as_probs(p)
    if len(p_arr) != matrix.size:
        raise ValueError("probability length does not match matrix size")
    names = matrix.names
    static_i = names.index(STATIC)

    active = {i for i in range(matrix.size) if p_arr[i] > tau}
    non_static = sorted(i for i in active if i != static_i)
    for i, j in itertools.combinations(non_static, 2):
        if not matrix.entries[i, j]:
            continue
        if i not in active or j not in active:
            continue
        # keep-max; on a tie the lower canonical index survives
        active.discard(j if p_arr[i] >= p_arr[j] else i)

    survivors = sorted(i for i in active if i != static_i)
    if static_i in active and survivors:
        if p_arr[static_i] > max(p_arr[i] for i in survivors):
            active = {static_i}
        else:
            active.discard(static_i)

    return canonicalize([names[i] for i in sorted(active)], matrix)
