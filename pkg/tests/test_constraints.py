import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camkit.constraints import (
    bce_grad,
    bce_loss,
    cardinality_grad,
    cardinality_penalty,
    incompatibility_grad,
    incompatibility_penalty,
    project,
    total_loss,
)
from camkit.taxonomy import (
    BASE_NAMES,
    IncompatibilityMatrix,
    LabelSet,
    Rejected,
    build_matrix,
)

prob_vectors = st.lists(st.floats(0.05, 0.95), min_size=15, max_size=15)


def one_hot(*names):
    p = np.zeros(len(BASE_NAMES))
    for n in names:
        p[BASE_NAMES.index(n)] = 1.0
    return p


def central_diff(f, p, k, h=1e-6):
    up, down = p.copy(), p.copy()
    up[k] += h
    down[k] -= h
    return (f(up) - f(down)) / (2 * h)


class TestBce:
    def test_perfect_prediction_is_tiny(self):
        y = one_hot("pan-left")
        p = np.clip(y, 1e-9, 1 - 1e-9)
        assert bce_loss(p, y) < 1e-6

    def test_hard_zero_and_one_stay_finite(self):
        y = one_hot("pan-left")
        p = 1.0 - y  # maximally wrong, exactly at the clamp
        loss = bce_loss(p, y)
        assert math.isfinite(loss)
        # clamp at 1e-12: each of the 15 terms contributes -log(1e-12)
        assert loss == pytest.approx(15 * -math.log(1e-12))

    def test_grad_closed_form(self):
        p = np.full(15, 0.3)
        y = one_hot("tilt-up")
        g = bce_grad(p, y)
        expected = (p - y) / (p * (1 - p))
        assert np.allclose(g, expected, atol=1e-12)

    @given(prob_vectors, st.integers(0, 14))
    @settings(max_examples=60, deadline=None)
    def test_grad_matches_central_difference(self, probs, k):
        p = np.asarray(probs)
        y = one_hot("dolly-in", "tilt-up")
        num = central_diff(lambda q: bce_loss(q, y), p, k)
        ana = bce_grad(p, y)[k]
        assert abs(num - ana) <= 1e-6 * max(1.0, abs(ana))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            bce_loss([1.5] + [0.5] * 14, one_hot("static"))


class TestIncompatibility:
    def test_uniform_half_closed_form(self, base_matrix):
        # brute-force count of exclusive unordered pairs, then p^2 each
        pairs = sum(
            1
            for a, b in itertools.combinations(BASE_NAMES, 2)
            if base_matrix.excludes(a, b)
        )
        assert pairs == 21
        p = np.full(15, 0.5)
        assert incompatibility_penalty(p, base_matrix) == pytest.approx(21 * 0.25)

    def test_zero_for_valid_set(self, base_matrix):
        assert incompatibility_penalty(one_hot("pan-left", "tilt-up"), base_matrix) == 0.0

    def test_positive_for_violating_pair(self, base_matrix):
        p = one_hot("pan-left", "pan-right")
        assert incompatibility_penalty(p, base_matrix) == pytest.approx(1.0)

    def test_grad_is_matrix_vector_product(self, base_matrix):
        p = np.linspace(0.1, 0.9, 15)
        g = incompatibility_grad(p, base_matrix)
        assert np.allclose(g, base_matrix.entries @ p, atol=1e-12)

    @given(prob_vectors, st.integers(0, 14))
    @settings(max_examples=60, deadline=None)
    def test_grad_matches_central_difference(self, probs, k):
        matrix = build_matrix("base")
        p = np.asarray(probs)
        num = central_diff(lambda q: incompatibility_penalty(q, matrix), p, k)
        ana = incompatibility_grad(p, matrix)[k]
        assert abs(num - ana) <= 1e-6 * max(1.0, abs(ana))

    @given(prob_vectors)
    @settings(max_examples=60, deadline=None)
    def test_zero_iff_no_live_violating_pair(self, probs):
        matrix = build_matrix("base")
        p = np.asarray(probs)
        # silence every exclusive pair by zeroing the second member
        for i, j in itertools.combinations(range(15), 2):
            if matrix.entries[i, j]:
                p[j] = 0.0
        assert incompatibility_penalty(p, matrix) == 0.0


class TestCardinality:
    def test_inside_band_is_free(self):
        assert cardinality_penalty(one_hot("pan-left")) == 0.0
        assert cardinality_penalty(one_hot("pan-left", "tilt-up", "dolly-in")) == 0.0

    def test_uniform_half_closed_form(self):
        # sum is 7.5: excess over 3 is 4.5, squared 20.25
        assert cardinality_penalty(np.full(15, 0.5)) == pytest.approx(20.25)

    def test_undershoot(self):
        p = np.zeros(15)
        p[0] = 0.5
        assert cardinality_penalty(p) == pytest.approx(0.25)

    @given(prob_vectors, st.integers(0, 14))
    @settings(max_examples=60, deadline=None)
    def test_grad_matches_central_difference(self, probs, k):
        p = np.asarray(probs)
        total = float(p.sum())
        # keep away from the hinge corners where the derivative jumps
        if abs(total - 1.0) < 1e-3 or abs(total - 3.0) < 1e-3:
            return
        num = central_diff(lambda q: cardinality_penalty(q), p, k)
        ana = cardinality_grad(p)[k]
        assert abs(num - ana) <= 1e-6 * max(1.0, abs(ana))


class TestTotalLoss:
    def test_is_weighted_sum(self, base_matrix):
        p = np.linspace(0.1, 0.9, 15)
        y = one_hot("dolly-in")
        lhs = total_loss(p, y, base_matrix, lambda_inc=2.0, lambda_card=3.0)
        rhs = (
            bce_loss(p, y)
            + 2.0 * incompatibility_penalty(p, base_matrix)
            + 3.0 * cardinality_penalty(p)
        )
        assert lhs == pytest.approx(rhs)

    def test_permutation_equivariance(self, base_matrix):
        rng = np.random.default_rng(0)
        p = rng.uniform(0.05, 0.95, size=15)
        y = one_hot("pan-left", "dolly-in")
        perm = rng.permutation(15)
        names_p = tuple(BASE_NAMES[i] for i in perm)
        entries_p = base_matrix.entries[np.ix_(perm, perm)]
        matrix_p = IncompatibilityMatrix(
            mode="base", names=names_p, entries=entries_p
        )
        assert total_loss(p, y, base_matrix) == pytest.approx(
            total_loss(p[perm], y[perm], matrix_p)
        )


class TestProject:
    def test_hard_encoding_passes_through(self, base_matrix):
        got = project(one_hot("dolly-in"), base_matrix)
        assert got.primitives == ("dolly-in",)

    def test_exclusive_pair_keeps_max(self, base_matrix):
        p = np.zeros(15)
        p[BASE_NAMES.index("pan-left")] = 0.9
        p[BASE_NAMES.index("pan-right")] = 0.7
        assert project(p, base_matrix).primitives == ("pan-left",)

    def test_tie_keeps_lower_index(self, base_matrix):
        p = np.zeros(15)
        p[BASE_NAMES.index("pan-left")] = 0.8
        p[BASE_NAMES.index("pan-right")] = 0.8
        assert project(p, base_matrix).primitives == ("pan-left",)

    def test_nothing_above_threshold(self, base_matrix):
        got = project(np.full(15, 0.4), base_matrix)
        assert isinstance(got, Rejected) and got.reason == "empty"

    def test_static_needs_strict_majority(self, base_matrix):
        p = np.zeros(15)
        p[BASE_NAMES.index("static")] = 0.9
        p[BASE_NAMES.index("dolly-in")] = 0.6
        assert project(p, base_matrix).primitives == ("static",)
        p[BASE_NAMES.index("static")] = 0.6
        assert project(p, base_matrix).primitives == ("dolly-in",)

    def test_four_survivors_overflow(self, base_matrix):
        p = one_hot("pan-left", "tilt-up", "dolly-in", "truck-left")
        got = project(p, base_matrix)
        assert isinstance(got, Rejected) and got.reason == "over_cardinality"

    def test_length_mismatch(self, base_matrix):
        with pytest.raises(ValueError):
            project(np.full(14, 0.6), base_matrix)

    @given(st.lists(st.floats(0.0, 1.0), min_size=15, max_size=15))
    @settings(max_examples=300, deadline=None)
    def test_accepted_output_is_always_consistent(self, probs):
        matrix = build_matrix("base")
        got = project(np.asarray(probs), matrix)
        if isinstance(got, Rejected):
            return
        assert 1 <= len(got) <= 3
        for a, b in itertools.combinations(got, 2):
            assert not matrix.excludes(a, b)

    def test_zoom_matrix_supported(self, zoom_matrix):
        p = np.zeros(17)
        p[zoom_matrix.index("zoom-in")] = 0.9
        p[zoom_matrix.index("dolly-in")] = 0.8
        got = project(p, zoom_matrix)
        assert got.primitives == ("zoom-in",)
