from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import optimize

from circledist import PureState, TorusCoords, W, fiber_gain, sk_matrix, trace_abs
from circledist.witness import far_mask
from helpers import spec_with_omega, uniform_state


def test_w_frozen():
    assert W(1, 1.0 / 3.0, math.pi) == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-14)


def test_w_phase_period():
    assert W(2, 0.31, 1.1) == pytest.approx(W(2, 0.31, 1.1 + 4.0 * math.pi), abs=1e-12)


def test_w_rejects_integer_omega():
    with pytest.raises(ValueError):
        W(1, 2.0, 0.5)


def test_sk_matrix_frozen_n3():
    spec = spec_with_omega(0.27, 0.61)
    xi = PureState(0.0, np.array([0.6, 0.64, 0.48]))
    S = sk_matrix(spec, xi, TorusCoords(1, 0.0, (0.8, 2.0)))
    want = np.array(
        [
            [0.0, 0.97104341, 0.13671597],
            [0.97104341, 0.0, 0.69780507],
            [0.13671597, 0.69780507, 0.0],
        ]
    )
    np.testing.assert_allclose(S, want, atol=1e-8)


def test_far_mask_n4():
    spec = spec_with_omega(0.31, 0.77, -0.23)
    mask = far_mask(spec)
    want = np.zeros((4, 4), dtype=bool)
    want[2, 3] = want[3, 2] = True
    np.testing.assert_array_equal(mask, want)


def test_fiber_gain_n2_matches_trace():
    S = np.array([[0.0, 0.7], [0.7, 0.0]])
    g = fiber_gain(S, np.zeros((2, 2), dtype=bool))
    assert g.value == pytest.approx(trace_abs(S), abs=1e-9)


def test_fiber_gain_frozen_n3():
    spec = spec_with_omega(0.27, 0.61)
    xi = PureState(0.0, np.array([0.6, 0.64, 0.48]))
    S = sk_matrix(spec, xi, TorusCoords(1, 0.0, (0.8, 2.0)))
    g = fiber_gain(S, far_mask(spec))
    assert g.value == pytest.approx(2.391532754156, abs=1e-6)
    # strictly below the unconstrained trace bound
    assert g.value < trace_abs(S) - 0.1


def test_fiber_gain_frozen_n4_far_pair():
    # search-based cross-check at N=256 reaches 0.992 * pi * this value
    spec = spec_with_omega(0.31, 0.77, -0.23)
    xi = uniform_state(4)
    S = sk_matrix(spec, xi, TorusCoords(0, 0.0, (1.1, 0.4, 0.4)))
    g = fiber_gain(S, far_mask(spec))
    assert g.value == pytest.approx(0.802484050, abs=1e-6)
    assert g.value <= trace_abs(S) + 1e-9
    assert abs(g.cert - g.value) <= 1e-5


def test_fiber_gain_gamma_is_feasible():
    spec = spec_with_omega(0.27, 0.61)
    xi = PureState(0.0, np.array([0.6, 0.64, 0.48]))
    S = sk_matrix(spec, xi, TorusCoords(1, 0.0, (0.8, 2.0)))
    mask = far_mask(spec)
    g = fiber_gain(S, mask)
    G = g.gamma
    np.testing.assert_allclose(G, G.T, atol=1e-12)
    np.testing.assert_allclose(np.diag(G), 0.0, atol=1e-12)
    assert np.all(np.abs(G[mask]) < 1e-12)
    assert np.abs(np.linalg.eigvalsh(G)).max() <= 1.0 + 1e-9
    # the reported value is attained by gamma
    assert np.sum(S * G) == pytest.approx(g.value, rel=1e-6)


def test_fiber_gain_certificate_sandwich():
    rng = np.random.default_rng(5)
    for n in (3, 4, 5):
        A = rng.standard_normal((n, n))
        S = 0.5 * (A + A.T)
        np.fill_diagonal(S, 0.0)
        g = fiber_gain(S, np.zeros((n, n), dtype=bool))
        assert g.value <= g.cert + 1e-9
        assert g.cert - g.value <= 1e-5 * (1.0 + abs(g.value))


def test_fiber_gain_random_bounds():
    """Sandwich the barrier value between random feasible and dual points."""
    rng = np.random.default_rng(17)
    n = 4
    A = rng.standard_normal((n, n))
    S = 0.5 * (A + A.T)
    np.fill_diagonal(S, 0.0)
    mask = np.zeros((n, n), dtype=bool)
    mask[0, 1] = mask[1, 0] = True
    g = fiber_gain(S, mask)
    for _ in range(20):
        # feasible candidates never beat the maximum
        B = rng.standard_normal((n, n))
        G = 0.5 * (B + B.T)
        np.fill_diagonal(G, 0.0)
        G[mask] = 0.0
        G /= max(1.0, np.abs(np.linalg.eigvalsh(G)).max())
        assert np.sum(S * G) <= g.value + 1e-9
        # any diagonal + far shift upper-bounds via the nuclear norm
        Y = S - np.diag(rng.standard_normal(n))
        F = np.zeros((n, n))
        F[0, 1] = F[1, 0] = rng.standard_normal()
        assert trace_abs(Y - F) >= g.value - 1e-9


def test_fiber_gain_against_scipy_dual():
    """scipy minimization of the dual can only stall above the true minimum."""
    spec = spec_with_omega(0.27, 0.61)
    xi = PureState(0.0, np.array([0.6, 0.64, 0.48]))
    S = sk_matrix(spec, xi, TorusCoords(1, 0.0, (0.8, 2.0)))

    def dual(d):
        return np.abs(np.linalg.eigvalsh(S - np.diag(d))).sum()

    best = min(
        optimize.minimize(dual, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000}).fun
        for x0 in (np.zeros(3), np.array([0.1, -0.1, 0.05]))
    )
    g = fiber_gain(S, far_mask(spec))
    assert g.value <= best + 1e-7
    # and the two routes agree here (dual is smooth enough at this optimum)
    assert g.value == pytest.approx(best, abs=1e-5)


def test_fiber_gain_zero_matrix():
    S = np.zeros((3, 3))
    g = fiber_gain(S, np.zeros((3, 3), dtype=bool))
    assert g.value == pytest.approx(0.0, abs=1e-12)
