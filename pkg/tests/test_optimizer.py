from __future__ import annotations

import math

import numpy as np
import pytest

from circledist import TWO_PI, maximize_triangle
from circledist.optimizer import BorderSegment, SegmentKind, maximize_on_segment


def test_linear_objective_maxes_at_hypotenuse_corner():
    tau0 = 2.0
    m = min(tau0, TWO_PI - tau0)
    H = lambda T, D: np.asarray(T) + 0.5 * np.asarray(D)
    point, value = maximize_triangle(H, 1.0, tau0, grid2d_n=0)
    assert value == pytest.approx(m, abs=1e-9)
    assert point.T == pytest.approx(m, abs=1e-7)
    assert point.Delta == pytest.approx(0.0, abs=1e-7)


def test_concave_ridge_found_on_t_zero_segment():
    tau0 = 2.4
    m = min(tau0, TWO_PI - tau0)
    c = 0.37 * m
    H = lambda T, D: 1.0 - (np.asarray(D) - c) ** 2 - 0.0 * np.asarray(T)
    point, value = maximize_triangle(H, 1.0, tau0, grid2d_n=0)
    assert value == pytest.approx(1.0, abs=1e-12)
    # tie band prefers the smallest T representative
    assert point.T == pytest.approx(0.0, abs=1e-7)
    assert point.Delta == pytest.approx(c, abs=1e-7)


def test_zero_z_scans_both_delta_signs():
    tau0 = 1.5
    m = min(tau0, TWO_PI - tau0)
    H = lambda T, D: np.abs(np.asarray(D))
    point, value = maximize_triangle(H, 0.0, tau0, grid2d_n=0)
    assert value == pytest.approx(m, abs=1e-9)
    assert abs(point.Delta) == pytest.approx(m, abs=1e-7)
    assert point.T == pytest.approx(0.0, abs=1e-7)


def test_negative_z_restricts_to_negative_delta():
    tau0 = 2.0
    m = min(tau0, TWO_PI - tau0)
    H = lambda T, D: np.asarray(D)
    point, value = maximize_triangle(H, -1.0, tau0, grid2d_n=0)
    # Delta <= 0 everywhere, so the best the objective can do is 0
    assert value == pytest.approx(0.0, abs=1e-9)


def test_degenerate_fiber_triangle():
    H = lambda T, D: np.asarray(T) * 0.0 + 5.0
    point, value = maximize_triangle(H, 1.0, 0.0, grid2d_n=0)
    assert (point.T, point.Delta) == (0.0, 0.0)
    assert value == 5.0


def test_interior_guard_raises_when_assumption_broken():
    tau0 = 2.0
    m = min(tau0, TWO_PI - tau0)

    def H(T, D):
        T = np.asarray(T, dtype=float)
        D = np.asarray(D, dtype=float)
        return -((T - m / 3.0) ** 2) - (D - m / 3.0) ** 2

    with pytest.raises(RuntimeError, match="interior"):
        maximize_triangle(H, 1.0, tau0, grid2d_n=128)


def test_segment_refinement_beats_grid():
    seg = BorderSegment(SegmentKind.TZeroSegment, 1.0, 1)
    c = 0.123456789
    H = lambda T, D: -((np.asarray(D) - c) ** 2)
    point, value = maximize_on_segment(H, seg, grid_n=64, refine_tol=1e-12)
    assert point.Delta == pytest.approx(c, abs=1e-8)
    assert value == pytest.approx(0.0, abs=1e-15)


def test_multimodal_segment_finds_global():
    seg = BorderSegment(SegmentKind.TZeroSegment, 1.0, 1)

    def H(T, D):
        D = np.asarray(D)
        return np.sin(14.0 * D) + 0.4 * D  # several local maxima, best near D = 1

    point, value = maximize_on_segment(H, seg, grid_n=256, refine_tol=1e-12)
    grid = np.linspace(0.0, 1.0, 200001)
    assert value >= np.max(np.sin(14.0 * grid) + 0.4 * grid) - 1e-9


def test_tau0_validation():
    H = lambda T, D: np.asarray(T)
    with pytest.raises(ValueError):
        maximize_triangle(H, 1.0, -0.1)
    with pytest.raises(ValueError):
        maximize_triangle(H, 1.0, TWO_PI)
