from __future__ import annotations

import math

import numpy as np
import pytest

from circledist import (
    TWO_PI,
    ConnectionSpec,
    DiscretizedElement,
    PeriodicFunction,
    PureState,
    TorusCoords,
    commutator_field,
    divergence_check,
    evaluate_pair,
    oracle_distance,
    spectral_distance_fiber,
    state_from_torus,
    sup_comm_norm,
)
from helpers import constant_spec, spec_with_omega, uniform_state

FIBER_CLOSED = 7.64329424816337  # 2*pi*R*W_1 at omega=0.3, phi=0.9, uniform state


def fiber_pair():
    spec = spec_with_omega(0.3)
    xi = uniform_state(2)
    zeta = state_from_torus(spec, xi, TorusCoords(1, 0.0, (0.9,)))
    return spec, xi, zeta


def test_trivial_holonomy_example():
    # integer holonomy, pure base displacement: d = min(tau0, 2pi - tau0)
    spec = ConnectionSpec((PeriodicFunction(0.0), PeriodicFunction(1.0)))
    xi = uniform_state(2)
    zeta = state_from_torus(spec, xi, TorusCoords(0, 2.0, (0.0,)))
    rep = oracle_distance(spec, xi, zeta, N=256, restarts=1, iters=100, seed=0)
    assert abs(rep.best_value - 2.0) <= 0.04
    assert rep.best_value <= 2.0 + rep.slack


def test_fiber_example_certified():
    spec, xi, zeta = fiber_pair()
    rep = oracle_distance(spec, xi, zeta, N=256, restarts=2, iters=300, seed=0)
    assert rep.best_value >= 0.98 * FIBER_CLOSED
    assert rep.best_value <= FIBER_CLOSED + rep.slack
    assert rep.slack <= 5e-2
    assert rep.n_grid == 256


def test_seed_never_beats_report():
    spec, xi, zeta = fiber_pair()
    rep = oracle_distance(spec, xi, zeta, N=128, restarts=1, iters=80, seed=3)
    assert rep.best_value >= rep.seed_value > 0.0


def test_self_pair_is_zero():
    spec, xi, _ = fiber_pair()
    rep = oracle_distance(spec, xi, xi, N=128, restarts=2, iters=60, seed=0)
    assert rep.best_value == 0.0


def test_deterministic_given_seed():
    spec, xi, zeta = fiber_pair()
    a = oracle_distance(spec, xi, zeta, N=128, restarts=2, iters=60, seed=7)
    b = oracle_distance(spec, xi, zeta, N=128, restarts=2, iters=60, seed=7)
    assert a.best_value == b.best_value
    assert a.slack == b.slack


def test_grid_too_small():
    spec, xi, zeta = fiber_pair()
    with pytest.raises(ValueError, match="grid"):
        oracle_distance(spec, xi, zeta, N=32)


def test_commutator_field_constant_element():
    # constant a: central difference drops out, K = i(Lambda a - a Lambda)
    spec = constant_spec(0.0, -0.3)
    N = 64
    vals = np.tile(np.array([[0.2, 0.5 - 0.1j], [0.5 + 0.1j, -0.4]]), (N, 1, 1))
    K = commutator_field(spec, DiscretizedElement(N, vals))
    # theta_1 - theta_2 = 0.3 at every t, so K_01 = 0.3i * a_01
    expect01 = 0.3j * vals[:, 0, 1]
    assert np.allclose(K[:, 0, 0], 0.0, atol=1e-12)
    assert np.allclose(K[:, 0, 1], expect01, atol=1e-12)


def test_commutator_field_flat_section():
    # rank-one projector onto a parallel section: continuum commutator is 0,
    # the residue is the central-difference truncation error O(h^2)
    spec = ConnectionSpec((PeriodicFunction(0.0), PeriodicFunction(1.0)))

    def section(t):
        p = np.stack([np.ones_like(t), np.exp(-1j * t)], axis=1) / math.sqrt(2)
        return p[:, :, None] * np.conj(p[:, None, :])

    norm = sup_comm_norm(spec, section, n_grid=1 << 12, chunk=1 << 12)
    assert norm <= 1e-4


def test_evaluate_pair_reads_snapped_nodes():
    spec = constant_spec(0.0, -0.3)
    xi = PureState(0.0, np.array([1.0, 0.0]))
    zeta = PureState(math.pi, np.array([0.0, 1.0]))
    N = 64
    vals = np.zeros((N, 2, 2), dtype=complex)
    vals[0] = np.diag([0.25, 0.0])
    vals[N // 2] = np.diag([0.0, 1.5])
    assert evaluate_pair(xi, zeta, DiscretizedElement(N, vals)) == pytest.approx(1.25)


def test_divergence_moduli_mismatch():
    spec = spec_with_omega(0.3)
    xi = PureState(0.0, np.array([math.sqrt(0.8), math.sqrt(0.2)]))
    zeta = uniform_state(2)
    assert divergence_check(spec, xi, zeta)
    with pytest.raises(ValueError):
        oracle_distance(spec, xi, zeta, N=128)


def test_divergence_far_phase_mismatch():
    # integer omega: the pair (1,2) is far, so any phase offset disconnects
    spec = ConnectionSpec((PeriodicFunction(0.0), PeriodicFunction(1.0)))
    xi = uniform_state(2)
    zeta = PureState(0.0, np.array([1.0, np.exp(1.3j)]) / math.sqrt(2))
    assert divergence_check(spec, xi, zeta)
    with pytest.raises(ValueError):
        oracle_distance(spec, xi, zeta, N=128)


def test_connected_pair_not_divergent():
    spec, xi, zeta = fiber_pair()
    assert not divergence_check(spec, xi, zeta)
