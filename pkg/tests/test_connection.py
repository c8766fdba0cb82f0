from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circledist import (
    TWO_PI,
    ConnectionSpec,
    PeriodicFunction,
    holonomy_summary,
    theta_integral,
)
from helpers import constant_spec, spec_with_omega


def test_periodic_function_call_matches_series():
    f = PeriodicFunction(0.3, ((2, 1.0, 0.0),))
    t = np.linspace(0.0, TWO_PI, 7)
    np.testing.assert_allclose(f(t), 0.3 + np.cos(2 * t), atol=1e-14)


def test_integral_frozen_value():
    # antiderivative of 0.3 + cos(2t) at tau = 1.7: 0.51 + sin(3.4)/2
    f = PeriodicFunction(0.3, ((2, 1.0, 0.0),))
    assert f.integral(1.7) == pytest.approx(0.3822294489865844, abs=1e-15)


def test_integral_of_constant_is_linear():
    f = PeriodicFunction(-0.31)
    assert f.integral(TWO_PI) == pytest.approx(-0.31 * TWO_PI, abs=1e-14)
    assert f.integral(0.0) == 0.0


@settings(max_examples=50, deadline=None)
@given(
    tau=st.floats(-10.0, 10.0),
    k=st.integers(-5, 5),
    mean=st.floats(-2.0, 2.0),
    c=st.floats(-1.5, 1.5),
    s=st.floats(-1.5, 1.5),
)
def test_integral_quasi_periodicity(tau, k, mean, c, s):
    # Theta(tau + 2 pi k) = Theta(tau) + k Theta(2 pi) since harmonics have zero mean
    f = PeriodicFunction(mean, ((3, c, s),))
    lhs = f.integral(tau + TWO_PI * k)
    rhs = f.integral(tau) + k * f.integral(TWO_PI)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_theta_integral_indexing():
    spec = constant_spec(0.1, 0.2)
    assert theta_integral(spec, 1, 2.0) == pytest.approx(0.2)
    assert theta_integral(spec, 2, 2.0) == pytest.approx(0.4)
    with pytest.raises(IndexError):
        theta_integral(spec, 0, 1.0)
    with pytest.raises(IndexError):
        theta_integral(spec, 3, 1.0)


def test_connection_spec_requires_two_directions():
    with pytest.raises(ValueError):
        ConnectionSpec((PeriodicFunction(0.0),))


def test_holonomy_summary_omega_sign_convention():
    spec = constant_spec(0.0, -0.31)
    s = holonomy_summary(spec)
    assert s.omega[0] == pytest.approx(0.0, abs=1e-15)
    assert s.omega[1] == pytest.approx(0.31, abs=1e-12)


def test_holonomy_trivial_for_integer_offsets():
    s = holonomy_summary(constant_spec(0.0, 2.0, -3.0))
    assert s.is_trivial
    assert s.n_c == 1
    assert s.far_classes == ((1, 2, 3),)


def test_far_partition_n4_scenario():
    # omega = (0, 0.31, 0.77, -0.23): relative windings of 3 and 4 differ by 1
    s = holonomy_summary(spec_with_omega(0.31, 0.77, -0.23))
    assert s.far_classes == ((1,), (2,), (3, 4))
    assert s.n_c == 3
    assert s.same_class(3, 4)
    assert not s.same_class(1, 2)
    assert s.class_of(4) == 2


def test_far_partition_integer_gap():
    s = holonomy_summary(spec_with_omega(1.0), tol=1e-9)
    assert s.far_classes == ((1, 2),)
    assert s.is_trivial


def test_harmonics_do_not_change_holonomy():
    plain = spec_with_omega(0.31)
    wavy = ConnectionSpec(
        (PeriodicFunction(0.0, ((1, 0.4, 0.0),)), PeriodicFunction(-0.31, ((2, 0.0, 0.7),)))
    )
    a, b = holonomy_summary(plain), holonomy_summary(wavy)
    assert a.omega == pytest.approx(b.omega, abs=1e-12)
    assert a.far_classes == b.far_classes
