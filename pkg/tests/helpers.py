"""Shared construction helpers for the test suite."""

from __future__ import annotations

import math

import numpy as np

from circledist import ConnectionSpec, PeriodicFunction, PureState


def constant_spec(*means: float) -> ConnectionSpec:
    return ConnectionSpec(tuple(PeriodicFunction(m) for m in means))


def spec_with_omega(*omega: float) -> ConnectionSpec:
    """Connection whose winding densities (relative to direction 1) are omega."""
    return constant_spec(0.0, *(-w for w in omega))


def random_state(rng: np.random.Generator, n: int, base: float = 0.0) -> PureState:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    while np.linalg.norm(v) < 1e-6:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(base, v)


def uniform_state(n: int) -> PureState:
    return PureState(0.0, np.full(n, 1.0 / math.sqrt(n)))
