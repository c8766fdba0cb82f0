"""Diagonal connection on the trivial M_n bundle over the circle.

The connection one-form is i*diag(theta_1, ..., theta_n) with every theta_j
a real 2pi-periodic function.  Each theta_j is stored as a finite Fourier
series, so the running integrals Theta_j and the holonomy phases Theta_j(2pi)
come out in closed form instead of through quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PeriodicFunction:
    """Real 2pi-periodic function mean + sum_m (c_m cos(mt) + s_m sin(mt)).

    harmonics is a sequence of (m, cos_coeff, sin_coeff) with integer m >= 1.
    """

    mean: float = 0.0
    harmonics: tuple = ()

    def __post_init__(self):
        clean = []
        for triple in self.harmonics:
            if len(triple) != 3:
                raise ValueError(f"harmonic must be (m, cos, sin), got {triple!r}")
            m, c, s = triple
            if int(m) != m or int(m) < 1:
                raise ValueError(f"harmonic order must be a positive integer, got {m!r}")
            c, s = float(c), float(s)
            if not (math.isfinite(c) and math.isfinite(s)):
                raise ValueError("harmonic coefficients must be finite")
            clean.append((int(m), c, s))
        if not math.isfinite(float(self.mean)):
            raise ValueError("mean must be finite")
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "harmonics", tuple(clean))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        val = np.full(t.shape, self.mean)
        for m, c, s in self.harmonics:
            val += c * np.cos(m * t) + s * np.sin(m * t)
        return val if val.shape else float(val)

    def integral(self, tau):
        """Antiderivative from 0 to tau, exact in the Fourier coefficients."""
        tau = np.asarray(tau, dtype=float)
        val = self.mean * tau
        for m, c, s in self.harmonics:
            val = val + c * np.sin(m * tau) / m - s * (np.cos(m * tau) - 1.0) / m
        return val if val.shape else float(val)


@dataclass(frozen=True)
class ConnectionSpec:
    """n-tuple of periodic functions theta_j defining the diagonal connection."""

    theta: tuple

    def __post_init__(self):
        theta = tuple(self.theta)
        if len(theta) < 1:
            raise ValueError("connection needs at least one direction")
        for f in theta:
            if not isinstance(f, PeriodicFunction):
                raise TypeError("theta entries must be PeriodicFunction")
        object.__setattr__(self, "theta", theta)

    @property
    def n(self) -> int:
        return len(self.theta)


@dataclass(frozen=True)
class HolonomySummary:
    """Holonomy phases Theta_j(2pi), winding densities omega_j, Far partition."""

    theta_2pi: tuple
    omega: tuple
    far_classes: tuple
    n_c: int

    def class_of(self, j: int) -> int:
        """Index (0-based) of the Far class containing direction j (1-based)."""
        for idx, cls in enumerate(self.far_classes):
            if j in cls:
                return idx
        raise IndexError(f"direction {j} not in any class")

    def same_class(self, i: int, j: int) -> bool:
        return self.class_of(i) == self.class_of(j)

    @property
    def is_trivial(self) -> bool:
        """All relative holonomies integral, i.e. a single Far class."""
        return self.n_c == 1


def theta_integral(spec: ConnectionSpec, j: int, tau) -> float:
    """Theta_j(tau) = integral of theta_j over [0, tau]; j is 1-based.

    Satisfies Theta_j(tau + 2k*pi) = Theta_j(tau) + k*Theta_j(2pi) exactly,
    because the harmonic parts are 2pi-periodic with zero mean.
    """
    if not 1 <= j <= spec.n:
        raise IndexError(f"direction index {j} out of range 1..{spec.n}")
    return spec.theta[j - 1].integral(tau)


def holonomy_summary(spec: ConnectionSpec, tol: float = 1e-9) -> HolonomySummary:
    """Compute Theta_j(2pi), omega_j and the Far partition of directions.

    Directions i, j land in one class when omega_j - omega_i is within tol
    of an integer.  The tolerated relation need not be transitive, so the
    partition is its union-find closure; class labels follow the smallest
    member, classes are ordered by that label.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = spec.n
    theta_2pi = tuple(theta_integral(spec, j, TWO_PI) for j in range(1, n + 1))
    omega = tuple((theta_2pi[0] - t) / TWO_PI for t in theta_2pi)

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            d = omega[j] - omega[i]
            if abs(d - round(d)) < tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    classes: dict = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i + 1)
    far_classes = tuple(tuple(classes[r]) for r in sorted(classes))
    return HolonomySummary(
        theta_2pi=theta_2pi, omega=omega, far_classes=far_classes, n_c=len(far_classes)
    )
