"""Pure states of C(S^1, M_n), horizontal lifts and torus coordinates.

A pure state is a base point x in [0, 2pi) together with a unit ray V in C^n.
States over a common base ray V decompose into tori indexed by the moduli
|V_j|; the fibre coordinates are the winding count k, the base offset tau0
and the relative phases phi_j against the horizontal lift.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .connection import TWO_PI, ConnectionSpec, theta_integral

# components below this modulus carry no phase information
_ZERO_MODULUS = 1e-14


def _wrap_angle(x: float) -> float:
    """Reduce an angle to [0, 2pi)."""
    y = math.fmod(float(x), TWO_PI)
    if y < 0.0:
        y += TWO_PI
    if y >= TWO_PI:
        y = 0.0
    return y


def circular_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    d = abs(_wrap_angle(a) - _wrap_angle(b))
    return min(d, TWO_PI - d)


@dataclass(frozen=True, eq=False)
class PureState:
    """Base point in [0, 2pi) plus a unit ray in canonical gauge.

    The constructor normalises the ray and rotates the global phase so the
    first component with nonzero modulus is real and positive.
    """

    base: float
    ray: np.ndarray

    def __post_init__(self):
        ray = np.asarray(self.ray, dtype=complex).copy()
        if ray.ndim != 1 or ray.size < 1:
            raise ValueError("ray must be a one-dimensional complex vector")
        nrm = float(np.linalg.norm(ray))
        if nrm < _ZERO_MODULUS:
            raise ValueError("ray must be nonzero")
        ray /= nrm
        lead = int(np.flatnonzero(np.abs(ray) > _ZERO_MODULUS)[0])
        phase = ray[lead] / abs(ray[lead])
        ray *= phase.conjugate()
        ray[lead] = abs(ray[lead])
        ray.setflags(write=False)
        object.__setattr__(self, "ray", ray)
        object.__setattr__(self, "base", _wrap_angle(self.base))

    @property
    def n(self) -> int:
        return int(self.ray.size)

    def moduli(self) -> np.ndarray:
        return np.abs(self.ray)


@dataclass(frozen=True)
class TorusCoords:
    """Fibre coordinates (k, tau0, phi_2..phi_n) of a state on the torus of xi.

    k is the unreduced winding count, tau0 in [0, 2pi) the base offset, and
    phi the relative phases for directions 2..n (phi_1 = 0 by gauge).
    """

    k: int
    tau0: float
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "tau0", _wrap_angle(self.tau0))
        object.__setattr__(self, "phi", tuple(_wrap_angle(p) for p in self.phi))

    @property
    def n(self) -> int:
        return len(self.phi) + 1

    @property
    def phi_full(self) -> tuple:
        """Phases for all directions 1..n with the gauge entry prepended."""
        return (0.0,) + self.phi

    @property
    def tau(self) -> float:
        """Total lift parameter 2*k*pi + tau0."""
        return TWO_PI * self.k + self.tau0


@dataclass(frozen=True)
class BlochPoint:
    """Bloch sphere coordinates of an n = 2 ray; R is the equatorial radius."""

    x: float
    y: float
    z: float
    R: float

    @property
    def theta0(self) -> float:
        """Azimuth of 2 V_1 conj(V_2) = R exp(i theta0)."""
        return math.atan2(self.y, self.x)


def to_bloch(state: PureState) -> BlochPoint:
    """Bloch coordinates of a two-component state."""
    if state.n != 2:
        raise ValueError(f"Bloch coordinates need n = 2, got n = {state.n}")
    v1, v2 = state.ray
    w = 2.0 * v1 * v2.conjugate()
    x, y = float(w.real), float(w.imag)
    z = float(abs(v1) ** 2 - abs(v2) ** 2)
    return BlochPoint(x=x, y=y, z=z, R=math.hypot(x, y))


def horizontal_lift(spec: ConnectionSpec, xi: PureState, tau: float) -> PureState:
    """Parallel transport of xi along the base circle by tau.

    Component j picks up exp(-i (Theta_j(b + tau) - Theta_j(b))) where b is
    the base of xi; the result lives at (b + tau) mod 2pi.  Lifting by a and
    then by b equals lifting by a + b.
    """
    if spec.n != xi.n:
        raise ValueError("state dimension does not match connection")
    b = xi.base
    phases = np.array(
        [
            cmath.exp(-1j * (theta_integral(spec, j, b + tau) - theta_integral(spec, j, b)))
            for j in range(1, spec.n + 1)
        ]
    )
    return PureState(base=b + tau, ray=xi.ray * phases)


def torus_coords(
    spec: ConnectionSpec,
    xi: PureState,
    zeta: PureState,
    k: int = 0,
    tol: float = 1e-9,
) -> Optional[TorusCoords]:
    """Coordinates of zeta on the torus of xi at winding k, or None.

    Requires xi.base = 0.  Returns None when the moduli of zeta do not match
    those of xi within tol (zeta lies on a different torus).  Phases are read
    against the horizontal lift of xi by tau = 2*k*pi + zeta.base and gauged
    so the first direction with nonzero modulus has phase zero.
    """
    if spec.n != xi.n or spec.n != zeta.n:
        raise ValueError("state dimensions do not match connection")
    if xi.base != 0.0:
        raise ValueError("torus coordinates are defined against xi at base 0")
    if tol <= 0:
        raise ValueError("tol must be positive")

    mod_xi = xi.moduli()
    mod_zeta = zeta.moduli()
    if float(np.max(np.abs(mod_xi - mod_zeta))) >= tol:
        return None

    tau0 = zeta.base
    tau = TWO_PI * int(k) + tau0
    lifted = horizontal_lift(spec, xi, tau)

    carriers = np.flatnonzero(mod_xi > tol)
    if carriers.size == 0:
        return None
    raw = np.zeros(spec.n)
    for j in carriers:
        raw[j] = cmath.phase(zeta.ray[j] / lifted.ray[j])
    ref = raw[carriers[0]]
    phi = [_wrap_angle(raw[j] - ref) if mod_xi[j] > tol else 0.0 for j in range(spec.n)]
    # re-anchor the gauge entry at exactly zero
    phi[carriers[0]] = 0.0
    return TorusCoords(k=int(k), tau0=tau0, phi=tuple(phi[1:]))


def state_from_torus(spec: ConnectionSpec, xi: PureState, coords: TorusCoords) -> PureState:
    """State with the given torus coordinates relative to xi (xi at base 0)."""
    if xi.base != 0.0:
        raise ValueError("torus coordinates are defined against xi at base 0")
    if coords.n != xi.n:
        raise ValueError("coordinate dimension does not match the state")
    lifted = horizontal_lift(spec, xi, coords.tau)
    phases = np.exp(1j * np.asarray(coords.phi_full))
    return PureState(base=coords.tau0, ray=lifted.ray * phases)
