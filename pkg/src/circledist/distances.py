"""Closed-form distances on the bundle of pure states.

Spectral distance d(xi, zeta) = sup { zeta(a) - xi(a) : ||[D, a]|| <= 1 } and
the horizontal (shortest-lift) distance, for the circle algebra twisted by a
diagonal connection.  All finite values are certified by explicit witnesses
in the witness module and cross-checked by the ascent oracle.

Branches:
  * integer holonomy: d = min(tau0, 2pi - tau0) when all phases vanish,
    +infinity otherwise;
  * n = 2, non-integer holonomy: d = max of H over the feasible triangle,
    reduced to the border by the optimizer module;
  * on-fiber (tau0 = 0), any n: d = pi * max tr(S_k G) over symmetric G with
    ||G|| <= 1 and zero diagonal / far entries.  For n = 2 this equals
    pi tr|S_k| = 2 pi R W_k; for n >= 3 the zero-diagonal closure constraint
    is generically active and the value sits strictly below pi tr|S_k|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .connection import TWO_PI, ConnectionSpec, holonomy_summary
from .matfun import trace_abs
from .optimizer import TrianglePoint, maximize_triangle
from .oracle import sup_comm_norm
from .states import PureState, TorusCoords, circular_distance, to_bloch, torus_coords
from .witness import (
    W,
    far_mask,
    fiber_gain,
    fiber_witness,
    make_H,
    n2_witness,
    sk_matrix,
    trivial_witness,
)

__all__ = [
    "Branch",
    "DistanceResult",
    "W",
    "H_xi",
    "horizontal_distance",
    "spectral_distance_n2",
    "build_Sk",
    "spectral_distance_fiber",
    "build_witness",
]

_DEGENERATE_SIN = 1e-9


class Branch(str, Enum):
    TrivialHolonomy = "TrivialHolonomy"
    TriangleMax = "TriangleMax"
    Equatorial = "Equatorial"
    Fiber2 = "Fiber2"
    FiberN = "FiberN"
    Horizontal = "Horizontal"
    Disconnected = "Disconnected"


@dataclass(frozen=True)
class DistanceResult:
    value: float
    branch: Branch
    argmax: Optional[TrianglePoint] = None
    warning: Optional[str] = None

    def __post_init__(self):
        if not (self.value >= 0.0 or math.isinf(self.value)):
            raise ValueError("distance must be nonnegative")


def H_xi(p: TrianglePoint, z: float, R: float, tau0: float, k: int, omega: float, phi: float) -> float:
    """Triangle objective T + z*Delta + R W_{k+1} sqrt(..) + R W_k sqrt(..)."""
    return float(make_H(z, R, tau0, k, omega, phi)(p.T, p.Delta))


def _carrier_indices(xi: PureState, tol: float):
    return [j for j in range(xi.n) if abs(xi.ray[j]) > tol]


def _phases_vanish(coords: TorusCoords, carriers, tol: float) -> bool:
    phi = coords.phi_full
    return all(circular_distance(phi[j], 0.0) <= tol for j in carriers)


def horizontal_distance(
    spec: ConnectionSpec,
    xi: PureState,
    zeta: PureState,
    k_max: int = 64,
    tol: float = 1e-9,
) -> DistanceResult:
    """Length of the shortest horizontal lift of the base circle joining the states.

    Scans windings |k| <= k_max in both directions; the candidate reaching
    zeta at parameter tau = 2 pi k + tau0 with all carrier phases matching
    contributes |tau|.  Infinite when no winding matches (not accessible).
    """
    if xi.base != 0.0:
        raise ValueError("xi must sit at base point 0")
    coords0 = torus_coords(spec, xi, zeta, 0, tol)
    if coords0 is None:
        return DistanceResult(math.inf, Branch.Disconnected)
    carriers = _carrier_indices(xi, tol)
    best = math.inf
    for k in range(-k_max, k_max + 1):
        coords = torus_coords(spec, xi, zeta, k, tol)
        if coords is not None and _phases_vanish(coords, carriers, tol):
            best = min(best, abs(TWO_PI * k + coords0.tau0))
    if math.isinf(best):
        return DistanceResult(math.inf, Branch.Disconnected)
    return DistanceResult(best, Branch.Horizontal)


def _trivial_result(coords: TorusCoords, carriers, tol: float) -> DistanceResult:
    if not _phases_vanish(coords, carriers, tol):
        return DistanceResult(math.inf, Branch.Disconnected)
    tau0 = coords.tau0
    return DistanceResult(min(tau0, TWO_PI - tau0), Branch.TrivialHolonomy)


def spectral_distance_n2(
    spec: ConnectionSpec,
    xi: PureState,
    zeta: Optional[PureState] = None,
    coords: Optional[TorusCoords] = None,
    *,
    grid_n: int = 512,
    grid2d_n: int = 0,
    refine_tol: float = 1e-10,
    tol: float = 1e-9,
) -> DistanceResult:
    """Full n = 2 spectral distance.

    Either zeta or precomputed torus coordinates must be given.  grid2d_n = 0
    skips the dense interior cross-check inside the optimizer (the border
    reduction is exact); pass a positive grid to re-verify per call.
    """
    if spec.n != 2:
        raise ValueError("spectral_distance_n2 needs a two-component connection")
    if coords is None:
        if zeta is None:
            raise ValueError("need zeta or coords")
        coords = torus_coords(spec, xi, zeta, 0, tol)
        if coords is None:
            return DistanceResult(math.inf, Branch.Disconnected)
    summary = holonomy_summary(spec, tol)
    carriers = _carrier_indices(xi, tol)
    if summary.is_trivial:
        return _trivial_result(coords, carriers, tol)

    omega = summary.omega[1]
    phi = coords.phi_full[1]
    k = coords.k
    tau0 = coords.tau0
    warning = None
    if abs(math.sin(math.pi * omega)) < _DEGENERATE_SIN:
        warning = "holonomy within 1e-9 of an integer: W_k ill-conditioned"

    if tau0 == 0.0:
        S = sk_matrix(spec, xi, coords, tol)
        return DistanceResult(math.pi * trace_abs(S), Branch.Fiber2, warning=warning)

    bloch = to_bloch(xi)
    H = make_H(bloch.z, bloch.R, tau0, k, omega, phi)
    z_sign = 0 if abs(bloch.z) <= 1e-12 else (1 if bloch.z > 0 else -1)
    point, value = maximize_triangle(
        H, z_sign, tau0, grid2d_n=grid2d_n, grid_n=grid_n, refine_tol=refine_tol
    )
    branch = Branch.Equatorial if z_sign == 0 else Branch.TriangleMax
    return DistanceResult(value, branch, argmax=point, warning=warning)


def build_Sk(spec: ConnectionSpec, xi: PureState, coords: TorusCoords, tol: float = 1e-9) -> np.ndarray:
    """Fiber matrix S_k; raises when the target lies outside the accessible torus.

    Entries sqrt(R_i R_j) sin(k pi w_ij + (phi_j - phi_i)/2) / sin(pi w_ij)
    for close pairs, zero on the diagonal and far pairs.  Far carrier pairs
    with differing phases admit a zero-commutator unbounded witness, so the
    distance is infinite and no finite S_k applies.
    """
    summary = holonomy_summary(spec, tol)
    carriers = _carrier_indices(xi, tol)
    phi = coords.phi_full
    for a in range(len(carriers)):
        for b in range(a + 1, len(carriers)):
            i, j = carriers[a], carriers[b]
            if summary.same_class(i + 1, j + 1) and circular_distance(phi[i], phi[j]) > tol:
                raise ValueError("far-pair phases differ: target outside the accessible torus")
    return sk_matrix(spec, xi, coords, tol)


def spectral_distance_fiber(
    spec: ConnectionSpec, xi: PureState, coords: TorusCoords, tol: float = 1e-9
) -> DistanceResult:
    """On-fiber spectral distance for any n.

    Value pi * max tr(S_k G) over symmetric G with ||G|| <= 1, zero diagonal
    and zero far pairs; the eigensolver route pi tr|S_k| certifies the n = 2
    case exactly and bounds n >= 3 from above.
    """
    if coords.tau0 != 0.0:
        raise ValueError("coords must lie on the fiber (tau0 = 0)")
    try:
        S = build_Sk(spec, xi, coords, tol)
    except ValueError:
        return DistanceResult(math.inf, Branch.Disconnected)
    summary = holonomy_summary(spec, tol)
    return _fiber_value(spec, S, summary, tol)


def _fiber_value(spec, S, summary, tol):
    n = spec.n
    upper = math.pi * trace_abs(S)
    warning = None
    for j in range(1, n):
        w = summary.omega[j] - summary.omega[0]
        if not summary.same_class(1, j + 1) and abs(math.sin(math.pi * w)) < _DEGENERATE_SIN:
            warning = "holonomy within 1e-9 of an integer: W_k ill-conditioned"
    if n == 2:
        return DistanceResult(upper, Branch.Fiber2, warning=warning)
    gain = fiber_gain(S, far_mask(spec, tol))
    value = math.pi * gain.value
    cert = math.pi * gain.cert
    if abs(cert - value) > 1e-5 * (1.0 + abs(value)):
        raise RuntimeError(
            f"fiber gain certificate mismatch: value {value!r}, certificate {cert!r}"
        )
    if upper - value > 1e-8 * (1.0 + upper):
        note = (
            "zero-diagonal closure constraint active: "
            f"unconstrained bound pi tr|S_k| = {upper:.12g} is not attainable"
        )
        warning = note if warning is None else warning + "; " + note
    return DistanceResult(value, Branch.FiberN, warning=warning)


def build_witness(
    spec: ConnectionSpec,
    xi: PureState,
    coords: TorusCoords,
    argmax: Optional[TrianglePoint] = None,
    epsilon: float = 1e-3,
    *,
    n_grid: int = 1 << 23,
    chunk: int = 1 << 19,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Build the near-optimal witness and report (delta_value, comm_norm).

    delta_value is the exact state difference of the mollified element;
    comm_norm is the sup commutator norm measured on n_grid points by the
    oracle's central-difference rule.  comm_norm <= 1 + O(eps) and
    delta_value approaches the closed form as eps -> 0.
    """
    summary = holonomy_summary(spec, tol)
    if summary.is_trivial:
        sampler, delta = trivial_witness(spec, xi, coords, epsilon)
    elif coords.tau0 == 0.0:
        sampler, delta = fiber_witness(spec, xi, coords, epsilon)
    else:
        if spec.n != 2:
            raise ValueError("off-fiber witnesses are only constructed for n = 2")
        if argmax is None:
            res = spectral_distance_n2(spec, xi, coords=coords, tol=tol)
            if res.argmax is None:
                raise ValueError("no triangle argmax available for this pair")
            argmax = res.argmax
        sampler, delta = n2_witness(spec, xi, coords, argmax.T, argmax.Delta, epsilon)
    comm = sup_comm_norm(spec, sampler, n_grid, chunk)
    return float(delta), float(comm)
