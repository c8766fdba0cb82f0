"""Connectivity classification of pure-state pairs.

A target state relates to a reference in one of four ways: accessible by a
horizontal path, connected at finite spectral distance without being
accessible, on the same torus of moduli but disconnected, or on a different
torus altogether.  The decision reduces to phase equalities within the Far
classes of the holonomy.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .connection import TWO_PI, ConnectionSpec, holonomy_summary
from .states import PureState, circular_distance, torus_coords


class RelationTag(str, Enum):
    Accessible = "Accessible"
    ConnectedNotAccessible = "ConnectedNotAccessible"
    SameTorusDisconnected = "SameTorusDisconnected"
    DifferentTorus = "DifferentTorus"


@dataclass(frozen=True)
class Relation:
    """Classification tag plus the winding that realizes accessibility."""

    tag: RelationTag
    witness_k: Optional[int] = None


def _winding_order(k_max: int):
    """Deterministic search order 0, 1, -1, 2, -2, ..."""
    yield 0
    for m in range(1, k_max + 1):
        yield m
        yield -m


def classify(
    spec: ConnectionSpec,
    xi: PureState,
    zeta: PureState,
    k_max: int = 64,
    tol: float = 1e-9,
) -> Relation:
    """Relation of zeta to xi (xi at base 0).

    Moduli mismatch means a different torus.  On the torus, zeta is connected
    to xi exactly when carriers in a common Far class share one phase; it is
    accessible when some winding |k| <= k_max cancels every carrier phase.
    A k_max too small can only demote Accessible to ConnectedNotAccessible.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    coords = torus_coords(spec, xi, zeta, k=0, tol=tol)
    if coords is None:
        return Relation(RelationTag.DifferentTorus)

    summary = holonomy_summary(spec)
    moduli = xi.moduli()
    carriers = [j for j in range(1, spec.n + 1) if moduli[j - 1] > tol]
    phi_full = coords.phi_full

    for cls in summary.far_classes:
        members = [j for j in cls if j in carriers]
        for b in members[1:]:
            if circular_distance(phi_full[members[0] - 1], phi_full[b - 1]) >= tol:
                return Relation(RelationTag.SameTorusDisconnected)

    # winding k shifts the phase of direction j by -2*k*pi*(omega_j - omega_ref)
    ref = carriers[0]
    omega = summary.omega
    for k in _winding_order(k_max):
        if all(
            circular_distance(
                phi_full[j - 1] - TWO_PI * k * (omega[j - 1] - omega[ref - 1]), 0.0
            )
            < tol
            for j in carriers
        ):
            return Relation(RelationTag.Accessible, witness_k=k)
    return Relation(RelationTag.ConnectedNotAccessible)
