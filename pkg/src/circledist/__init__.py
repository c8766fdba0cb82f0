"""Spectral and horizontal distances on circle bundles of pure states.

The configuration is a diagonal connection on the trivial M_n bundle over the
circle, given by n real periodic coefficient functions.  Pure states of the
algebra of smooth matrix loops sit in a bundle over the circle; the package
computes the Connes spectral distance between them in closed form where one
exists, the Carnot-Caratheodory distance of horizontal lifts, the topology of
the accessibility relation, near-optimal witness elements certifying the
closed forms from below, and an independent gradient-ascent oracle with a
certified feasibility slack.
"""

from .connection import (
    TWO_PI,
    ConnectionSpec,
    HolonomySummary,
    PeriodicFunction,
    holonomy_summary,
    theta_integral,
)
from .distances import (
    Branch,
    DistanceResult,
    H_xi,
    build_Sk,
    build_witness,
    horizontal_distance,
    spectral_distance_fiber,
    spectral_distance_n2,
)
from .matfun import spectral_norm, sym_eigenvalues, trace_abs
from .optimizer import BorderSegment, SegmentKind, TrianglePoint, maximize_triangle
from .oracle import (
    DiscretizedElement,
    OracleReport,
    commutator_field,
    divergence_check,
    evaluate_pair,
    oracle_distance,
    sup_comm_norm,
)
from .states import (
    BlochPoint,
    PureState,
    TorusCoords,
    circular_distance,
    horizontal_lift,
    state_from_torus,
    to_bloch,
    torus_coords,
)
from .topology import Relation, RelationTag, classify
from .witness import FiberGain, fiber_gain, fiber_witness, n2_witness, sk_matrix, W

__version__ = "0.1.0"

__all__ = [
    "TWO_PI",
    "ConnectionSpec",
    "HolonomySummary",
    "PeriodicFunction",
    "holonomy_summary",
    "theta_integral",
    "Branch",
    "DistanceResult",
    "H_xi",
    "build_Sk",
    "build_witness",
    "horizontal_distance",
    "spectral_distance_fiber",
    "spectral_distance_n2",
    "spectral_norm",
    "sym_eigenvalues",
    "trace_abs",
    "BorderSegment",
    "SegmentKind",
    "TrianglePoint",
    "maximize_triangle",
    "DiscretizedElement",
    "OracleReport",
    "commutator_field",
    "divergence_check",
    "evaluate_pair",
    "oracle_distance",
    "sup_comm_norm",
    "BlochPoint",
    "PureState",
    "TorusCoords",
    "circular_distance",
    "horizontal_lift",
    "state_from_torus",
    "to_bloch",
    "torus_coords",
    "Relation",
    "RelationTag",
    "classify",
    "FiberGain",
    "fiber_gain",
    "fiber_witness",
    "n2_witness",
    "sk_matrix",
    "W",
    "__version__",
]
