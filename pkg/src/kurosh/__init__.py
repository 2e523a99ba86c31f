"""Exact Kurosh ranks, intersections, and Dicks-tree bridge analysis for
finitely generated subgroups of free products of abelian groups."""

from .factors import (
    DimensionMismatch,
    Lattice,
    coset_reduce,
    factor_compare,
    lattice_crt,
    lattice_intersect,
    lattice_join,
)
from .words import (
    Presentation,
    PresentationMismatch,
    Word,
    random_word,
)
from .magnus import (
    EQUAL,
    GREATER,
    LESS,
    EdgeName,
    UnsupportedOrder,
    edge_compare,
    expand,
    magnus_compare,
)
from .graph import Edge, FoldBuilder, KuroshGraph, build_folded
from .oracle import (
    OracleBudgetExceeded,
    ball_size,
    closure_graph,
    enumerate_ball,
    intersection_oracle,
    subgroup_ball,
)
from .pullback import (
    PullbackComponent,
    TheoremAReport,
    pullback_components,
    theorem_a_report,
)
from .dicks import (
    BridgeCertificate,
    Exhaustion,
    OrderConfig,
    TheoremMainReport,
    bridge_verdict,
    is_bridge,
    lift_core_edge,
    side_infinite,
    theorem_main_report,
)

__all__ = [
    "DimensionMismatch",
    "Lattice",
    "coset_reduce",
    "factor_compare",
    "lattice_crt",
    "lattice_intersect",
    "lattice_join",
    "Presentation",
    "PresentationMismatch",
    "Word",
    "random_word",
    "EQUAL",
    "GREATER",
    "LESS",
    "EdgeName",
    "UnsupportedOrder",
    "edge_compare",
    "expand",
    "magnus_compare",
    "Edge",
    "FoldBuilder",
    "KuroshGraph",
    "build_folded",
    "OracleBudgetExceeded",
    "ball_size",
    "closure_graph",
    "enumerate_ball",
    "intersection_oracle",
    "subgroup_ball",
    "PullbackComponent",
    "TheoremAReport",
    "pullback_components",
    "theorem_a_report",
    "BridgeCertificate",
    "Exhaustion",
    "OrderConfig",
    "TheoremMainReport",
    "bridge_verdict",
    "is_bridge",
    "lift_core_edge",
    "side_infinite",
    "theorem_main_report",
]

__version__ = "0.1.0"
