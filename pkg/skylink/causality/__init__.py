from skylink.causality.distance import (
    DistanceReport,
    distance_report,
    grid_graph_distance,
    riemannian_distance,
    shooting_distance,
)
from skylink.causality.oracle import (
    CausalVerdict,
    Relation,
    causal_oracle,
    same_null_geodesic,
    verdict_from_distance,
)

__all__ = [
    "CausalVerdict",
    "DistanceReport",
    "Relation",
    "causal_oracle",
    "distance_report",
    "grid_graph_distance",
    "riemannian_distance",
    "same_null_geodesic",
    "shooting_distance",
    "verdict_from_distance",
]
