from skylink.geometry.geodesics import GeodesicPath, geodesic_fan, geodesic_flow
from skylink.geometry.metrics import (
    CausalClass,
    Causality,
    ConformalFactor,
    Event,
    MetricKind,
    SpacetimeMetric,
    Tangent,
    christoffel,
    classify_vector,
    metric_eval,
    null_future_direction,
)

__all__ = [
    "CausalClass",
    "Causality",
    "ConformalFactor",
    "Event",
    "GeodesicPath",
    "MetricKind",
    "SpacetimeMetric",
    "Tangent",
    "christoffel",
    "classify_vector",
    "geodesic_fan",
    "geodesic_flow",
    "metric_eval",
    "null_future_direction",
]
