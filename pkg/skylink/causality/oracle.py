"""Ground-truth causal relations in product spacetimes (ḡ ⊕ −dt²).

y ∈ J⁺(x) exactly when t_y − t_x ≥ d_ḡ(x̄, ȳ), so every verdict reduces to the
margin |Δt| − d_ḡ.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from skylink.causality.distance import riemannian_distance
from skylink.config import settings
from skylink.errors import ArgumentError, CapabilityError
from skylink.geometry.geodesics import geodesic_fan
from skylink.geometry.metrics import Event, MetricKind, SpacetimeMetric, fan_directions

ON_GEODESIC = 1e-6


class Relation(str, Enum):
    CHRONOLOGICAL = "chronological"
    NULL = "null"
    UNRELATED = "unrelated"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class CausalVerdict:
    relation: Relation
    margin: float
    # +1: y in the causal future of x, -1: x in the causal future of y
    order: Optional[int] = None

    @property
    def causal(self) -> bool:
        return self.relation in (Relation.CHRONOLOGICAL, Relation.NULL)

    @property
    def excluded(self) -> bool:
        return self.relation in (Relation.NULL, Relation.MARGINAL)


def causal_oracle(
    metric: SpacetimeMetric,
    x: Event,
    y: Event,
    band: Optional[float] = None,
    marginal_band: Optional[float] = None,
) -> CausalVerdict:
    if metric.kind not in (MetricKind.MINKOWSKI, MetricKind.PRODUCT_RIEMANNIAN, MetricKind.ROUND_SPHERE_PRODUCT):
        raise CapabilityError(f"no causality criterion for metric kind {metric.kind!r}")
    band = settings.null_band if band is None else band
    marginal_band = settings.marginal_band if marginal_band is None else marginal_band
    metric.check_domain(x.coords)
    metric.check_domain(y.coords)

    distance = riemannian_distance(metric, x.spatial, y.spatial)
    return verdict_from_distance(y.t - x.t, distance, band, marginal_band)


def verdict_from_distance(dt: float, distance: float, band: float, marginal_band: float) -> CausalVerdict:
    margin = abs(dt) - distance
    order = int(np.sign(dt)) or None
    if abs(margin) <= band:
        return CausalVerdict(Relation.NULL, margin, order)
    if abs(margin) <= marginal_band:
        return CausalVerdict(Relation.MARGINAL, margin)
    if margin > 0:
        return CausalVerdict(Relation.CHRONOLOGICAL, margin, order)
    return CausalVerdict(Relation.UNRELATED, margin)


def same_null_geodesic(metric: SpacetimeMetric, x: Event, y: Event, n: Optional[int] = None) -> bool:
    """True iff a null geodesic from the earlier event passes within 1e-6 of the later one."""
    metric.check_domain(x.coords)
    metric.check_domain(y.coords)
    if np.allclose(x.coords, y.coords, rtol=0.0, atol=1e-14):
        raise ArgumentError("same_null_geodesic needs two distinct events")
    if x.t == y.t:
        return False
    early, late = (x, y) if x.t < y.t else (y, x)
    n = settings.fan if n is None else n
    elapsed = late.t - early.t

    def gap_for(angles: np.ndarray) -> np.ndarray:
        dirs = fan_directions(metric, early, angles)
        v = np.hstack([dirs, np.ones((angles.size, 1))])
        path = geodesic_fan(metric, early, v, elapsed)
        return np.linalg.norm(path.positions[-1, :, :-1] - late.spatial, axis=1)

    angles = 2.0 * np.pi * np.arange(n) / n
    gaps = gap_for(angles)
    k = int(np.argmin(gaps))
    if gaps[k] <= ON_GEODESIC:
        return True
    step = 2.0 * np.pi / n
    res = minimize_scalar(
        lambda a: float(gap_for(np.array([a]))[0]),
        bounds=(angles[k] - step, angles[k] + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return bool(min(res.fun, gaps[k]) <= ON_GEODESIC)
