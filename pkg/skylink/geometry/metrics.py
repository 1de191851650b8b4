"""Lorentz metrics on coordinate charts and causal classification of vectors.

Chart coordinates put time last: an event of a spacetime with m space
dimensions is ``(x_1, ..., x_m, t)`` and the metric signature is
``(+, ..., +, -)``. The round-sphere product uses the unit-embedding chart of
S^m in R^{m+1}, so its events carry ``m + 2`` coordinates ``(p, t)`` with
``|p| = 1``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from skylink.errors import ArgumentError, ChartDomainError

SPHERE_NORM_TOL = 1e-9
NULL_BAND = 1e-10
ZERO_VECTOR = 1e-14


class MetricKind(str, Enum):
    MINKOWSKI = "minkowski"
    PRODUCT_RIEMANNIAN = "conformal"
    ROUND_SPHERE_PRODUCT = "round_sphere"


@dataclass(frozen=True)
class ConformalFactor:
    """λ(x̄) = amplitude · exp(−|x̄|² / width²); the base metric is e^{2λ}·δ."""

    amplitude: float = 0.2
    width: float = 1.0

    def value(self, xbar: np.ndarray) -> np.ndarray:
        xbar = np.asarray(xbar, dtype=float)
        return self.amplitude * np.exp(-np.sum(xbar * xbar, axis=-1) / self.width ** 2)

    def gradient(self, xbar: np.ndarray) -> np.ndarray:
        xbar = np.asarray(xbar, dtype=float)
        lam = self.value(xbar)
        return (-2.0 / self.width ** 2) * lam[..., None] * xbar


@dataclass(frozen=True)
class SpacetimeMetric:
    kind: MetricKind
    dim_space: int = 2
    conformal: Optional[ConformalFactor] = None

    def __post_init__(self) -> None:
        if self.dim_space < 2:
            raise ArgumentError(f"dim_space must be >= 2, got {self.dim_space}")
        if self.kind == MetricKind.PRODUCT_RIEMANNIAN and self.conformal is None:
            raise ArgumentError("a product metric needs its conformal factor")

    @classmethod
    def minkowski(cls, m: int = 2) -> "SpacetimeMetric":
        return cls(MetricKind.MINKOWSKI, m)

    @classmethod
    def conformal_product(cls, m: int = 2, amplitude: float = 0.2, width: float = 1.0) -> "SpacetimeMetric":
        return cls(MetricKind.PRODUCT_RIEMANNIAN, m, ConformalFactor(amplitude, width))

    @classmethod
    def round_sphere(cls, m: int = 2) -> "SpacetimeMetric":
        return cls(MetricKind.ROUND_SPHERE_PRODUCT, m)

    @property
    def is_sphere(self) -> bool:
        return self.kind == MetricKind.ROUND_SPHERE_PRODUCT

    @property
    def spatial_dim(self) -> int:
        """Number of spatial chart coordinates (m, or m + 1 in the embedding chart)."""
        return self.dim_space + 1 if self.is_sphere else self.dim_space

    @property
    def chart_dim(self) -> int:
        return self.spatial_dim + 1

    @property
    def time_index(self) -> int:
        return self.chart_dim - 1

    def check_domain(self, coords: np.ndarray) -> None:
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-1] != self.chart_dim:
            raise ChartDomainError(
                f"{self.kind.value} chart expects {self.chart_dim} coordinates, got {coords.shape[-1]}"
            )
        if not np.all(np.isfinite(coords)):
            raise ChartDomainError("chart point has non-finite coordinates")
        if self.is_sphere:
            norms = np.linalg.norm(coords[..., :-1], axis=-1)
            if np.any(np.abs(norms - 1.0) > SPHERE_NORM_TOL):
                raise ChartDomainError(f"sphere point off the unit sphere (|p| = {np.max(norms)!r})")

    def base_metric(self, xbar: np.ndarray) -> np.ndarray:
        """Spatial block ḡ at x̄ (the first fundamental form for the sphere)."""
        xbar = np.asarray(xbar, dtype=float)
        d = self.spatial_dim
        if self.kind == MetricKind.MINKOWSKI:
            return np.eye(d)
        if self.kind == MetricKind.PRODUCT_RIEMANNIAN:
            return np.exp(2.0 * self.conformal.value(xbar)) * np.eye(d)
        return np.eye(d) - np.outer(xbar, xbar)

    def base_inner(self, xbar: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorised ḡ(a, b) at base points x̄ (shapes (..., d))."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.kind == MetricKind.PRODUCT_RIEMANNIAN:
            return np.exp(2.0 * self.conformal.value(xbar)) * np.sum(a * b, axis=-1)
        if self.is_sphere:
            xbar = np.asarray(xbar, dtype=float)
            return np.sum(a * b, axis=-1) - np.sum(a * xbar, axis=-1) * np.sum(b * xbar, axis=-1)
        return np.sum(a * b, axis=-1)

    def base_norm(self, xbar: np.ndarray, a: np.ndarray) -> np.ndarray:
        return np.sqrt(np.maximum(self.base_inner(xbar, a, a), 0.0))


@dataclass(eq=False)
class Event:
    coords: np.ndarray

    def __post_init__(self) -> None:
        self.coords = np.asarray(self.coords, dtype=float).copy()
        if self.coords.ndim != 1:
            raise ArgumentError("an event is a single chart point")

    @classmethod
    def at(cls, spatial, t: float) -> "Event":
        return cls(np.append(np.asarray(spatial, dtype=float), float(t)))

    @property
    def spatial(self) -> np.ndarray:
        return self.coords[:-1]

    @property
    def t(self) -> float:
        return float(self.coords[-1])

    def shifted(self, dt: float) -> "Event":
        return Event.at(self.spatial, self.t + dt)

    def __repr__(self) -> str:
        return f"Event({np.array2string(self.coords, precision=6, separator=', ')})"


@dataclass(eq=False)
class Tangent:
    base: Event
    components: np.ndarray

    def __post_init__(self) -> None:
        self.components = np.asarray(self.components, dtype=float).copy()

    @property
    def spatial(self) -> np.ndarray:
        return self.components[:-1]

    @property
    def dt(self) -> float:
        return float(self.components[-1])


class Causality(str, Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"


@dataclass(frozen=True)
class CausalClass:
    kind: Causality
    future: Optional[bool] = field(default=None)

    def __post_init__(self) -> None:
        if (self.kind == Causality.SPACELIKE) != (self.future is None):
            raise ArgumentError("time orientation is recorded exactly for non-spacelike vectors")

    @property
    def past(self) -> bool:
        return self.future is False


def metric_eval(metric: SpacetimeMetric, x: Event) -> np.ndarray:
    metric.check_domain(x.coords)
    n = metric.chart_dim
    g = np.zeros((n, n))
    g[:-1, :-1] = metric.base_metric(x.spatial)
    g[-1, -1] = -1.0
    return g


def lorentz_inner(metric: SpacetimeMetric, coords: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorised g(a, b) at chart points ``coords`` (product structure)."""
    coords = np.asarray(coords, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return metric.base_inner(coords[..., :-1], a[..., :-1], b[..., :-1]) - a[..., -1] * b[..., -1]


def classify_vector(metric: SpacetimeMetric, v: Tangent) -> CausalClass:
    scale = float(np.dot(v.components, v.components))
    if scale <= ZERO_VECTOR ** 2:
        raise ArgumentError("cannot classify the zero vector")
    gvv = float(v.components @ metric_eval(metric, v.base) @ v.components)
    future = v.dt > 0
    if abs(gvv) < NULL_BAND * scale:
        return CausalClass(Causality.NULL, future)
    if gvv < 0:
        return CausalClass(Causality.TIMELIKE, future)
    return CausalClass(Causality.SPACELIKE)


def christoffel(metric: SpacetimeMetric, x: Event) -> np.ndarray:
    """Levi-Civita symbols Γ[λ, μ, ν]; every t-mixed symbol vanishes."""
    metric.check_domain(x.coords)
    n = metric.chart_dim
    gamma = np.zeros((n, n, n))
    d = metric.spatial_dim
    if metric.kind == MetricKind.PRODUCT_RIEMANNIAN:
        grad = metric.conformal.gradient(x.spatial)
        eye = np.eye(d)
        gamma[:d, :d, :d] = (
            np.einsum("ij,k->ijk", eye, grad)
            + np.einsum("ik,j->ijk", eye, grad)
            - np.einsum("jk,i->ijk", eye, grad)
        )
    elif metric.is_sphere:
        p = x.spatial
        gamma[:d, :d, :d] = np.einsum("i,jk->ijk", p, np.eye(d))
    return gamma


def geodesic_acceleration(metric: SpacetimeMetric, pos: np.ndarray, vel: np.ndarray) -> np.ndarray:
    """−Γ(v, v) for stacked states of shape (k, n); the closed forms of ``christoffel``."""
    acc = np.zeros_like(vel)
    if metric.kind == MetricKind.MINKOWSKI:
        return acc
    xbar = pos[:, :-1]
    vbar = vel[:, :-1]
    speed2 = np.sum(vbar * vbar, axis=1)
    if metric.kind == MetricKind.PRODUCT_RIEMANNIAN:
        grad = metric.conformal.gradient(xbar)
        gv = np.sum(grad * vbar, axis=1)
        acc[:, :-1] = -(2.0 * gv[:, None] * vbar - speed2[:, None] * grad)
    else:
        acc[:, :-1] = -speed2[:, None] * xbar / np.sum(xbar * xbar, axis=1)[:, None]
    return acc


def null_future_direction(metric: SpacetimeMetric, x: Event, q: np.ndarray) -> Tangent:
    metric.check_domain(x.coords)
    q = np.asarray(q, dtype=float)
    if q.shape != (metric.spatial_dim,):
        raise ArgumentError(f"spatial direction must have {metric.spatial_dim} components")
    if metric.is_sphere and abs(float(q @ x.spatial)) > 1e-9:
        raise ArgumentError("direction is not tangent to the sphere")
    norm = float(metric.base_norm(x.spatial, q))
    if abs(norm - 1.0) > 1e-9:
        raise ArgumentError(f"spatial direction must be unit in the base metric (|q| = {norm!r})")
    return Tangent(x, np.append(q, 1.0))


def tangent_frame(metric: SpacetimeMetric, x: Event) -> np.ndarray:
    """Two base-orthonormal spatial vectors at x spanning the fan plane (m = 2)."""
    if metric.is_sphere:
        p = x.spatial
        axis = np.eye(3)[int(np.argmin(np.abs(p)))]
        e1 = axis - (axis @ p) * p
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(p, e1)
        return np.stack([e1, e2])
    scale = float(np.exp(-metric.conformal.value(x.spatial))) if metric.conformal else 1.0
    return scale * np.eye(2)


def fan_directions(metric: SpacetimeMetric, x: Event, angles: np.ndarray) -> np.ndarray:
    """Base-unit spatial directions at x for launch angles φ, shape (k, spatial_dim)."""
    e = tangent_frame(metric, x)
    angles = np.asarray(angles, dtype=float)
    return np.cos(angles)[:, None] * e[0] + np.sin(angles)[:, None] * e[1]
