"""Geodesic integration for single rays and whole fans.

A fan of k rays is integrated as one stacked first-order system with scipy's
RK45 and dense output, so every ray shares the step sequence of the worst one.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import OdeSolution, solve_ivp

from skylink.config import settings
from skylink.errors import ArgumentError, IntegrationError
from skylink.geometry.metrics import (
    Event,
    MetricKind,
    SpacetimeMetric,
    Tangent,
    geodesic_acceleration,
    lorentz_inner,
)
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

CHART_RADIUS = 1e3
MAX_STEPS = 200_000


@dataclass
class GeodesicPath:
    """Sampled geodesics γ_j(s), j = 0..k−1, sharing the affine grid ``s``."""

    metric: SpacetimeMetric
    s: np.ndarray
    positions: np.ndarray  # (N, k, n)
    velocities: np.ndarray  # (N, k, n)
    tol: float
    dense: Optional[OdeSolution] = None

    @property
    def rays(self) -> int:
        return self.positions.shape[1]

    @property
    def s_end(self) -> float:
        return float(self.s[-1])

    def state_at(self, s_values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Position and velocity of ray j at ``s_values[j]``, shapes (k, n)."""
        s_values = np.broadcast_to(np.asarray(s_values, dtype=float), (self.rays,))
        if self.dense is None:
            return self.positions[0].copy(), self.velocities[0].copy()
        uniq, inverse = np.unique(s_values, return_inverse=True)
        k, n = self.rays, self.metric.chart_dim
        y = self.dense(uniq).reshape(k, 2, n, uniq.size)
        picked = y[np.arange(k), :, :, inverse]
        return _project(self.metric, picked[:, 0], picked[:, 1])

    def norm_drift(self) -> float:
        """max |g(γ′, γ′) − g(γ′(0), γ′(0))| over the sampled nodes."""
        g = lorentz_inner(self.metric, self.positions, self.velocities, self.velocities)
        return float(np.max(np.abs(g - g[0])))


def _project(metric: SpacetimeMetric, pos: np.ndarray, vel: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if metric.kind != MetricKind.ROUND_SPHERE_PRODUCT:
        return pos, vel
    pos = pos.copy()
    vel = vel.copy()
    p = pos[..., :-1] / np.linalg.norm(pos[..., :-1], axis=-1, keepdims=True)
    pos[..., :-1] = p
    vel[..., :-1] -= np.sum(vel[..., :-1] * p, axis=-1, keepdims=True) * p
    return pos, vel


def _rhs(metric: SpacetimeMetric, k: int, n: int):
    def f(_s, y):
        state = y.reshape(k, 2, n)
        acc = geodesic_acceleration(metric, state[:, 0], state[:, 1])
        return np.stack([state[:, 1], acc], axis=1).ravel()

    return f


def _chart_exit(metric: SpacetimeMetric, k: int, n: int):
    def event(_s, y):
        state = y.reshape(k, 2, n)
        return CHART_RADIUS - float(np.max(np.abs(state[:, 0, :-1])))

    event.terminal = True
    return event


def geodesic_fan(
    metric: SpacetimeMetric,
    x: Event,
    velocities: np.ndarray,
    s_max: float,
    tol: Optional[float] = None,
) -> GeodesicPath:
    """Integrate every initial velocity in ``velocities`` (k, n) from x to affine s_max."""
    tol = settings.geodesic_tol if tol is None else tol
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol!r}")
    metric.check_domain(x.coords)
    velocities = np.atleast_2d(np.asarray(velocities, dtype=float))
    k, n = velocities.shape
    if n != metric.chart_dim:
        raise ArgumentError(f"velocities need {metric.chart_dim} components, got {n}")
    positions0 = np.broadcast_to(x.coords, (k, n)).copy()
    if s_max == 0.0:
        return GeodesicPath(metric, np.zeros(1), positions0[None], velocities[None].copy(), tol)

    y0 = np.stack([positions0, velocities], axis=1).ravel()
    sol = solve_ivp(
        _rhs(metric, k, n),
        (0.0, float(s_max)),
        y0,
        method="RK45",
        rtol=tol,
        atol=tol,
        dense_output=True,
        events=_chart_exit(metric, k, n),
    )
    states = sol.y.T.reshape(-1, k, 2, n)
    pos, vel = _project(metric, states[:, :, 0], states[:, :, 1])
    path = GeodesicPath(metric, sol.t, pos, vel, tol, sol.sol)
    if sol.status == 1:
        LOG.debug("geodesic fan left the chart at s=%.6g", sol.t[-1])
        raise IntegrationError(f"geodesic left the chart domain at s={sol.t[-1]:.6g}", partial=path)
    if sol.status != 0:
        raise IntegrationError(f"step-size underflow before s={s_max!r}: {sol.message}", partial=path)
    return path


def geodesic_flow(
    metric: SpacetimeMetric,
    x: Event,
    v: Tangent,
    s_max: float,
    tol: Optional[float] = None,
) -> GeodesicPath:
    """Single-ray geodesic from (x, v); ``positions[:, 0]`` is the sampled path."""
    if not isinstance(v, Tangent):
        raise ArgumentError(f"initial velocity must be a Tangent, got {type(v).__name__}")
    if v.base.coords.shape != x.coords.shape or not np.allclose(v.base.coords, x.coords):
        raise ArgumentError(f"tangent is based at {v.base.coords}, not at {x.coords}")
    return geodesic_fan(metric, x, v.components[None, :], s_max, tol)
