"""Base-manifold distances d_ḡ(a, b) for the supported product spacetimes."""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.optimize import brentq, minimize_scalar
from scipy.sparse.csgraph import dijkstra

from skylink.config import settings
from skylink.errors import ArgumentError, CapabilityError, IntegrationError, NumericalError
from skylink.geometry.geodesics import geodesic_fan
from skylink.geometry.metrics import Event, MetricKind, SpacetimeMetric
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

SCAN_RAYS = 181
SCAN_SAMPLES = 1500
MISS_TOL = 1e-8
GRID_AGREEMENT = 0.02


@dataclass(frozen=True)
class DistanceReport:
    shooting: float
    grid: float

    @property
    def relative_gap(self) -> float:
        if self.shooting == 0.0:
            return abs(self.grid)
        return abs(self.grid - self.shooting) / self.shooting

    @property
    def agree(self) -> bool:
        return self.relative_gap <= GRID_AGREEMENT


def riemannian_distance(metric: SpacetimeMetric, a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (metric.spatial_dim,) or b.shape != a.shape:
        raise ArgumentError(f"points need {metric.spatial_dim} spatial coordinates")
    if metric.kind == MetricKind.MINKOWSKI:
        return float(np.linalg.norm(b - a))
    if metric.is_sphere:
        metric.check_domain(np.append(a, 0.0))
        metric.check_domain(np.append(b, 0.0))
        return float(np.arccos(np.clip(a @ b, -1.0, 1.0)))
    if metric.dim_space != 2:
        raise CapabilityError("conformal distances are implemented for m = 2 only")
    return shooting_distance(metric, a, b)


def _launch(metric: SpacetimeMetric, a: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    scale = np.exp(-metric.conformal.value(a))
    v = np.zeros((thetas.size, 3))
    v[:, 0] = scale * np.cos(thetas)
    v[:, 1] = scale * np.sin(thetas)
    return v


def _scan(metric: SpacetimeMetric, a: np.ndarray, b: np.ndarray, thetas: np.ndarray, s_max: float):
    """Signed miss and arc length at closest approach for every launch angle."""
    path = geodesic_fan(metric, Event.at(a, 0.0), _launch(metric, a, thetas), s_max)
    s_grid = np.linspace(0.0, s_max, SCAN_SAMPLES)
    y = path.dense(s_grid).reshape(thetas.size, 2, 3, SCAN_SAMPLES)
    gap = np.linalg.norm(y[:, 0, :2, :] - b[None, :, None], axis=1)
    best = np.argmin(gap, axis=1)
    rays = np.arange(thetas.size)
    pos = y[rays, 0, :2, best]
    vel = y[rays, 1, :2, best]
    offset = b - pos
    cross = vel[:, 0] * offset[:, 1] - vel[:, 1] * offset[:, 0]
    miss = cross / np.linalg.norm(vel, axis=1)
    return miss, s_grid[best]


def _closest(metric: SpacetimeMetric, a: np.ndarray, b: np.ndarray, theta: float, s_max: float) -> Tuple[float, float]:
    path = geodesic_fan(metric, Event.at(a, 0.0), _launch(metric, a, np.array([theta])), s_max)

    def gap(s: float) -> float:
        pos, _ = path.state_at(s)
        return float(np.linalg.norm(pos[0, :2] - b))

    nodes = np.linspace(0.0, s_max, SCAN_SAMPLES)
    sampled = path.dense(nodes)[:2]
    i = int(np.argmin(np.linalg.norm(sampled - b[:, None], axis=0)))
    lo, hi = nodes[max(i - 1, 0)], nodes[min(i + 1, nodes.size - 1)]
    res = minimize_scalar(gap, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    pos, vel = path.state_at(res.x)
    offset = b - pos[0, :2]
    v = vel[0, :2]
    miss = (v[0] * offset[1] - v[1] * offset[0]) / np.linalg.norm(v)
    return float(miss), float(res.x)


def shooting_distance(metric: SpacetimeMetric, a: np.ndarray, b: np.ndarray) -> float:
    """Shortest ḡ-geodesic from a to b by launch-angle bracketing and Brent refinement."""
    chord = float(np.linalg.norm(b - a))
    if chord == 0.0:
        return 0.0
    s_max = 1.5 * np.exp(metric.conformal.amplitude) * chord + 1.0
    heading = float(np.arctan2(b[1] - a[1], b[0] - a[0]))
    thetas = heading + np.linspace(-np.pi / 2, np.pi / 2, SCAN_RAYS)
    try:
        miss, _ = _scan(metric, a, b, thetas, s_max)
    except IntegrationError as exc:
        raise NumericalError(f"shooting scan failed: {exc}", best_bound=grid_graph_distance(metric, a, b)) from exc

    lengths: List[float] = []
    for i in np.flatnonzero(np.sign(miss[:-1]) * np.sign(miss[1:]) <= 0):
        lo, hi = float(thetas[i]), float(thetas[i + 1])
        f = lambda th: _closest(metric, a, b, th, s_max)[0]
        try:
            if miss[i] == 0.0:
                theta = lo
            else:
                theta = brentq(f, lo, hi, xtol=1e-14, rtol=1e-14)
        except ValueError:
            LOG.debug("dropping shooting bracket [%.6f, %.6f]", lo, hi)
            continue
        residual, length = _closest(metric, a, b, theta, s_max)
        if abs(residual) < MISS_TOL and 0.0 < length < s_max:
            lengths.append(length)
    if not lengths:
        raise NumericalError(
            f"shooting failed to bracket a geodesic from {a} to {b}",
            best_bound=grid_graph_distance(metric, a, b),
        )
    return min(lengths)


@lru_cache(maxsize=8)
def _grid_graphs(amplitude: float, width: float, half_width: float, resolution: int):
    axis = np.linspace(-half_width, half_width, resolution)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    weight = np.exp(amplitude * np.exp(-(xx ** 2 + yy ** 2) / width ** 2))
    index = np.arange(resolution * resolution).reshape(resolution, resolution)
    h = axis[1] - axis[0]
    rows, cols, conf, flat = [], [], [], []
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        i0 = slice(0, resolution - di)
        i1 = slice(di, resolution)
        j0 = slice(max(0, -dj), resolution - max(0, dj))
        j1 = slice(max(0, dj), resolution - max(0, -dj))
        step = h * np.hypot(di, dj)
        rows.append(index[i0, j0].ravel())
        cols.append(index[i1, j1].ravel())
        conf.append(0.5 * step * (weight[i0, j0] + weight[i1, j1]).ravel())
        flat.append(np.full(rows[-1].size, step))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    n = resolution * resolution
    conformal = sparse.csr_matrix((np.concatenate(conf), (r, c)), shape=(n, n))
    euclid = sparse.csr_matrix((np.concatenate(flat), (r, c)), shape=(n, n))
    return axis, conformal, euclid


def _cell_nodes(axis: np.ndarray, point: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    res = axis.size
    i = int(np.clip(np.searchsorted(axis, point[0]) - 1, 0, res - 2))
    j = int(np.clip(np.searchsorted(axis, point[1]) - 1, 0, res - 2))
    ii = np.array([i, i + 1, i, i + 1])
    jj = np.array([j, j, j + 1, j + 1])
    coords = np.stack([axis[ii], axis[jj]], axis=1)
    return ii * res + jj, coords


def grid_graph_distance(
    metric: SpacetimeMetric,
    a: np.ndarray,
    b: np.ndarray,
    resolution: Optional[int] = None,
) -> float:
    """8-neighbour Dijkstra bound, calibrated by the flat graph distance between the same points."""
    if metric.kind != MetricKind.PRODUCT_RIEMANNIAN:
        raise CapabilityError("grid-graph distances are only needed for conformal bases")
    resolution = settings.grid_resolution if resolution is None else resolution
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    chord = float(np.linalg.norm(b - a))
    if chord == 0.0:
        return 0.0
    half_width = float(np.ceil(max(np.max(np.abs(a)), np.max(np.abs(b))) + 2.0))
    factor = metric.conformal
    axis, conformal, euclid = _grid_graphs(factor.amplitude, factor.width, half_width, resolution)
    src, src_xy = _cell_nodes(axis, a)
    dst, dst_xy = _cell_nodes(axis, b)

    def attach(point, nodes_xy, weighted):
        d = np.linalg.norm(nodes_xy - point, axis=1)
        if not weighted:
            return d
        mid = 0.5 * (nodes_xy + point)
        return d * np.exp(factor.value(mid))

    lengths = []
    for graph, weighted in ((conformal, True), (euclid, False)):
        table = dijkstra(graph, directed=False, indices=src)[:, dst]
        total = attach(a, src_xy, weighted)[:, None] + table + attach(b, dst_xy, weighted)[None, :]
        lengths.append(float(np.min(total)))
    return lengths[0] * chord / lengths[1]


def distance_report(metric: SpacetimeMetric, a: np.ndarray, b: np.ndarray) -> DistanceReport:
    """Shooting distance alongside the independent grid-graph bound."""
    return DistanceReport(shooting_distance(metric, a, b), grid_graph_distance(metric, a, b))
