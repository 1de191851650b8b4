"""Skies of events as sampled subsets of ST*M over a level Cauchy slice."""

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from skylink.config import settings
from skylink.errors import (
    ArgumentError,
    CapabilityError,
    CrossingRangeError,
    DegenerateCovectorError,
    IntegrationError,
)
from skylink.geometry.geodesics import GeodesicPath, geodesic_fan
from skylink.geometry.metrics import Event, SpacetimeMetric, Tangent, fan_directions
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

MIN_FAN = 64
CROSSING_TOL = 1e-10
MAX_NEWTON = 60


@dataclass(frozen=True)
class CauchySlice:
    """The level set {t = level}; its induced metric is the base block ḡ."""

    metric: SpacetimeMetric
    level: float = 0.0

    def contains(self, x: Event, tol: float = 1e-12) -> bool:
        return abs(x.t - self.level) <= tol


@dataclass(frozen=True)
class STStarPoint:
    base: np.ndarray
    codirection: np.ndarray


@dataclass
class SliceCrossing:
    """Crossing data of every ray of a path with a slice, in ray order."""

    s: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray

    def event(self, ray: int = 0) -> Event:
        return Event(self.positions[ray])

    def tangent(self, ray: int = 0) -> Tangent:
        return Tangent(self.event(ray), self.velocities[ray])


@dataclass
class SkySample:
    event: Event
    slice: CauchySlice
    angles: np.ndarray
    bases: np.ndarray
    codirections: np.ndarray

    @property
    def n(self) -> int:
        return self.angles.size

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, k: int) -> STStarPoint:
        return STStarPoint(self.bases[k % self.n], self.codirections[k % self.n])

    def __iter__(self) -> Iterator[STStarPoint]:
        return (self[k] for k in range(self.n))

    def base_spread(self, centre: Optional[np.ndarray] = None) -> float:
        centre = self.bases.mean(axis=0) if centre is None else np.asarray(centre, dtype=float)
        return float(np.max(np.linalg.norm(self.bases - centre, axis=1)))

    def is_fibre(self, tol: float = 1e-6) -> bool:
        return self.base_spread() <= tol


def fan_angles(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def _bracket(values: np.ndarray) -> np.ndarray:
    """Index of the first node interval [i, i+1] in which each column changes sign."""
    sign = np.sign(values)
    hit = (sign[:-1] * sign[1:] <= 0) | (sign[:-1] == 0)
    found = hit.any(axis=0)
    first = np.argmax(hit, axis=0)
    return np.where(found, first, -1)


def cauchy_intersection(
    metric: SpacetimeMetric,
    path: GeodesicPath,
    cauchy: CauchySlice,
    budget: Optional[float] = None,
) -> SliceCrossing:
    """Locate where every ray of ``path`` meets the slice, to |t − t₀| < 1e-10.

    Rays that have not reached the slice are re-integrated with a doubled affine
    range until ``budget``; past that a CrossingRangeError is raised.
    """
    ti = metric.time_index
    values = path.positions[:, :, ti] - cauchy.level
    if path.s.size == 1:
        if np.all(np.abs(values[0]) <= CROSSING_TOL):
            return SliceCrossing(np.zeros(path.rays), path.positions[0].copy(), path.velocities[0].copy())
        raise CrossingRangeError("degenerate path does not meet the slice", partial=path)

    first = _bracket(values)
    if np.any(first < 0):
        span = 2.0 * path.s_end
        if budget is None or abs(span) > budget:
            missing = int(np.flatnonzero(first < 0)[0])
            raise CrossingRangeError(
                f"ray {missing} does not meet t={cauchy.level} within s={path.s_end:.6g}", partial=path
            )
        LOG.debug("extending fan integration to s=%.6g", span)
        start = Event(path.positions[0, 0])
        longer = geodesic_fan(metric, start, path.velocities[0], span, path.tol)
        return cauchy_intersection(metric, longer, cauchy, budget)

    rays = np.arange(path.rays)
    lo = path.s[first]
    hi = path.s[first + 1]
    f_lo = values[first, rays]
    f_hi = values[first + 1, rays]
    exact = f_lo == 0
    denom = np.where(f_hi != f_lo, f_hi - f_lo, 1.0)
    s = np.where(exact, lo, lo - f_lo * (hi - lo) / denom)

    for _ in range(MAX_NEWTON):
        pos, vel = path.state_at(s)
        f = pos[:, ti] - cauchy.level
        if np.all(np.abs(f) < CROSSING_TOL):
            return SliceCrossing(s, pos, vel)
        same = np.sign(f) == np.sign(f_lo)
        lo = np.where(same, s, lo)
        f_lo = np.where(same, f, f_lo)
        hi = np.where(same, hi, s)
        rate = vel[:, ti]
        newton = s - f / np.where(rate != 0, rate, np.inf)
        inside = (newton - lo) * (newton - hi) < 0
        s = np.where(np.abs(f) < CROSSING_TOL, s, np.where(inside, newton, 0.5 * (lo + hi)))
    pos, vel = path.state_at(s)
    worst = float(np.max(np.abs(pos[:, ti] - cauchy.level)))
    raise CrossingRangeError(f"slice crossing did not converge (|t - t0| = {worst:.3g})", partial=path)


def rho_m(metric: SpacetimeMetric, cauchy: CauchySlice, crossing: SliceCrossing) -> Tuple[np.ndarray, np.ndarray]:
    """Bases and ḡ-unit codirections of g(γ′, ·) restricted to the slice.

    For product metrics the restricted covector is ḡ(γ̄′, ·), represented by the
    spatial velocity itself.
    """
    vel = crossing.velocities
    if np.any(vel[:, -1] <= 0):
        raise ArgumentError("crossing velocities must be future-pointing")
    bases = crossing.positions[:, :-1]
    w = vel[:, :-1]
    if metric.is_sphere:
        w = w - np.sum(w * bases, axis=1, keepdims=True) * bases
    norm = metric.base_norm(bases, w)
    if np.any(norm < 1e-12):
        raise DegenerateCovectorError("restricted covector vanishes; slice is not spacelike or nullity is broken")
    return bases, w / norm[:, None]


def build_sky(
    metric: SpacetimeMetric,
    cauchy: CauchySlice,
    x: Event,
    n: Optional[int] = None,
    tol: Optional[float] = None,
) -> SkySample:
    n = settings.fan if n is None else n
    if n < MIN_FAN:
        raise ArgumentError(f"sky fans need at least {MIN_FAN} samples, got {n}")
    if metric.dim_space != 2:
        raise CapabilityError("skies are sampled as closed fans for m = 2 only")
    metric.check_domain(x.coords)

    angles = fan_angles(n)
    velocities = np.hstack([fan_directions(metric, x, angles), np.ones((n, 1))])
    # dt/ds = 1 in product charts
    s_star = cauchy.level - x.t
    try:
        path = geodesic_fan(metric, x, velocities, s_star, tol)
        crossing = cauchy_intersection(metric, path, cauchy, budget=2.0 * abs(s_star) + 1.0)
    except IntegrationError as exc:
        partial = exc.partial
        phi = None
        if isinstance(partial, GeodesicPath):
            reach = np.linalg.norm(partial.positions[-1, :, :-1], axis=1)
            phi = float(angles[int(np.argmax(reach))])
        raise type(exc)(f"sky of {x} at fan angle φ={phi}: {exc}", partial=partial) from exc
    bases, codirections = rho_m(metric, cauchy, crossing)
    return SkySample(x, cauchy, angles, bases, codirections)
