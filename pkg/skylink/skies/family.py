from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from skylink.config import settings
from skylink.errors import ArgumentError, CapabilityError
from skylink.geometry.metrics import CausalClass, Causality, Event, SpacetimeMetric, Tangent, classify_vector
from skylink.skies.sky import CauchySlice, SkySample, build_sky
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

MIN_STEPS = 8
POLAR_GRID = 720

Curve = Union[Callable[[float], Event], Sequence[Event]]


@dataclass
class SkyFamily:
    times: np.ndarray
    events: List[Event]
    skies: List[SkySample]
    # None marks a stationary step of a constant curve
    classes: List[Optional[CausalClass]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.skies)

    @property
    def past_directed(self) -> bool:
        return all(c is None or c.past for c in self.classes)

    @property
    def max_step(self) -> float:
        """Largest pointwise base displacement between consecutive skies."""
        if len(self.skies) < 2:
            return 0.0
        return max(
            float(np.max(np.linalg.norm(b.bases - a.bases, axis=1)))
            for a, b in zip(self.skies, self.skies[1:])
        )

    def reversed(self) -> "SkyFamily":
        flipped = [
            None if c is None else CausalClass(c.kind, None if c.future is None else not c.future)
            for c in reversed(self.classes)
        ]
        return SkyFamily(self.times.copy(), self.events[::-1], self.skies[::-1], flipped)


def _sample_curve(curve: Curve, steps: int) -> List[Event]:
    if callable(curve):
        return [curve(t) for t in np.linspace(0.0, 1.0, steps + 1)]
    events = list(curve)
    if len(events) != steps + 1:
        raise ArgumentError(f"expected {steps + 1} curve samples, got {len(events)}")
    return events


def sky_family_along_curve(
    metric: SpacetimeMetric,
    cauchy: CauchySlice,
    curve: Curve,
    n: Optional[int] = None,
    steps: int = 16,
) -> SkyFamily:
    """Skies along a sampled timelike curve; every segment is classified first."""
    if steps < MIN_STEPS:
        raise ArgumentError(f"sky families need at least {MIN_STEPS} steps, got {steps}")
    n = settings.fan if n is None else n
    events = _sample_curve(curve, steps)
    classes: List[Optional[CausalClass]] = []
    for j, (a, b) in enumerate(zip(events, events[1:])):
        delta = b.coords - a.coords
        if metric.is_sphere:
            delta[:-1] -= (delta[:-1] @ a.spatial) * a.spatial
        if np.linalg.norm(delta) < 1e-14:
            classes.append(None)
            continue
        cls = classify_vector(metric, Tangent(a, delta))
        if cls.kind != Causality.TIMELIKE:
            raise ArgumentError(f"curve segment {j} ({a} -> {b}) is {cls.kind.value}, not timelike")
        classes.append(cls)
    LOG.debug("building %d skies along curve from %s", len(events), events[0])
    skies = [build_sky(metric, cauchy, e, n) for e in events]
    return SkyFamily(np.linspace(0.0, 1.0, steps + 1), events, skies, classes)


@dataclass(frozen=True)
class NestingReport:
    min_gap: float
    # every non-degenerate wavefront meets each ray from the centre exactly once
    star_shaped: bool

    @property
    def nested(self) -> bool:
        return self.min_gap > 0.0 and self.star_shaped


def _winds_once(theta: np.ndarray) -> bool:
    turns = np.diff(np.unwrap(np.append(theta, theta[0])))
    return bool(np.all(turns > 0.0) or np.all(turns < 0.0))


def wavefront_nesting(family: SkyFamily, centre: Optional[np.ndarray] = None) -> NestingReport:
    """Minimum radial gap between consecutive slice wavefronts around ``centre``.

    Each wavefront is read in polar coordinates about the limit point and
    interpolated on a common angular grid; a fibre (all samples at the
    centre) reads as radius zero.
    """
    if family.skies[0].slice.metric.is_sphere:
        raise CapabilityError("wavefront nesting is measured in planar polar coordinates")
    centre = family.events[0].spatial if centre is None else np.asarray(centre, dtype=float)
    grid = np.linspace(0.0, 2.0 * np.pi, POLAR_GRID, endpoint=False)
    radii = []
    star = True
    for sky in family.skies:
        offset = sky.bases - centre
        r = np.linalg.norm(offset, axis=1)
        if r.max() < settings.geodesic_tol:
            radii.append(np.zeros_like(grid))
            continue
        theta = np.arctan2(offset[:, 1], offset[:, 0])
        star = star and r.min() > 0.0 and _winds_once(theta)
        order = np.argsort(theta)
        radii.append(np.interp(grid, theta[order], r[order], period=2.0 * np.pi))
    gaps = [float(np.min(b - a)) for a, b in zip(radii, radii[1:])]
    return NestingReport(min(gaps) if gaps else 0.0, star)
