"""Non-negativity of discrete Legendrian isotopies and the fibre-rigidity shadow."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from skylink.config import settings
from skylink.contact.hodograph import downshift
from skylink.contact.legendrian import LegendrianCurve, fibre_point, sky_to_legendrian, wrap_angle
from skylink.errors import ArgumentError
from skylink.skies.family import SkyFamily
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

FIBRE_TOL = 1e-6

Family = Union[SkyFamily, Sequence[LegendrianCurve]]


@dataclass(frozen=True)
class IsotopyReport:
    min_alpha: float
    passed: bool
    alphas: np.ndarray


def _times(count: int, times: Optional[np.ndarray]) -> np.ndarray:
    times = np.linspace(0.0, 1.0, count) if times is None else np.asarray(times, dtype=float)
    if times.size != count:
        raise ArgumentError(f"{count} curves but {times.size} times")
    if np.any(np.diff(times) <= 0):
        raise ArgumentError("family times must increase")
    return times


def _curves(family: Family) -> List[LegendrianCurve]:
    if isinstance(family, SkyFamily):
        return [sky_to_legendrian(sky) for sky in family.skies]
    return list(family)


def _report(alphas: np.ndarray, tol: float) -> IsotopyReport:
    low = float(alphas.min()) if alphas.size else 0.0
    return IsotopyReport(low, low >= -tol, alphas)


def nonneg_isotopy_check(
    family: Family,
    tol: Optional[float] = None,
    times: Optional[np.ndarray] = None,
) -> IsotopyReport:
    """min over matched samples of α(∂F/∂t) = (Δu − p·Δφ) / Δt; passes iff ≥ −tol."""
    tol = settings.nonneg_tol if tol is None else tol
    if isinstance(family, SkyFamily):
        if family.skies[0].slice.metric.is_sphere:
            return cotangent_nonneg_check(family, tol)
        times = family.times if times is None else times
    curves = _curves(family)
    if len({c.n for c in curves}) > 1:
        raise ArgumentError("family curves must be sampled at the same fan angles")
    times = _times(len(curves), times)
    phi = np.stack([c.phi for c in curves])
    p = np.stack([c.p for c in curves])
    u = np.stack([c.u for c in curves])
    alphas = ((u[1:] - u[:-1]) - p[:-1] * wrap_angle(phi[1:] - phi[:-1])) / np.diff(times)[:, None]
    return _report(alphas, tol)


def cotangent_nonneg_check(family: SkyFamily, tol: Optional[float] = None) -> IsotopyReport:
    """The same test read in ST*M: α = ḡ(q, Δbase) / Δt at matched fan samples."""
    tol = settings.nonneg_tol if tol is None else tol
    metric = family.skies[0].slice.metric
    if len({s.n for s in family.skies}) > 1:
        raise ArgumentError("family skies must share one fan")
    dt = np.diff(family.times)
    alphas = np.stack(
        [
            metric.base_inner(a.bases, a.codirections, b.bases - a.bases) / step
            for a, b, step in zip(family.skies, family.skies[1:], dt)
        ]
    )
    return _report(alphas, tol)


@dataclass(frozen=True)
class RigidityReport:
    starts_at_fibre: bool
    ends_at_fibre: bool
    nonnegative: bool
    endpoints_equal: bool
    deviation: float
    tol: float

    @property
    def applies(self) -> bool:
        return self.starts_at_fibre and self.ends_at_fibre and self.nonnegative

    @property
    def holds(self) -> bool:
        return not self.applies or (self.endpoints_equal and self.deviation <= self.tol)


def _sky_rigidity(family: SkyFamily, nonnegative: bool, tol: float) -> RigidityReport:
    first, last = family.skies[0], family.skies[-1]
    start, end = first.bases.mean(axis=0), last.bases.mean(axis=0)
    deviation = max(
        float(np.max(np.abs(s.bases - first.bases)) + np.max(np.abs(s.codirections - first.codirections)))
        for s in family.skies
    )
    return RigidityReport(
        first.is_fibre(FIBRE_TOL),
        last.is_fibre(FIBRE_TOL),
        nonnegative,
        bool(np.linalg.norm(end - start) <= tol),
        deviation,
        tol,
    )


def fibre_rigidity_check(family: Family, tol: float = 1e-8) -> RigidityReport:
    """A non-negative family from a fibre to a fibre must be constant.

    The first fibre is moved to the zero section by the downshift along
    ⟨x̄₀, q⟩, after which constancy is the sup norm of every member.
    """
    from skylink.genfun.family import TrigPolynomial

    nonnegative = nonneg_isotopy_check(family).passed
    if isinstance(family, SkyFamily) and family.skies[0].slice.metric.is_sphere:
        return _sky_rigidity(family, nonnegative, tol)
    curves = _curves(family)
    start = fibre_point(curves[0], FIBRE_TOL)
    end = fibre_point(curves[-1], FIBRE_TOL)
    deviation = float("inf")
    equal = False
    if start is not None:
        h = TrigPolynomial.linear(start)
        shifted = [downshift(c, h) for c in curves]
        deviation = max(float(max(np.max(np.abs(c.p)), np.max(np.abs(c.u)))) for c in shifted)
        equal = end is not None and bool(np.linalg.norm(end - start) <= tol)
    report = RigidityReport(start is not None, end is not None, nonnegative, equal, deviation, tol)
    if report.applies and not report.holds:
        LOG.warning("fibre rigidity violated: deviation %.3g", deviation)
    return report
