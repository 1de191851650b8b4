"""Sampled closed Legendrian curves in 𝒥¹(S¹) with coordinates (φ, p, u)."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple

import numpy as np

from skylink.config import settings
from skylink.contact.hodograph import hodograph
from skylink.errors import ArgumentError, CapabilityError, IntegrityError
from skylink.utils.log import get_logger

if TYPE_CHECKING:
    from skylink.genfun.family import TrigPolynomial
    from skylink.skies.sky import SkySample

LOG = get_logger(__name__)

TWO_PI = 2.0 * np.pi


def wrap_angle(delta: np.ndarray) -> np.ndarray:
    """Principal value in (−π, π]."""
    return np.pi - np.mod(np.pi - np.asarray(delta, dtype=float), TWO_PI)


@dataclass
class LegendrianCurve:
    """Cyclic samples (φ_k, p_k, u_k); ``phi`` is kept continuous (unwrapped).

    Sample k corresponds to fan index k when the curve comes from a sky, which
    is what time-step matching in isotopy checks relies on.
    """

    phi: np.ndarray
    p: np.ndarray
    u: np.ndarray
    component: int = 0

    def __post_init__(self) -> None:
        self.phi = np.unwrap(np.asarray(self.phi, dtype=float))
        self.p = np.asarray(self.p, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        if not (self.phi.shape == self.p.shape == self.u.shape) or self.phi.ndim != 1:
            raise ArgumentError("φ, p and u must be 1-d arrays of equal length")
        if self.phi.size < 3:
            raise ArgumentError("a closed curve needs at least three samples")

    @property
    def n(self) -> int:
        return self.phi.size

    @property
    def winding(self) -> int:
        steps = wrap_angle(np.diff(np.append(self.phi, self.phi[0])))
        return int(np.rint(steps.sum() / TWO_PI))

    def closed(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Samples with the first one repeated at the end, φ continued by the winding."""
        phi = np.append(self.phi, self.phi[0] + TWO_PI * self.winding)
        return phi, np.append(self.p, self.p[0]), np.append(self.u, self.u[0])

    @property
    def is_graph(self) -> bool:
        phi, _, _ = self.closed()
        return self.winding == 1 and bool(np.all(np.diff(phi) > 0))

    def residual(self) -> float:
        return legendrian_residual(self)

    def base_points(self) -> np.ndarray:
        from skylink.contact.hodograph import inverse_hodograph

        base, _ = inverse_hodograph(self.phi, self.p, self.u)
        return base

    @classmethod
    def from_function(cls, f: "TrigPolynomial", n: int = 720, component: int = 0) -> "LegendrianCurve":
        """Λ^f, the graph of the 1-jet of f."""
        phi = TWO_PI * np.arange(n) / n
        return cls(phi, f.derivative()(phi), f(phi), component)


def legendrian_residual(curve: LegendrianCurve) -> float:
    """max over sample triples of |Δu − ∫p dφ| over their arc length in (φ, p, u).

    ∫p dφ uses Simpson's rule on non-uniform nodes; triples straddling a cusp
    (Δφ changes sign) or with very uneven steps fall back to the trapezoid rule.
    """
    phi, p, u = curve.closed()
    phi = np.append(phi, phi[1] + TWO_PI * curve.winding)
    p = np.append(p, p[1])
    u = np.append(u, u[1])
    h0 = phi[1:-1] - phi[:-2]
    h1 = phi[2:] - phi[1:-1]
    p0, p1, p2 = p[:-2], p[1:-1], p[2:]
    regular = (h0 * h1 > 0) & (np.abs(h0) > 1e-15) & (np.abs(h1) > 1e-15)
    regular &= (np.abs(h0) <= 4.0 * np.abs(h1)) & (np.abs(h1) <= 4.0 * np.abs(h0))
    sh0 = np.where(regular, h0, 1.0)
    sh1 = np.where(regular, h1, 1.0)
    simpson = (sh0 + sh1) / 6.0 * (
        (2.0 - sh1 / sh0) * p0 + (sh0 + sh1) ** 2 / (sh0 * sh1) * p1 + (2.0 - sh0 / sh1) * p2
    )
    trapezoid = 0.5 * (p0 + p1) * h0 + 0.5 * (p1 + p2) * h1
    integral = np.where(regular, simpson, trapezoid)
    # arc length stays positive through cusps, where Δφ vanishes but p keeps moving
    seg = np.sqrt(np.diff(phi) ** 2 + np.diff(p) ** 2 + np.diff(u) ** 2)
    span = seg[:-1] + seg[1:]
    error = np.abs(u[2:] - u[:-2] - integral)
    return float(np.max(np.where(span > 0.0, error / np.where(span > 0.0, span, 1.0), error)))


def sky_to_legendrian(
    sky: "SkySample",
    component: int = 0,
    check: bool = True,
    residual_max: Optional[float] = None,
) -> LegendrianCurve:
    """Hodograph image of a planar sky, sample k keeping fan index k."""
    if sky.slice.metric.is_sphere:
        raise CapabilityError("the hodograph chart needs a planar slice")
    # conformal codirections share their direction with the Euclidean unit vector
    q = sky.codirections / np.linalg.norm(sky.codirections, axis=1, keepdims=True)
    phi, p, u = hodograph(sky.bases, q)
    curve = LegendrianCurve(phi, p, u, component)
    if check:
        limit = settings.residual_max if residual_max is None else residual_max
        residual = curve.residual()
        if residual > limit:
            raise IntegrityError(f"sky of {sky.event} has Legendrian residual {residual:.3g} > {limit:.3g}")
        LOG.debug("sky of %s: residual %.3g", sky.event, residual)
    return curve


def fibre_point(curve: LegendrianCurve, tol: float = 1e-8) -> Optional[np.ndarray]:
    """Base point when the curve is the hodograph image of a single fibre, else None."""
    base = curve.base_points()
    centre = base.mean(axis=0)
    if np.max(np.linalg.norm(base - centre, axis=1)) <= tol:
        return centre
    return None
