"""Front projections (φ, u) of Legendrian curves and their classical invariants.

Conventions, in the (φ, u) annulus with the blackboard framing:

* at a crossing the strand with the larger p is in front (over);
* the crossing sign is the orientation of the frame (t_over, t_under), with
  strands oriented by increasing sample index;
* a cusp is "down" when p′ · φ″ < 0 along the parameterisation;
* rotation = (down − up) / 2 and tb = writhe − cusps / 2.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from skylink.config import settings
from skylink.contact.legendrian import TWO_PI, LegendrianCurve
from skylink.errors import ArgumentError, FrontError, TangencyError, UnderResolvedFrontError
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

OVERSAMPLE = 4
CHUNK = 512


@dataclass(frozen=True)
class Crossing:
    phi: float
    u: float
    over: int
    under: int
    sign: int
    gap: float


@dataclass(frozen=True)
class Cusp:
    phi: float
    u: float
    component: int
    down: bool


@dataclass
class FrontDiagram:
    curves: List[LegendrianCurve]
    crossings: List[Crossing] = field(default_factory=list)
    cusps: List[Cusp] = field(default_factory=list)
    tangencies: List[float] = field(default_factory=list)
    traces: List[Optional[CubicHermiteSpline]] = field(default_factory=list)

    def self_crossings(self, component: int) -> List[Crossing]:
        return [c for c in self.crossings if c.over == c.under == component]

    def inter_crossings(self) -> List[Crossing]:
        return [c for c in self.crossings if c.over != c.under]

    def writhe(self, component: int) -> int:
        return sum(c.sign for c in self.self_crossings(component))

    def cusp_counts(self, component: int) -> Tuple[int, int]:
        down = sum(1 for c in self.cusps if c.component == component and c.down)
        up = sum(1 for c in self.cusps if c.component == component and not c.down)
        return down, up


@dataclass(frozen=True)
class ComponentInvariants:
    rotation: int
    tb: int
    winding: int


@dataclass(frozen=True)
class LinkSignature:
    components: Tuple[ComponentInvariants, ComponentInvariants]
    crossing_count: int
    # sign of u_a − u_b when the fronts are disjoint, 0 otherwise
    vertical_order: int

    def same_class_data(self, other: "LinkSignature") -> bool:
        return self.components == other.components and self.crossing_count == other.crossing_count


def _cusps(curve: LegendrianCurve, component: int) -> List[Cusp]:
    phi, p, u = curve.closed()
    d = np.diff(phi)
    prev = np.roll(d, 1)
    at = np.flatnonzero(prev * d < 0)
    dp = np.roll(curve.p, -1) - np.roll(curve.p, 1)
    return [
        Cusp(float(np.mod(curve.phi[k], TWO_PI)), float(curve.u[k]), component, bool(dp[k] * (d[k] - prev[k]) < 0))
        for k in at
    ]


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _segment_hits(a0, a1, b0, b1):
    """Proper intersections between segments a (rows) and b (columns), half-open in both."""
    r = a1 - a0
    s = b1 - b0
    denom = _cross(r[:, None, 0], r[:, None, 1], s[None, :, 0], s[None, :, 1])
    qp_x = b0[None, :, 0] - a0[:, None, 0]
    qp_y = b0[None, :, 1] - a0[:, None, 1]
    safe = np.where(denom != 0, denom, 1.0)
    t = _cross(qp_x, qp_y, s[None, :, 0], s[None, :, 1]) / safe
    w = _cross(qp_x, qp_y, r[:, None, 0], r[:, None, 1]) / safe
    hit = (denom != 0) & (t >= 0) & (t < 1) & (w >= 0) & (w < 1)
    return hit, t, w


def _self_crossings(curve: LegendrianCurve, component: int, band: float) -> Tuple[List[Crossing], List[float]]:
    phi, p, u = curve.closed()
    pts = np.stack([phi, u], axis=1)
    n = curve.n
    reach = int(np.ceil((phi.max() - phi.min()) / TWO_PI))
    crossings: List[Crossing] = []
    tangencies: List[float] = []
    for shift in range(0, reach + 1):
        offset = np.array([TWO_PI * shift, 0.0])
        for start in range(0, n, CHUNK):
            rows = np.arange(start, min(start + CHUNK, n))
            hit, t, w = _segment_hits(pts[rows], pts[rows + 1], pts[:-1] + offset, pts[1:] + offset)
            if shift == 0:
                cols = np.arange(n)[None, :]
                gap = cols - rows[:, None]
                hit &= (gap > 1) & ~((rows[:, None] == 0) & (cols == n - 1))
            for ri, j in zip(*np.nonzero(hit)):
                i = rows[ri]
                ti, wj = t[ri, j], w[ri, j]
                pa = p[i] + ti * (p[i + 1] - p[i])
                pb = p[j] + wj * (p[j + 1] - p[j])
                where = float(np.mod(phi[i] + ti * (phi[i + 1] - phi[i]), TWO_PI))
                height = float(u[i] + ti * (u[i + 1] - u[i]))
                if abs(pa - pb) < band:
                    tangencies.append(where)
                    continue
                ta = pts[i + 1] - pts[i]
                tb = pts[j + 1] - pts[j]
                over, under = (ta, tb) if pa > pb else (tb, ta)
                sign = int(np.sign(_cross(over[0], over[1], under[0], under[1])))
                crossings.append(Crossing(where, height, component, component, sign, float(abs(pa - pb))))
    return crossings, tangencies


def front_trace(curve: LegendrianCurve) -> CubicHermiteSpline:
    """Periodic Hermite interpolant of u over φ with slopes p (graph fronts only)."""
    x = np.mod(curve.phi, TWO_PI)
    order = np.argsort(x)
    x, u, p = x[order], curve.u[order], curve.p[order]
    x = np.concatenate([[x[-1] - TWO_PI], x, [x[0] + TWO_PI]])
    u = np.concatenate([[u[-1]], u, [u[0]]])
    p = np.concatenate([[p[-1]], p, [p[0]]])
    return CubicHermiteSpline(x, u, p)


def _graph_crossings(
    a: CubicHermiteSpline, b: CubicHermiteSpline, samples: int, band: float
) -> Tuple[List[Crossing], List[float]]:
    grid = np.linspace(0.0, TWO_PI, samples + 1)
    diff = a(grid) - b(grid)
    da, db = a.derivative(), b.derivative()
    f = lambda x: float(a(x) - b(x))
    crossings: List[Crossing] = []
    tangencies: List[float] = []
    roots = [brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-15) for i in np.flatnonzero(diff[:-1] * diff[1:] < 0)]
    roots.extend(float(grid[i]) for i in np.flatnonzero(diff[:-1] == 0))
    roots = sorted(np.mod(roots, TWO_PI))
    if len(roots) > 1 and roots[0] + TWO_PI - roots[-1] < 1e-9:
        roots.pop()
    for root in roots:
        pa, pb = float(da(root)), float(db(root))
        where = float(np.mod(root, TWO_PI))
        if abs(pa - pb) < band:
            tangencies.append(where)
            continue
        over, under = (0, 1) if pa > pb else (1, 0)
        p_over, p_under = max(pa, pb), min(pa, pb)
        sign = int(np.sign(p_under - p_over))
        crossings.append(Crossing(where, float(a(root)), over, under, sign, abs(pa - pb)))
    # fronts touching without a sign change
    mag = np.abs(diff[:-1])
    dips = (mag < np.roll(mag, 1)) & (mag <= np.roll(mag, -1)) & (mag < band)
    signs = np.sign(diff[:-1])
    for i in np.flatnonzero(dips):
        if signs[i - 1] == signs[(i + 1) % samples] == signs[i]:
            tangencies.append(float(grid[i]))
    return crossings, tangencies


def front_diagram(curves: List[LegendrianCurve], tangency_band: Optional[float] = None) -> FrontDiagram:
    if not 1 <= len(curves) <= 2:
        raise ArgumentError(f"front diagrams take one or two components, got {len(curves)}")
    band = settings.tangency_band if tangency_band is None else tangency_band
    diagram = FrontDiagram(list(curves))
    for idx, curve in enumerate(curves):
        diagram.cusps.extend(_cusps(curve, idx))
        if curve.is_graph:
            diagram.traces.append(front_trace(curve))
            continue
        diagram.traces.append(None)
        crossings, tangencies = _self_crossings(curve, idx, band)
        diagram.crossings.extend(crossings)
        diagram.tangencies.extend(tangencies)

    if len(curves) == 2:
        a, b = diagram.traces
        if a is None or b is None:
            raise FrontError("inter-component crossings are computed for graph fronts only")
        samples = OVERSAMPLE * max(c.n for c in curves)
        crossings, tangencies = _graph_crossings(a, b, samples, band)
        diagram.crossings.extend(crossings)
        diagram.tangencies.extend(tangencies)
        if not tangencies and len(crossings) % 2:
            raise UnderResolvedFrontError(
                f"odd inter-component crossing count {len(crossings)}", phi=crossings[0].phi
            )
    LOG.debug(
        "front diagram: %d crossings, %d cusps, %d tangencies",
        len(diagram.crossings),
        len(diagram.cusps),
        len(diagram.tangencies),
    )
    return diagram


def _invariants(diagram: FrontDiagram, component: int) -> ComponentInvariants:
    down, up = diagram.cusp_counts(component)
    if (down - up) % 2:
        raise FrontError(f"component {component} has an odd cusp count ({down} down, {up} up)")
    curve = diagram.curves[component]
    return ComponentInvariants((down - up) // 2, diagram.writhe(component) - (down + up) // 2, curve.winding)


def _require_generic(diagram: FrontDiagram) -> None:
    if diagram.tangencies:
        phi = diagram.tangencies[0]
        raise TangencyError(f"non-generic front: tangency at φ={phi:.9f}", phi=phi)


def classical_invariants(curve: LegendrianCurve) -> ComponentInvariants:
    diagram = front_diagram([curve])
    _require_generic(diagram)
    return _invariants(diagram, 0)


def _coincide(a: LegendrianCurve, b: LegendrianCurve) -> bool:
    if a.n != b.n:
        return False
    spread = max(
        float(np.max(np.abs(np.mod(a.phi - b.phi + np.pi, TWO_PI) - np.pi))),
        float(np.max(np.abs(a.p - b.p))),
        float(np.max(np.abs(a.u - b.u))),
    )
    return spread < 1e-12


def link_signature(
    a: LegendrianCurve,
    b: LegendrianCurve,
    tangency_band: Optional[float] = None,
) -> Tuple[LinkSignature, FrontDiagram]:
    """Signature of the ordered two-component link (a, b) with the diagram it was read from."""
    if _coincide(a, b):
        raise ArgumentError("link components must be disjoint")
    diagram = front_diagram([a, b], tangency_band)
    _require_generic(diagram)
    count = len(diagram.inter_crossings())
    order = 0
    if count == 0:
        ta, tb = diagram.traces
        order = int(np.sign(float(ta(0.0) - tb(0.0))))
    signature = LinkSignature((_invariants(diagram, 0), _invariants(diagram, 1)), count, order)
    return signature, diagram
