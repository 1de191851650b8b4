"""Sublevel filtrations of S on a cubical grid of S¹ × [−R, R] and the selector c₋.

Cells carry the maximum of S over their corners, so the sublevel complex at c
is spanned by the vertices with S ≤ c and the edges between them. With ℤ/2
coefficients the selector reduces to connectivity:

* κ = 0: [V] is the class of a point and S^{−∞} is empty, so c₋ is the value
  of the first vertex entering the filtration (min S on the grid);
* κ = 1: [V] is the fibre segment {q₀} × [−R, R] relative to the two bands
  forming S^{−∞}; it lies in the image of H₁(S^c, S^{−∞}) exactly when its two
  ends are joined inside S^c, found by inserting edges in value order into a
  union-find structure.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from networkx.utils import UnionFind
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order, connected_components

from skylink.config import settings
from skylink.errors import ArgumentError, ChartDomainError
from skylink.genfun.family import TWO_PI, GenFamily
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

START_Q = 256


@dataclass
class FiltrationComplex:
    family: GenFamily
    q: np.ndarray
    xi: np.ndarray
    values: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return self.values.shape

    @property
    def middle(self) -> int:
        return self.xi.size // 2

    @property
    def c_low(self) -> Optional[float]:
        """Threshold of S^{−∞}: between the boundary values and every critical value."""
        if self.family.kappa == 0:
            return None
        return -self.family.radius ** 2 / 2.0

    @property
    def lower(self) -> np.ndarray:
        if self.c_low is None:
            return np.zeros(self.values.shape, dtype=bool)
        return self.values <= self.c_low

    @property
    def value_step(self) -> float:
        row = self.values[:, self.middle]
        return float(np.max(np.abs(np.roll(row, -1) - row)))

    def vertex(self, i: int, j: int) -> int:
        return (i % self.q.size) * self.xi.size + j

    def edges(self):
        """Endpoints and filtration values of every grid edge (periodic in q)."""
        n_q, n_xi = self.values.shape
        index = np.arange(n_q * n_xi).reshape(n_q, n_xi)
        u = np.concatenate([index.ravel(), index[:, :-1].ravel()])
        v = np.concatenate([np.roll(index, -1, axis=0).ravel(), index[:, 1:].ravel()])
        flat = self.values.ravel()
        return u, v, np.maximum(flat[u], flat[v])

    def sublevel(self, c: float):
        """Vertex and edge masks of the sublevel complex at c."""
        u, v, w = self.edges()
        return self.values.ravel() <= c, w <= c

    def graph(self, mask: np.ndarray) -> sparse.csr_matrix:
        u, v, _ = self.edges()
        n = self.values.size
        ones = np.ones(int(mask.sum()))
        return sparse.csr_matrix((ones, (u[mask], v[mask])), shape=(n, n))


def _row_variation(family: GenFamily, n_q: int) -> float:
    row = family.f(TWO_PI * np.arange(n_q) / n_q)
    return float(np.max(np.abs(np.roll(row, -1) - row)))


def build_filtration(family: GenFamily, n_q: Optional[int] = None, n_xi: Optional[int] = None) -> FiltrationComplex:
    n_xi = settings.grid_xi if n_xi is None else n_xi
    if n_xi < 5:
        raise ArgumentError(f"need at least 5 ξ rows, got {n_xi}")
    n_xi += 1 - n_xi % 2
    if n_q is None:
        n_q = START_Q
        while _row_variation(family, n_q) >= settings.cell_variation:
            if n_q >= settings.grid_q_max:
                LOG.warning("filtration grid capped at %d columns above the variation target", n_q)
                break
            n_q *= 2
    if n_q < 8:
        raise ArgumentError(f"need at least 8 q columns, got {n_q}")
    q = TWO_PI * np.arange(n_q) / n_q
    xi = np.linspace(-family.radius, family.radius, n_xi)
    values = family.value(q[:, None], xi[None, :])
    return FiltrationComplex(family, q, xi, values)


@dataclass
class CriticalValueResult:
    c_minus: float
    kappa: int
    q0: float
    grid: tuple
    value_step: float
    # grid indices (i, j) of the witness: one vertex (κ = 0) or a path whose edges form the relative cycle
    witness: np.ndarray
    complex: FiltrationComplex = field(repr=False)


def _check_dominance(cx: FiltrationComplex) -> None:
    boundary = cx.values[:, [0, -1]]
    middle = cx.values[:, cx.middle]
    if cx.family.kappa == 0:
        ok = boundary.min() > middle.max()
    else:
        ok = boundary.max() < cx.c_low < middle.min()
    if not ok:
        raise ChartDomainError(f"quadratic part not dominant at |ξ| = R = {cx.family.radius}")


def _first_vertex(cx: FiltrationComplex) -> int:
    n_q, n_xi = cx.shape
    ii, jj = np.divmod(np.arange(n_q * n_xi), n_xi)
    return int(np.lexsort((jj, ii, cx.values.ravel()))[0])


def _join_ends(cx: FiltrationComplex, bottom: int, top: int):
    """Edge-insertion value at which the two ends of the fibre meet, and the edge mask at that moment."""
    lower = cx.lower.ravel()
    u, v, w = cx.edges()
    low_edges = lower[u] & lower[v]
    _, labels = connected_components(cx.graph(low_edges), directed=False)
    n = lower.size
    rep = np.where(lower, n + labels, np.arange(n))
    if rep[bottom] == rep[top]:
        raise ChartDomainError("S^{-∞} connects both ends of the fibre; radius too small")

    rest = np.flatnonzero(~low_edges)
    ii, jj = np.divmod(np.minimum(u[rest], v[rest]), cx.xi.size)
    order = rest[np.lexsort((jj, ii, w[rest]))]
    uf = UnionFind()
    b, t = int(rep[bottom]), int(rep[top])
    for position, e in enumerate(order):
        uf.union(int(rep[u[e]]), int(rep[v[e]]))
        if uf[b] == uf[t]:
            inserted = low_edges.copy()
            inserted[order[: position + 1]] = True
            return float(w[e]), inserted
    raise ChartDomainError("fibre ends never join; the grid does not cover the critical set")


def _witness_path(cx: FiltrationComplex, mask: np.ndarray, bottom: int, top: int) -> np.ndarray:
    _, pred = breadth_first_order(cx.graph(mask), bottom, directed=False, return_predecessors=True)
    path = [top]
    while path[-1] != bottom:
        path.append(int(pred[path[-1]]))
    return np.stack(np.divmod(np.array(path[::-1]), cx.xi.size), axis=1)


def relative_boundary(cx: FiltrationComplex, path: np.ndarray) -> np.ndarray:
    """Vertices outside S^{−∞} with odd incidence in the chain of path edges not inside S^{−∞}."""
    lower = cx.lower.ravel()
    ids = np.array([cx.vertex(i, j) for i, j in path])
    a, b = ids[:-1], ids[1:]
    chain = ~(lower[a] & lower[b])
    counts = np.bincount(np.concatenate([a[chain], b[chain]]), minlength=lower.size) % 2
    return np.flatnonzero((counts == 1) & ~lower)


def fibre_pairing(cx: FiltrationComplex, path: np.ndarray) -> int:
    """Mod-2 count of chain edges crossing between the middle row and the one above it."""
    j = np.asarray(path)[:, 1]
    steps = np.stack([j[:-1], j[1:]], axis=1)
    crossings = np.sum(np.all(np.sort(steps, axis=1) == [cx.middle, cx.middle + 1], axis=1))
    return int(crossings % 2)


def c_minus(
    family: GenFamily,
    n_q: Optional[int] = None,
    q0: float = 0.0,
    n_xi: Optional[int] = None,
) -> CriticalValueResult:
    cx = build_filtration(family, n_q, n_xi)
    _check_dominance(cx)
    n_q, n_xi = cx.shape
    if family.kappa == 0:
        first = _first_vertex(cx)
        witness = np.array([divmod(first, n_xi)])
        value = float(cx.values.ravel()[first])
    else:
        column = int(round(np.mod(q0, TWO_PI) / TWO_PI * n_q)) % n_q
        bottom, top = cx.vertex(column, 0), cx.vertex(column, n_xi - 1)
        value, mask = _join_ends(cx, bottom, top)
        witness = _witness_path(cx, mask, bottom, top)
    LOG.debug("c_minus=%.9g (kappa=%d, grid %dx%d)", value, family.kappa, n_q, n_xi)
    return CriticalValueResult(value, family.kappa, q0, (n_q, n_xi), cx.value_step, witness, cx)
