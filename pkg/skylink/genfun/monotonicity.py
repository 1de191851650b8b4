from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from skylink.errors import NumericalError
from skylink.genfun.family import TWO_PI, GenFamily, TrigPolynomial, critical_points, genfun_for_front
from skylink.genfun.filtration import CriticalValueResult, c_minus
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

HYPOTHESIS_TOL = 1e-9
PATH_GRID = 4096

FamilyPath = Union[Callable[[float], GenFamily], Sequence[GenFamily]]


@dataclass
class MonotonicityReport:
    times: np.ndarray
    values: np.ndarray
    tolerance: float
    nondecreasing: bool
    # ∂S_t/∂t ≥ 0 at every critical point of every S_t
    hypothesis_holds: bool
    results: List[CriticalValueResult]
    # start times of steps whose critical set could not be resolved
    unresolved: Tuple[float, ...] = ()

    @property
    def consistent(self) -> bool:
        return self.nondecreasing or not self.hypothesis_holds


def _members(family: FamilyPath, steps: int):
    if callable(family):
        times = np.linspace(0.0, 1.0, steps + 1)
        return times, [family(float(t)) for t in times]
    members = list(family)
    return np.linspace(0.0, 1.0, len(members)), members


def _time_derivative_on_critical_set(a: GenFamily, b: GenFamily, dt: float) -> Optional[float]:
    try:
        crit = critical_points(a)
    except NumericalError as e:
        LOG.warning("critical set unresolved, step left out of the hypothesis: %s", e)
        return None
    if crit.degenerate:
        q = TWO_PI * np.arange(PATH_GRID) / PATH_GRID
        xi = np.zeros_like(q)
    else:
        q = np.array([c.q for c in crit.points])
        xi = np.array([c.xi for c in crit.points])
    return float(np.min((b.value(q, xi) - a.value(q, xi)) / dt))


def monotonicity_harness(
    family: FamilyPath,
    steps: int = 10,
    n_q: Optional[int] = None,
) -> MonotonicityReport:
    """c₋ along a discretised family and whether it is nondecreasing within 2 value steps."""
    times, members = _members(family, steps)
    results = [c_minus(s, n_q) for s in members]
    values = np.array([r.c_minus for r in results])
    tolerance = 2.0 * max(r.value_step for r in results)
    nondecreasing = bool(np.all(np.diff(values) >= -tolerance))
    rates = [
        _time_derivative_on_critical_set(a, b, t1 - t0)
        for a, b, t0, t1 in zip(members, members[1:], times, times[1:])
    ]
    unresolved = tuple(float(t) for t, r in zip(times, rates) if r is None)
    resolved = [r for r in rates if r is not None]
    hypothesis = bool(min(resolved, default=0.0) >= -HYPOTHESIS_TOL)
    report = MonotonicityReport(times, values, tolerance, nondecreasing, hypothesis, results, unresolved)
    if not report.consistent:
        LOG.error("c_minus decreased along a family whose time derivative is nonnegative on the critical set")
    return report


def graph_path_nonnegative(path: Sequence[TrigPolynomial], tol: float = 1e-12) -> bool:
    """∂f_t/∂t ≥ 0 on the sampled circle for a discrete path of graph fronts."""
    q = TWO_PI * np.arange(PATH_GRID) / PATH_GRID
    return all(bool(np.all(b(q) - a(q) >= -tol)) for a, b in zip(path, path[1:]))


@dataclass(frozen=True)
class OrderingReport:
    path_nonnegative: bool
    c_minus_start: float
    c_minus_end: float
    min_gap: float
    tolerance: float

    @property
    def holds(self) -> bool:
        """A nonnegative path from Λ^h to Λ^f forces h ≤ f."""
        return not self.path_nonnegative or self.min_gap >= -self.tolerance


def ordering_check(path: Sequence[TrigPolynomial], n_q: Optional[int] = None) -> OrderingReport:
    """Downshift the path by its start h and read min(f − h) off c₋ of the end."""
    h = path[0]
    shifted = [genfun_for_front(f - h) for f in path]
    start, end = c_minus(shifted[0], n_q), c_minus(shifted[-1], n_q)
    tolerance = 2.0 * max(start.value_step, end.value_step)
    return OrderingReport(graph_path_nonnegative(path), start.c_minus, end.c_minus, end.c_minus, tolerance)
