"""One runner per experiment kind; the pipeline picks the runner and writes its outcome."""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from skylink.causality.distance import distance_report, riemannian_distance
from skylink.causality.oracle import Relation, same_null_geodesic, verdict_from_distance
from skylink.config import settings
from skylink.contact.fronts import FrontDiagram, link_signature
from skylink.contact.isotopy import cotangent_nonneg_check, fibre_rigidity_check, nonneg_isotopy_check
from skylink.contact.legendrian import sky_to_legendrian
from skylink.contact.links import LinkVerdict, unlink_verdict
from skylink.errors import (
    CapabilityError,
    FrontError,
    IntegrityError,
    NumericalError,
    TangencyError,
    UnderResolvedFrontError,
)
from skylink.genfun.family import TWO_PI, GenFamily, TrigPolynomial, critical_points, genfun_for_front
from skylink.genfun.filtration import c_minus
from skylink.genfun.monotonicity import monotonicity_harness, ordering_check
from skylink.geometry.metrics import Event, MetricKind, SpacetimeMetric
from skylink.services.scenario import SWEEP_FAMILIES, Scenario, Tolerances
from skylink.skies.family import sky_family_along_curve, wavefront_nesting
from skylink.skies.sky import CauchySlice, build_sky
from skylink.utils.log import get_logger

LOG = get_logger(__name__)

REVERSAL_MARGIN = 1e-3
DENSE = 100_000


@dataclass
class ExperimentOutcome:
    rows: List[Dict[str, Any]]
    # check name -> (passed, total)
    checks: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    diagrams: List[Tuple[str, FrontDiagram]] = field(default_factory=list)
    excluded: int = 0

    def tally(self, name: str, ok: bool) -> None:
        passed, total = self.checks.get(name, (0, 0))
        self.checks[name] = (passed + int(bool(ok)), total + 1)

    @property
    def failures(self) -> int:
        return sum(total - passed for passed, total in self.checks.values())


def _fmt(event: Event) -> str:
    return " ".join(f"{c:.6f}" for c in event.coords)


def _dense_min(f: TrigPolynomial) -> float:
    return float(np.min(f(TWO_PI * np.arange(DENSE) / DENSE)))


# link verdicts ---------------------------------------------------------------


@dataclass
class VerdictRow:
    index: int
    x: str
    y: str
    relation: str
    margin: float
    order: Optional[int] = None
    intersecting: Optional[bool] = None
    crossings: Optional[int] = None
    vertical_order: Optional[int] = None
    reversed_order: Optional[int] = None
    order_flips: Optional[bool] = None
    rotation_x: Optional[int] = None
    tb_x: Optional[int] = None
    rotation_y: Optional[int] = None
    tb_y: Optional[int] = None
    verdict: str = ""
    agreement: Optional[bool] = None
    distance_gap: Optional[float] = None
    fan: Optional[int] = None
    note: str = ""


@dataclass
class PairTask:
    index: int
    metric: SpacetimeMetric
    level: float
    x: Event
    y: Event
    fan: int
    fan_max: int
    tolerances: Tolerances
    keep_diagram: bool = False


def _pair_signatures(task: PairTask, fan: int):
    cauchy = CauchySlice(task.metric, task.level)
    limit = task.tolerances.residual_max
    cx = sky_to_legendrian(build_sky(task.metric, cauchy, task.x, fan), 0, residual_max=limit)
    cy = sky_to_legendrian(build_sky(task.metric, cauchy, task.y, fan), 1, residual_max=limit)
    forward, diagram = link_signature(cx, cy, task.tolerances.tangency_band)
    backward, _ = link_signature(cy, cx, task.tolerances.tangency_band)
    return forward, backward, diagram


def _attempts(fan: int, fan_max: int) -> int:
    return 1 + max(0, int(math.floor(math.log2(fan_max / fan)))) if fan_max > fan else 1


def evaluate_pair(task: PairTask) -> Tuple[VerdictRow, Optional[FrontDiagram]]:
    metric, tol = task.metric, task.tolerances
    gap = None
    try:
        if metric.kind == MetricKind.PRODUCT_RIEMANNIAN:
            report = distance_report(metric, task.x.spatial, task.y.spatial)
            distance, gap = report.shooting, report.relative_gap
        else:
            distance = riemannian_distance(metric, task.x.spatial, task.y.spatial)
    except NumericalError as e:
        LOG.warning("pair %d: no distance (%s); grid bound %s", task.index, e, e.best_bound)
        row = VerdictRow(task.index, _fmt(task.x), _fmt(task.y), Relation.MARGINAL.value, float("nan"))
        row.note = f"distance unavailable: {e}"
        return row, None
    verdict = verdict_from_distance(task.y.t - task.x.t, distance, tol.null_band, tol.marginal_band)
    row = VerdictRow(task.index, _fmt(task.x), _fmt(task.y), verdict.relation.value, verdict.margin, verdict.order)
    row.distance_gap = gap
    if verdict.relation == Relation.NULL:
        row.intersecting = same_null_geodesic(metric, task.x, task.y, task.fan)
        row.note = "intersecting skies" if row.intersecting else "null boundary"
    if verdict.excluded:
        return row, None

    retrying = Retrying(
        stop=stop_after_attempt(_attempts(task.fan, task.fan_max)),
        retry=retry_if_exception_type((UnderResolvedFrontError, TangencyError)),
        reraise=True,
    )
    try:
        for attempt in retrying:
            with attempt:
                fan = task.fan * 2 ** (attempt.retry_state.attempt_number - 1)
                if fan != task.fan:
                    LOG.debug("pair %d: refining fan to %d", task.index, fan)
                forward, backward, diagram = _pair_signatures(task, fan)
    except FrontError as e:
        row.relation = Relation.MARGINAL.value
        row.note = f"front not generic up to fan {task.fan_max}: {e}"
        return row, None
    except IntegrityError as e:
        LOG.warning("pair %d: %s", task.index, e)
        row.relation = Relation.MARGINAL.value
        row.note = f"sky failed the Legendrian check: {e}"
        return row, None

    linked = unlink_verdict(forward) == LinkVerdict.LINKED
    row.crossings = forward.crossing_count
    row.vertical_order = forward.vertical_order
    row.reversed_order = backward.vertical_order
    row.order_flips = forward.vertical_order != 0 and forward.vertical_order == -backward.vertical_order
    row.rotation_x, row.tb_x = forward.components[0].rotation, forward.components[0].tb
    row.rotation_y, row.tb_y = forward.components[1].rotation, forward.components[1].tb
    row.verdict = (LinkVerdict.LINKED if linked else LinkVerdict.TRIVIAL_CLASS).value
    row.agreement = verdict.causal == linked
    row.fan = fan
    return row, diagram if task.keep_diagram else None


def _random_pairs(scenario: Scenario, rng: np.random.Generator) -> List[Tuple[Event, Event]]:
    gen = scenario.generator
    lo, hi = gen.bounds
    n = scenario.metric.chart_dim
    if scenario.metric.is_sphere:
        spatial = rng.normal(size=(gen.count, 2, n - 1))
        spatial /= np.linalg.norm(spatial, axis=2, keepdims=True)
        times = rng.uniform(lo, hi, size=(gen.count, 2, 1))
        coords = np.concatenate([spatial, times], axis=2)
    else:
        coords = rng.uniform(lo, hi, size=(gen.count, 2, n))
    return [(Event(a), Event(b)) for a, b in coords]


def _map(func: Callable, tasks: List[Any]) -> List[Any]:
    if settings.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * settings.workers))))
    return [func(t) for t in tasks]


def run_link_verdict(scenario: Scenario, rng: np.random.Generator) -> ExperimentOutcome:
    pairs = scenario.pairs if scenario.pairs is not None else _random_pairs(scenario, rng)
    tasks = [
        PairTask(i, scenario.metric, scenario.slice_level, x, y, scenario.fan, settings.fan_max,
                 scenario.tolerances, keep_diagram=i < settings.svg_limit)
        for i, (x, y) in enumerate(pairs)
    ]
    LOG.info("Evaluating %d event pairs (fan %d, workers %d)", len(tasks), scenario.fan, settings.workers)
    results = _map(evaluate_pair, tasks)
    outcome = ExperimentOutcome([])
    for row, diagram in results:
        outcome.rows.append(asdict(row))
        if row.agreement is None:
            outcome.excluded += 1
            continue
        outcome.tally("oracle_signature_agreement", row.agreement)
        expected = 0 if row.relation == Relation.CHRONOLOGICAL.value else 2
        outcome.tally("crossing_count", row.crossings == expected)
        if row.relation == Relation.CHRONOLOGICAL.value:
            outcome.tally("order_reversal", row.order_flips)
        if row.distance_gap is not None:
            outcome.tally("distance_methods_agree", row.distance_gap <= 0.02)
        if diagram is not None:
            outcome.diagrams.append((f"pair-{row.index:04d}-{row.relation}", diagram))
    return outcome


# isotopy checks --------------------------------------------------------------


def _timelike_curve(
    rng: np.random.Generator, level: float, bounds: Tuple[float, float], span: Tuple[float, float], on_slice: bool
) -> Callable[[float], Event]:
    """Past-directed curve whose spatial speed stays below 0.82 of the time rate."""
    start = rng.uniform(bounds[0], bounds[1], 2)
    t0 = level if on_slice else level + rng.uniform(*span)
    duration = rng.uniform(*span)
    heading = rng.uniform(0.0, TWO_PI, 2)
    drift = rng.uniform(0.0, 0.5) * np.array([math.cos(heading[0]), math.sin(heading[0])])
    wobble = rng.uniform(0.0, 0.1) * np.array([math.cos(heading[1]), math.sin(heading[1])])

    def curve(tau: float) -> Event:
        spatial = start + duration * (tau * drift + wobble * math.sin(math.pi * tau))
        return Event.at(spatial, t0 - duration * tau)

    return curve


def run_isotopy_check(scenario: Scenario, rng: np.random.Generator) -> ExperimentOutcome:
    metric = scenario.metric
    if metric.is_sphere:
        raise CapabilityError("isotopy-check samples planar timelike curves; use refocus-demo on spheres")
    exp = scenario.experiment
    steps = exp.get("steps", 10)
    span = tuple(exp.get("span", [0.5, 3.0]))
    constant = exp.get("constant_families", 2)
    cauchy = scenario.cauchy
    count = scenario.generator.count if scenario.generator else len(scenario.pairs)
    tol = scenario.tolerances.nonneg_tol
    outcome = ExperimentOutcome([])

    curves = []
    if scenario.pairs is not None:
        for a, b in scenario.pairs:
            late, early = (a, b) if a.t >= b.t else (b, a)
            curves.append(("timelike", lambda tau, l=late, e=early: Event(l.coords + tau * (e.coords - l.coords))))
    else:
        bounds = scenario.generator.bounds
        for i in range(count):
            curves.append(("timelike", _timelike_curve(rng, cauchy.level, bounds, span, on_slice=i % 2 == 0)))
    for j in range(constant):
        point = Event.at(rng.uniform(-1.0, 1.0, 2), cauchy.level + (0.0 if j % 2 == 0 else 1.0))
        curves.append(("constant", lambda tau, e=point: e))

    LOG.info("Checking %d sky families over %d steps", len(curves), steps)
    for index, (kind, curve) in enumerate(curves):
        family = sky_family_along_curve(metric, cauchy, curve, scenario.fan, steps)
        forward = nonneg_isotopy_check(family, tol)
        backward = nonneg_isotopy_check(family.reversed(), tol)
        rigidity = fibre_rigidity_check(family)
        first, last = family.skies[0], family.skies[-1]
        differ = float(np.max(np.linalg.norm(last.bases - first.bases, axis=1))) > 1e-6
        reversal_ok = (not differ) or backward.min_alpha <= -REVERSAL_MARGIN
        nesting = None
        if kind == "timelike" and cauchy.contains(family.events[0]):
            nesting = wavefront_nesting(family)
        outcome.rows.append(
            {
                "index": index,
                "kind": kind,
                "start": _fmt(family.events[0]),
                "end": _fmt(family.events[-1]),
                "min_alpha": forward.min_alpha,
                "nonnegative": forward.passed,
                "reversed_min_alpha": backward.min_alpha,
                "endpoints_differ": differ,
                "starts_at_fibre": rigidity.starts_at_fibre,
                "ends_at_fibre": rigidity.ends_at_fibre,
                "rigidity_holds": rigidity.holds,
                "nested": None if nesting is None else nesting.nested,
                "min_gap": None if nesting is None else nesting.min_gap,
                "max_step": family.max_step,
            }
        )
        outcome.tally("nonnegative", forward.passed)
        outcome.tally("reversal_negative", reversal_ok)
        outcome.tally("fibre_rigidity", rigidity.holds)
        if nesting is not None:
            outcome.tally("wavefronts_nested", nesting.nested)
    return outcome


# generating functions --------------------------------------------------------


def _nonneg_increment(rng: np.random.Generator) -> TrigPolynomial:
    g = TrigPolynomial.random(rng, 3, 1.0)
    return g.shifted(0.1 - _dense_min(g))


def run_c_minus_sweep(scenario: Scenario, rng: np.random.Generator) -> ExperimentOutcome:
    exp = scenario.experiment
    families = exp.get("families", list(SWEEP_FAMILIES))
    steps = exp.get("steps", 10)
    n_q = exp.get("n_q")
    oracle_count = scenario.generator.count if scenario.generator else 20
    bound = scenario.generator.bounds[1] if scenario.generator else 2.0
    outcome = ExperimentOutcome([])

    def record(family: str, member: int, t: float, kappa: int, value: float, ref: float, step: float,
               ok: Optional[bool], note: str = ""):
        outcome.rows.append(
            {"family": family, "member": member, "t": t, "kappa": kappa, "c_minus": value,
             "reference": ref, "value_step": step, "ok": ok, "note": note}
        )
        if ok is None:
            outcome.excluded += 1
        else:
            outcome.tally(family, ok)

    def sweep(name: str, member: int, path: Callable[[float], GenFamily], reference: Callable[[float], float]):
        report = monotonicity_harness(path, steps, n_q)
        for t, res in zip(report.times, report.results):
            ref = reference(float(t))
            note = "critical set unresolved" if float(t) in report.unresolved else ""
            record(name, member, float(t), res.kappa, res.c_minus, ref, res.value_step,
                   abs(res.c_minus - ref) <= 2.0 * res.value_step + 1e-12, note)
        outcome.tally(f"{name}:nondecreasing", report.nondecreasing)

    cosine = TrigPolynomial((0.0, 1.0))
    if "shifted-cosine" in families:
        sweep("shifted-cosine", 0, lambda t: genfun_for_front(cosine.shifted(t)), lambda t: -1.0 + t)
    if "flattening-cosine" in families:
        sweep("flattening-cosine", 0, lambda t: genfun_for_front(cosine.scaled(1.0 - t)), lambda t: -(1.0 - t))
    if "zero-section" in families:
        sweep("zero-section", 0, lambda t: genfun_for_front(TrigPolynomial.constant(0.0)), lambda t: 0.0)
    if "random-nonneg" in families:
        for member in range(exp.get("random_count", 10)):
            f0 = TrigPolynomial.random(rng, 3, 1.0)
            g = _nonneg_increment(rng)
            radius = 2.0 * math.sqrt(f0.sup_bound() + g.sup_bound() + 1.0)
            sweep("random-nonneg", member,
                  lambda t, f0=f0, g=g, r=radius: genfun_for_front(f0 + g.scaled(t), r),
                  lambda t, f0=f0, g=g: _dense_min(f0 + g.scaled(t)))

    oracle = [TrigPolynomial.random(rng, 5, bound) for _ in range(oracle_count)]
    if "graph-oracle" in families:
        for member, f in enumerate(oracle):
            ref = _dense_min(f)
            try:
                crit = critical_points(GenFamily(f)).values
            except NumericalError as e:
                LOG.warning("critical points of oracle member %d: %s", member, e)
                for sigma in (1, -1):
                    res = c_minus(GenFamily(f, sigma), n_q)
                    record(f"graph-oracle-k{res.kappa}", member, 0.0, res.kappa, res.c_minus, ref, res.value_step,
                           None, f"critical points unresolved: {e}")
                continue
            for sigma in (1, -1):
                res = c_minus(GenFamily(f, sigma), n_q)
                near = bool(np.min(np.abs(crit - res.c_minus)) <= res.value_step + 1e-12)
                record(f"graph-oracle-k{res.kappa}", member, 0.0, res.kappa, res.c_minus, ref, res.value_step,
                       abs(res.c_minus - ref) <= 2.0 * res.value_step and near)
    if "q0-independence" in families:
        for member, f in enumerate(oracle[:3]):
            values = [c_minus(GenFamily(f, -1), n_q, q0=q0) for q0 in (0.0, 2.1, 4.2)]
            spread = max(v.c_minus for v in values) - min(v.c_minus for v in values)
            for q0, res in zip((0.0, 2.1, 4.2), values):
                record("q0-independence", member, q0, 1, res.c_minus, values[0].c_minus, res.value_step, spread <= 1e-12)
    if "ordering" in families:
        for member in range(exp.get("random_count", 10)):
            h = TrigPolynomial.random(rng, 3, 1.0)
            g = _nonneg_increment(rng)
            path = [h + g.scaled(t) for t in np.linspace(0.0, 1.0, steps + 1)]
            report = ordering_check(path, n_q)
            record("ordering", member, 1.0, 0, report.c_minus_end, _dense_min(g), 0.0, report.holds)
    return outcome


# refocussing -----------------------------------------------------------------


def run_refocus_demo(scenario: Scenario, rng: np.random.Generator) -> ExperimentOutcome:
    metric = scenario.metric
    if not metric.is_sphere:
        raise CapabilityError("refocus-demo needs the round-sphere product")
    exp = scenario.experiment
    pole = np.asarray(exp.get("pole", [0.0, 0.0, 1.0]), dtype=float)
    pole /= np.linalg.norm(pole)
    steps = exp.get("steps", 16)
    cauchy = scenario.cauchy
    outcome = ExperimentOutcome([])

    def record(check: str, value: float, threshold: float, ok: bool):
        outcome.rows.append({"check": check, "value": value, "threshold": threshold, "ok": bool(ok)})
        outcome.tally(check, ok)

    sky = build_sky(metric, cauchy, Event.at(pole, cauchy.level + math.pi), scenario.fan)
    deviation = float(np.max(np.linalg.norm(sky.bases + pole, axis=1)))
    record("antipodal_deviation", deviation, 1e-4, deviation < 1e-4)

    family = sky_family_along_curve(
        metric, cauchy, lambda t: Event.at(pole, cauchy.level + math.pi * (1.0 - t)), scenario.fan, steps
    )
    report = cotangent_nonneg_check(family, scenario.tolerances.nonneg_tol)
    record("refocus_family_min_alpha", report.min_alpha, -scenario.tolerances.nonneg_tol, report.passed)
    rigidity = fibre_rigidity_check(family)
    gap = float(np.linalg.norm(family.skies[-1].bases.mean(axis=0) - family.skies[0].bases.mean(axis=0)))
    record("distinct_fibre_endpoints", gap, 1.0, gap > 1.0)
    record("rigidity_fails_on_sphere", float(rigidity.applies and not rigidity.holds), 1.0,
           rigidity.applies and not rigidity.holds)
    hit = same_null_geodesic(metric, Event.at(pole, cauchy.level + math.pi), Event.at(-pole, cauchy.level), scenario.fan)
    record("antipode_on_every_null_geodesic", float(hit), 1.0, hit)
    return outcome


RUNNERS: Dict[str, Callable[[Scenario, np.random.Generator], ExperimentOutcome]] = {
    "link-verdict": run_link_verdict,
    "isotopy-check": run_isotopy_check,
    "c-minus-sweep": run_c_minus_sweep,
    "refocus-demo": run_refocus_demo,
}
