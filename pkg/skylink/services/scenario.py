"""Scenario files: one strict JSON object per run."""

import dataclasses
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from skylink.config import settings
from skylink.errors import ConfigError, SkylinkError
from skylink.geometry.metrics import Event, MetricKind, SpacetimeMetric
from skylink.skies.sky import MIN_FAN, CauchySlice
from skylink.utils.json_utils import load_json_object, optional, reject_unknown_keys, require

TOP_LEVEL = ("metric", "slice", "pairs", "generator", "fan", "tolerances", "experiment")

EXPERIMENT_KEYS: Dict[str, Dict[str, type]] = {
    "link-verdict": {},
    "isotopy-check": {"steps": int, "span": list, "constant_families": int},
    "c-minus-sweep": {"families": list, "steps": int, "random_count": int, "n_q": int},
    "refocus-demo": {"steps": int, "pole": list},
}

SWEEP_FAMILIES = (
    "shifted-cosine",
    "flattening-cosine",
    "zero-section",
    "random-nonneg",
    "graph-oracle",
    "q0-independence",
    "ordering",
)


@dataclass(frozen=True)
class GeneratorSpec:
    count: int
    bounds: Tuple[float, float]
    seed: int = 0


@dataclass(frozen=True)
class Tolerances:
    null_band: float = settings.null_band
    marginal_band: float = settings.marginal_band
    tangency_band: float = settings.tangency_band
    nonneg_tol: float = settings.nonneg_tol
    residual_max: float = settings.residual_max


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def get(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)


@dataclass
class Scenario:
    name: str
    metric: SpacetimeMetric
    slice_level: float
    experiment: ExperimentSpec
    fan: int = settings.fan
    tolerances: Tolerances = field(default_factory=Tolerances)
    pairs: Optional[List[Tuple[Event, Event]]] = None
    generator: Optional[GeneratorSpec] = None
    seed_override: Optional[int] = None

    @property
    def seed(self) -> int:
        if self.seed_override is not None:
            return self.seed_override
        return self.generator.seed if self.generator else 0

    @property
    def cauchy(self) -> CauchySlice:
        return CauchySlice(self.metric, self.slice_level)

    def with_overrides(self, seed: Optional[int] = None, fan: Optional[int] = None) -> "Scenario":
        out = self
        if seed is not None:
            out = dataclasses.replace(out, seed_override=seed)
        if fan is not None:
            if fan < MIN_FAN:
                raise ConfigError(f"--fan must be at least {MIN_FAN}, got {fan}")
            out = dataclasses.replace(out, fan=fan)
        return out


def _metric(obj: Any) -> SpacetimeMetric:
    if not isinstance(obj, dict):
        raise ConfigError("metric: expected an object")
    kind = require(obj, "kind", "metric", str)
    try:
        kind = MetricKind(kind)
    except ValueError:
        raise ConfigError(f"metric.kind: unknown metric '{kind}' (expected one of {[k.value for k in MetricKind]})")
    allowed = ["kind", "dim"]
    if kind == MetricKind.PRODUCT_RIEMANNIAN:
        allowed += ["amplitude", "width"]
    reject_unknown_keys(obj, allowed, "metric")
    dim = optional(obj, "dim", "metric", int, 2)
    try:
        if kind == MetricKind.MINKOWSKI:
            return SpacetimeMetric.minkowski(dim)
        if kind == MetricKind.ROUND_SPHERE_PRODUCT:
            return SpacetimeMetric.round_sphere(dim)
        return SpacetimeMetric.conformal_product(
            dim,
            float(optional(obj, "amplitude", "metric", float, 0.2)),
            float(optional(obj, "width", "metric", float, 1.0)),
        )
    except SkylinkError as e:
        raise ConfigError(f"metric: {e}") from e


def _slice(obj: Any) -> float:
    if isinstance(obj, dict):
        reject_unknown_keys(obj, ["level"], "slice")
        return float(require(obj, "level", "slice", float))
    raise ConfigError("slice: expected an object with a 'level'")


def _event(metric: SpacetimeMetric, value: Any, path: str) -> Event:
    if not isinstance(value, list) or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value):
        raise ConfigError(f"{path}: expected a list of numbers")
    try:
        metric.check_domain(value)
    except SkylinkError as e:
        raise ConfigError(f"{path}: {e}") from e
    return Event(value)


def _pairs(metric: SpacetimeMetric, value: Any) -> List[Tuple[Event, Event]]:
    if not isinstance(value, list) or not value:
        raise ConfigError("pairs: expected a non-empty list")
    out = []
    for i, item in enumerate(value):
        path = f"pairs[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(f"{path}: expected an object with 'x' and 'y'")
        reject_unknown_keys(item, ["x", "y"], path)
        out.append((_event(metric, require(item, "x", path), f"{path}.x"), _event(metric, require(item, "y", path), f"{path}.y")))
    return out


def _generator(obj: Any) -> GeneratorSpec:
    if not isinstance(obj, dict):
        raise ConfigError("generator: expected an object")
    reject_unknown_keys(obj, ["count", "bounds", "seed"], "generator")
    count = require(obj, "count", "generator", int)
    bounds = require(obj, "bounds", "generator", list)
    seed = optional(obj, "seed", "generator", int, 0)
    if count < 1:
        raise ConfigError("generator.count: must be positive")
    if len(bounds) != 2 or not all(isinstance(b, (int, float)) for b in bounds) or bounds[0] >= bounds[1]:
        raise ConfigError("generator.bounds: expected [low, high] with low < high")
    if seed < 0:
        raise ConfigError("generator.seed: must be a non-negative integer")
    return GeneratorSpec(count, (float(bounds[0]), float(bounds[1])), seed)


def _tolerances(obj: Any) -> Tolerances:
    if not isinstance(obj, dict):
        raise ConfigError("tolerances: expected an object")
    names = [f.name for f in dataclasses.fields(Tolerances)]
    reject_unknown_keys(obj, names, "tolerances")
    values = {}
    for name in names:
        value = optional(obj, name, "tolerances", float, getattr(Tolerances(), name))
        if value <= 0:
            raise ConfigError(f"tolerances.{name}: must be positive")
        values[name] = float(value)
    if values["marginal_band"] < values["null_band"]:
        raise ConfigError("tolerances.marginal_band: must not be smaller than null_band")
    return Tolerances(**values)


def _experiment(value: Any) -> ExperimentSpec:
    if isinstance(value, str):
        value = {"kind": value}
    if not isinstance(value, dict):
        raise ConfigError("experiment: expected a kind string or an object")
    kind = require(value, "kind", "experiment", str)
    if kind not in EXPERIMENT_KEYS:
        raise ConfigError(f"experiment.kind: unknown experiment '{kind}' (expected one of {list(EXPERIMENT_KEYS)})")
    schema = EXPERIMENT_KEYS[kind]
    reject_unknown_keys(value, ["kind", *schema], "experiment")
    params = {key: optional(value, key, "experiment", kind_, None) for key, kind_ in schema.items() if key in value}
    for name in params.get("families", []):
        if name not in SWEEP_FAMILIES:
            raise ConfigError(f"experiment.families: unknown family '{name}'")
    if "steps" in params and params["steps"] < 8:
        raise ConfigError("experiment.steps: must be at least 8")
    return ExperimentSpec(kind, params)


def parse_scenario(obj: Dict[str, Any], name: str = "scenario") -> Scenario:
    reject_unknown_keys(obj, TOP_LEVEL, name)
    metric = _metric(require(obj, "metric", name))
    experiment = _experiment(require(obj, "experiment", name))
    level = _slice(obj["slice"]) if "slice" in obj else 0.0
    if "pairs" in obj and "generator" in obj and experiment.kind == "link-verdict":
        raise ConfigError(f"{name}: give either 'pairs' or 'generator', not both")
    pairs = _pairs(metric, obj["pairs"]) if "pairs" in obj else None
    generator = _generator(obj["generator"]) if "generator" in obj else None
    if experiment.kind in ("link-verdict", "isotopy-check") and pairs is None and generator is None:
        raise ConfigError(f"{name}: experiment '{experiment.kind}' needs 'pairs' or 'generator'")
    fan = optional(obj, "fan", name, int, settings.fan)
    if fan < MIN_FAN:
        raise ConfigError(f"{name}.fan: must be at least {MIN_FAN}, got {fan}")
    tolerances = _tolerances(obj["tolerances"]) if "tolerances" in obj else Tolerances()
    return Scenario(name, metric, level, experiment, fan, tolerances, pairs, generator)


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_scenario(load_json_object(text, path), name)
