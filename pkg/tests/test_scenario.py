import glob
import json
import os

import pytest

from skylink.config import settings
from skylink.errors import ConfigError
from skylink.geometry.metrics import MetricKind
from skylink.services.scenario import load_scenario, parse_scenario
from skylink.utils.json_utils import load_json_object


def _base(**extra):
    obj = {
        "metric": {"kind": "minkowski"},
        "pairs": [{"x": [0.0, 0.0, 0.0], "y": [0.0, 0.0, 1.0]}],
        "fan": 64,
        "experiment": "link-verdict",
    }
    obj.update(extra)
    return obj


def test_parse_minimal_pairs_scenario():
    scenario = parse_scenario(_base(), "demo")
    assert scenario.name == "demo"
    assert scenario.metric.kind == MetricKind.MINKOWSKI
    assert scenario.slice_level == 0.0
    assert scenario.fan == 64
    assert scenario.seed == 0
    assert len(scenario.pairs) == 1
    assert scenario.tolerances.null_band == settings.null_band


def test_parse_conformal_generator_scenario():
    scenario = parse_scenario(
        {
            "metric": {"kind": "conformal", "amplitude": 0.3},
            "slice": {"level": 1.0},
            "generator": {"count": 5, "bounds": [-1, 1], "seed": 9},
            "tolerances": {"marginal_band": 1e-3},
            "experiment": {"kind": "link-verdict"},
        }
    )
    assert scenario.metric.conformal.amplitude == 0.3
    assert scenario.cauchy.level == 1.0
    assert scenario.seed == 9
    assert scenario.generator.bounds == (-1.0, 1.0)
    assert scenario.tolerances.marginal_band == 1e-3
    assert scenario.fan == settings.fan


@pytest.mark.parametrize(
    "change, message",
    [
        ({"colour": "red"}, "unknown key"),
        ({"metric": {"kind": "kerr"}}, "unknown metric"),
        ({"metric": {"kind": "minkowski", "amplitude": 0.1}}, "unknown key"),
        ({"fan": 32}, "at least 64"),
        ({"fan": 64.5}, "expected int"),
        ({"generator": {"count": 3, "bounds": [0, 1]}}, "not both"),
        ({"pairs": []}, "non-empty"),
        ({"pairs": [{"x": [0.0, 0.0], "y": [0.0, 0.0, 1.0]}]}, "pairs[0].x"),
        ({"tolerances": {"null_band": 1e-3, "marginal_band": 1e-6}}, "marginal_band"),
        ({"tolerances": {"null_band": -1.0}}, "must be positive"),
        ({"experiment": "teleport"}, "unknown experiment"),
        ({"experiment": {"kind": "c-minus-sweep", "families": ["spiral"]}}, "unknown family"),
        ({"experiment": {"kind": "isotopy-check", "steps": 4}}, "at least 8"),
    ],
)
def test_invalid_scenarios_are_rejected(change, message):
    with pytest.raises(ConfigError) as info:
        parse_scenario(_base(**change))
    assert message in str(info.value)


def test_link_verdict_needs_events():
    obj = _base()
    del obj["pairs"]
    with pytest.raises(ConfigError):
        parse_scenario(obj)


def test_sweeps_need_no_events():
    obj = _base(experiment={"kind": "c-minus-sweep", "families": ["zero-section"], "n_q": 64})
    del obj["pairs"]
    scenario = parse_scenario(obj)
    assert scenario.experiment.get("families") == ["zero-section"]
    assert scenario.experiment.get("steps", 10) == 10


def test_duplicate_keys_are_rejected():
    with pytest.raises(ConfigError) as info:
        load_json_object('{"fan": 64, "fan": 128}', "dup.json")
    assert "duplicate key 'fan'" in str(info.value)


def test_malformed_json_reports_position():
    with pytest.raises(ConfigError) as info:
        load_json_object('{"fan": 64,\n  }', "bad.json")
    assert str(info.value).startswith("bad.json:2:")
    with pytest.raises(ConfigError):
        load_json_object("[1, 2]")


def test_overrides():
    scenario = parse_scenario(_base(generator={"count": 2, "bounds": [0, 1], "seed": 4}, experiment="isotopy-check"))
    assert scenario.with_overrides(seed=11).seed == 11
    assert scenario.with_overrides(fan=128).fan == 128
    assert scenario.with_overrides().seed == 4
    with pytest.raises(ConfigError):
        scenario.with_overrides(fan=16)


def test_load_scenario_names_it_after_the_file(tmp_path):
    path = tmp_path / "tiny_run.json"
    path.write_text(json.dumps(_base()), encoding="utf-8")
    assert load_scenario(str(path)).name == "tiny_run"


def test_shipped_scenarios_parse():
    paths = sorted(glob.glob(os.path.join(settings.scenario_dir, "*.json")))
    assert len(paths) == 5
    kinds = {load_scenario(p).experiment.kind for p in paths}
    assert kinds == {"link-verdict", "isotopy-check", "c-minus-sweep", "refocus-demo"}
