import numpy as np
import pytest

from skylink.config import settings
from skylink.errors import CapabilityError, IntegrityError, NumericalError
from skylink.geometry.metrics import Event
from skylink.services.experiments import PairTask, _attempts, evaluate_pair, run_c_minus_sweep, run_isotopy_check, run_link_verdict, run_refocus_demo
from skylink.services.scenario import parse_scenario


def _task(minkowski, x, y, index=0, keep=False):
    scenario = parse_scenario(
        {"metric": {"kind": "minkowski"}, "pairs": [{"x": x, "y": y}], "fan": 64, "experiment": "link-verdict"}
    )
    return PairTask(index, minkowski, 0.0, Event(x), Event(y), 64, settings.fan_max, scenario.tolerances, keep)


def test_fan_refinement_attempts():
    assert _attempts(720, 5760) == 4
    assert _attempts(64, 64) == 1
    assert _attempts(64, 100) == 1


def test_chronological_pair_is_linked(minkowski):
    row, diagram = evaluate_pair(_task(minkowski, [0.0, 0.0, 0.0], [0.3, 0.1, 1.0], keep=True))
    assert row.relation == "chronological"
    assert row.order == 1
    assert row.crossings == 0
    assert row.verdict == "linked-signature"
    assert row.agreement
    assert row.order_flips
    assert row.fan == 64
    assert diagram is not None and diagram.crossings == []


def test_unrelated_pair_is_in_the_trivial_class(minkowski):
    row, diagram = evaluate_pair(_task(minkowski, [0.0, 0.0, 0.0], [1.0, 0.0, 0.5]))
    assert row.relation == "unrelated"
    assert row.crossings == 2
    assert row.verdict == "trivial-class-signature"
    assert row.agreement
    assert diagram is None


def test_null_pair_is_excluded(minkowski):
    row, diagram = evaluate_pair(_task(minkowski, [0.0, 0.0, 0.0], [1.0, 0.0, 1.0]))
    assert row.relation == "null"
    assert row.intersecting
    assert row.note == "intersecting skies"
    assert row.agreement is None and row.crossings is None
    assert diagram is None


def test_sky_failing_the_legendrian_check_is_marginal(minkowski, monkeypatch):
    def broken(sky, component=0, check=True, residual_max=None):
        raise IntegrityError(f"sky of {sky.event} has Legendrian residual 0.5 > 1e-06")

    monkeypatch.setattr("skylink.services.experiments.sky_to_legendrian", broken)
    row, diagram = evaluate_pair(_task(minkowski, [0.0, 0.0, 0.0], [0.3, 0.1, 1.0]))
    assert row.relation == "marginal"
    assert row.note.startswith("sky failed the Legendrian check")
    assert row.agreement is None and row.verdict == ""
    assert diagram is None


def _pairs_scenario(**extra):
    obj = {
        "metric": {"kind": "minkowski"},
        "pairs": [
            {"x": [0.0, 0.0, 0.0], "y": [0.3, 0.1, 1.0]},
            {"x": [0.0, 0.0, 0.0], "y": [1.0, 0.0, 0.5]},
            {"x": [0.0, 0.0, 0.0], "y": [1.0, 0.0, 1.0]},
        ],
        "fan": 64,
        "experiment": "link-verdict",
    }
    obj.update(extra)
    return parse_scenario(obj, "pairs")


def test_link_verdict_tallies(rng):
    outcome = run_link_verdict(_pairs_scenario(), rng)
    assert len(outcome.rows) == 3
    assert outcome.excluded == 1
    assert outcome.checks["oracle_signature_agreement"] == (2, 2)
    assert outcome.checks["crossing_count"] == (2, 2)
    assert outcome.checks["order_reversal"] == (1, 1)
    assert "distance_methods_agree" not in outcome.checks
    assert outcome.failures == 0
    assert [name for name, _ in outcome.diagrams] == ["pair-0000-chronological", "pair-0001-unrelated"]


def test_isotopy_check_passes_on_flat_curves():
    scenario = parse_scenario(
        {
            "metric": {"kind": "minkowski"},
            "generator": {"count": 2, "bounds": [-1, 1], "seed": 3},
            "fan": 64,
            "experiment": {"kind": "isotopy-check", "steps": 8},
        }
    )
    outcome = run_isotopy_check(scenario, np.random.default_rng(scenario.seed))
    assert len(outcome.rows) == 4
    assert [r["kind"] for r in outcome.rows] == ["timelike", "timelike", "constant", "constant"]
    assert outcome.checks["nonnegative"] == (4, 4)
    assert outcome.checks["fibre_rigidity"] == (4, 4)
    assert outcome.checks["wavefronts_nested"] == (1, 1)
    assert outcome.failures == 0
    assert outcome.rows[2]["starts_at_fibre"] and outcome.rows[2]["rigidity_holds"]


def test_isotopy_check_is_planar(rng):
    scenario = parse_scenario(
        {"metric": {"kind": "round_sphere"}, "generator": {"count": 1, "bounds": [0, 1]}, "fan": 64,
         "experiment": "isotopy-check"}
    )
    with pytest.raises(CapabilityError):
        run_isotopy_check(scenario, rng)


def test_c_minus_sweep_tracks_the_shifted_cosine(rng):
    scenario = parse_scenario(
        {
            "metric": {"kind": "minkowski"},
            "fan": 64,
            "experiment": {"kind": "c-minus-sweep", "families": ["shifted-cosine", "zero-section"], "steps": 8, "n_q": 64},
        }
    )
    outcome = run_c_minus_sweep(scenario, rng)
    shifted = [r for r in outcome.rows if r["family"] == "shifted-cosine"]
    times = np.linspace(0.0, 1.0, 9)
    assert np.allclose([r["t"] for r in shifted], times)
    assert np.allclose([r["c_minus"] for r in shifted], times - 1.0, atol=1e-12)
    assert all(r["note"] == "" for r in shifted)
    assert outcome.checks["shifted-cosine:nondecreasing"] == (1, 1)
    assert outcome.checks["zero-section"] == (9, 9)
    assert outcome.failures == 0


def test_unresolved_oracle_members_are_excluded(rng, monkeypatch):
    def unresolved(family, *args, **kwargs):
        raise NumericalError("dense scan found 4 sign changes, Newton kept 3")

    monkeypatch.setattr("skylink.services.experiments.critical_points", unresolved)
    scenario = parse_scenario(
        {
            "metric": {"kind": "minkowski"},
            "generator": {"count": 2, "bounds": [-1, 1], "seed": 3},
            "fan": 64,
            "experiment": {"kind": "c-minus-sweep", "families": ["graph-oracle"], "steps": 8, "n_q": 64},
        }
    )
    outcome = run_c_minus_sweep(scenario, rng)
    assert len(outcome.rows) == 4
    assert all(r["ok"] is None for r in outcome.rows)
    assert all(r["note"].startswith("critical points unresolved") for r in outcome.rows)
    assert outcome.excluded == 4
    assert not any(name.startswith("graph-oracle") for name in outcome.checks)


def test_refocus_demo_needs_the_sphere(rng):
    with pytest.raises(CapabilityError):
        run_refocus_demo(_pairs_scenario(experiment="refocus-demo"), rng)


@pytest.mark.slow
def test_refocus_demo_on_the_sphere(rng):
    scenario = parse_scenario({"metric": {"kind": "round_sphere"}, "fan": 64, "experiment": {"kind": "refocus-demo", "steps": 16}})
    outcome = run_refocus_demo(scenario, rng)
    assert [r["check"] for r in outcome.rows] == [
        "antipodal_deviation",
        "refocus_family_min_alpha",
        "distinct_fibre_endpoints",
        "rigidity_fails_on_sphere",
        "antipode_on_every_null_geodesic",
    ]
    assert outcome.failures == 0
