import numpy as np
import pytest

from skylink.errors import NumericalError
from skylink.genfun.family import TrigPolynomial, genfun_for_front
from skylink.genfun.monotonicity import graph_path_nonnegative, monotonicity_harness, ordering_check

COS = TrigPolynomial((0.0, 1.0))


def test_upward_shift_raises_the_selector_linearly():
    report = monotonicity_harness(lambda t: genfun_for_front(COS.shifted(t - 1.0)), steps=10, n_q=64)
    assert np.allclose(report.values, np.linspace(-2.0, -1.0, 11), atol=1e-12)
    assert report.nondecreasing
    assert report.hypothesis_holds
    assert report.consistent


def test_flattening_cosine_violates_the_hypothesis_but_still_rises():
    report = monotonicity_harness(lambda t: genfun_for_front(COS.scaled(1.0 - t)), steps=10, n_q=64)
    assert np.allclose(report.values, np.linspace(-1.0, 0.0, 11), atol=1e-12)
    assert report.nondecreasing
    assert not report.hypothesis_holds
    assert report.consistent


def test_downward_shift_decreases():
    # fine enough that the two-step tolerance stays below each 0.1 drop
    report = monotonicity_harness(lambda t: genfun_for_front(COS.shifted(-t)), steps=10, n_q=1024)
    assert report.tolerance < 0.1
    assert not report.nondecreasing
    assert not report.hypothesis_holds
    assert report.consistent


def test_constant_path_uses_the_critical_circle():
    members = [genfun_for_front(TrigPolynomial.constant(0.0))] * 3
    report = monotonicity_harness(members, n_q=64)
    assert report.values.tolist() == [0.0, 0.0, 0.0]
    assert report.hypothesis_holds
    assert report.times.tolist() == [0.0, 0.5, 1.0]


def test_graph_path_nonnegativity():
    lift = TrigPolynomial((0.25, 0.0, 0.25))
    assert graph_path_nonnegative([COS, COS + lift, COS + lift.scaled(2.0)])
    assert not graph_path_nonnegative([COS, COS.shifted(-0.1)])


def test_nonnegative_path_orders_its_ends():
    lift = TrigPolynomial((0.25, 0.0, 0.25))
    report = ordering_check([COS, COS + lift, COS + lift.scaled(2.0)], n_q=256)
    assert report.path_nonnegative
    assert report.c_minus_start == 0.0
    assert report.min_gap == pytest.approx(0.0, abs=1e-12)
    assert report.holds


def test_signed_path_is_not_ordered():
    report = ordering_check([COS, COS.shifted(-0.5)], n_q=256)
    assert not report.path_nonnegative
    assert report.min_gap == pytest.approx(-0.5, abs=1e-12)
    assert report.holds


def test_unresolved_critical_sets_leave_the_values_alone(monkeypatch):
    def unresolved(family, *args, **kwargs):
        raise NumericalError("found 1 critical points, sign changes of f' give 2")

    monkeypatch.setattr("skylink.genfun.monotonicity.critical_points", unresolved)
    report = monotonicity_harness(lambda t: genfun_for_front(COS.shifted(t)), steps=4, n_q=64)
    assert np.allclose(report.values, np.linspace(-1.0, 0.0, 5), atol=1e-12)
    assert report.unresolved == (0.0, 0.25, 0.5, 0.75)
    assert report.nondecreasing
    assert report.hypothesis_holds
