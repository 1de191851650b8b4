import numpy as np
import pytest

from skylink.errors import ArgumentError, CapabilityError, ChartDomainError
from skylink.genfun.family import (
    GRADIENT_TOL,
    BumpPerturbation,
    GenFamily,
    TrigPolynomial,
    critical_points,
    genfun_for_front,
)

Q = np.linspace(0.0, 2 * np.pi, 101)


def test_trig_polynomial_pads_coefficients():
    f = TrigPolynomial((1.0,), (2.0, 3.0))
    assert f.cos == (1.0, 0.0, 0.0)
    assert f.sin == (2.0, 3.0)
    assert f.harmonics == 2
    assert TrigPolynomial((0.0, 1.0)).sin == (0.0,)


def test_trig_polynomial_evaluation_and_derivative():
    f = TrigPolynomial((0.5, 1.0, -2.0), (0.0, 0.3))
    expected = 0.5 + np.cos(Q) - 2.0 * np.cos(2 * Q) + 0.3 * np.sin(2 * Q)
    assert np.allclose(f(Q), expected)
    slope = -np.sin(Q) + 4.0 * np.sin(2 * Q) + 0.6 * np.cos(2 * Q)
    assert np.allclose(f.derivative()(Q), slope)


def test_trig_polynomial_arithmetic():
    f = TrigPolynomial((1.0, 2.0))
    g = TrigPolynomial((0.0,), (0.0, 1.0))
    assert np.allclose((f + g)(Q), f(Q) + g(Q))
    assert np.allclose((f - g)(Q), f(Q) - g(Q))
    assert np.allclose(f.scaled(-3.0)(Q), -3.0 * f(Q))
    assert np.allclose(f.shifted(0.25)(Q), f(Q) + 0.25)
    assert f.sup_bound() == 3.0
    assert TrigPolynomial.constant(4.0).is_constant
    assert not f.is_constant


def test_linear_front_of_a_fibre():
    f = TrigPolynomial.linear([2.0, -1.0])
    assert np.allclose(f(Q), 2.0 * np.cos(Q) - np.sin(Q))


def test_random_polynomials_are_reproducible():
    a = TrigPolynomial.random(np.random.default_rng(3), harmonics=4)
    b = TrigPolynomial.random(np.random.default_rng(3), harmonics=4)
    assert a == b
    assert a.harmonics == 4
    assert max(abs(c) for c in a.cos + a.sin) <= 2.0


def test_default_radius_keeps_the_quadratic_dominant():
    family = genfun_for_front(TrigPolynomial((0.0, 3.0)))
    assert family.radius == pytest.approx(4.0)
    assert family.f.sup_bound() < family.radius ** 2 / 4


def test_small_radius_is_rejected():
    with pytest.raises(ChartDomainError):
        GenFamily(TrigPolynomial((0.0, 5.0)), 1, radius=2.0)


def test_quadratic_sign_must_be_unit():
    with pytest.raises(ArgumentError):
        GenFamily(TrigPolynomial((0.0, 1.0)), 2)


def test_kappa_follows_the_quadratic_sign():
    assert GenFamily(TrigPolynomial.constant(0.0), 1).kappa == 0
    assert GenFamily(TrigPolynomial.constant(0.0), -1).kappa == 1


def test_bump_has_compact_support():
    bump = BumpPerturbation(1.0, 0.0, 0.0, 0.5)
    assert float(bump.value(0.0, 0.0)) == pytest.approx(1.0)
    assert float(bump.value(0.5, 0.0)) == 0.0
    assert float(bump.value(0.0, 0.6)) == 0.0
    assert float(bump.value(2 * np.pi - 0.1, 0.0)) > 0.0
    dq, dxi = bump.gradient(1.0, 1.0)
    assert float(dq) == 0.0 and float(dxi) == 0.0


def test_bump_gradient_matches_finite_differences():
    bump = BumpPerturbation(0.7, 1.0, 0.2, 0.8)
    q, xi, h = 1.2, 0.1, 1e-6
    dq, dxi = bump.gradient(q, xi)
    assert float(dq) == pytest.approx(float(bump.value(q + h, xi) - bump.value(q - h, xi)) / (2 * h), rel=1e-5)
    assert float(dxi) == pytest.approx(float(bump.value(q, xi + h) - bump.value(q, xi - h)) / (2 * h), rel=1e-5)


def test_bump_radius_bounds():
    with pytest.raises(ArgumentError):
        BumpPerturbation(1.0, 0.0, 0.0, np.pi)
    with pytest.raises(ArgumentError):
        BumpPerturbation(1.0, 0.0, 0.0, 0.0)


def test_bump_must_stay_inside_half_the_radius():
    with pytest.raises(ChartDomainError):
        GenFamily(TrigPolynomial((0.0, 1.0)), 1, radius=4.0, perturbation=BumpPerturbation(0.1, 0.0, 1.8, 0.5))


def test_generated_curve_is_the_front_of_f():
    f = TrigPolynomial((0.2, 1.0), (0.5,))
    curve = genfun_for_front(f).generated_curve(n=64)
    assert np.allclose(curve.u, f(curve.phi))
    assert np.allclose(curve.p, f.derivative()(curve.phi))
    assert curve.is_graph


def test_perturbed_families_have_no_generated_curve():
    family = GenFamily(TrigPolynomial((0.0, 1.0)), 1, radius=4.0, perturbation=BumpPerturbation(0.1, 0.0, 0.0, 0.5))
    with pytest.raises(CapabilityError):
        family.generated_curve()


def test_critical_points_of_cosine():
    crit = critical_points(genfun_for_front(TrigPolynomial((0.0, 1.0))))
    assert not crit.degenerate
    assert sorted(crit.values) == pytest.approx([-1.0, 1.0], abs=1e-12)
    by_value = {round(c.value): c for c in crit.points}
    assert by_value[-1].q == pytest.approx(np.pi, abs=1e-9)
    assert by_value[-1].index == 0
    assert by_value[1].index == 1
    assert all(abs(c.xi) < 1e-12 for c in crit.points)


def test_negative_quadratic_raises_every_index():
    crit = critical_points(GenFamily(TrigPolynomial((0.0, 1.0)), -1))
    assert sorted(c.index for c in crit.points) == [1, 2]


def test_constant_function_has_a_critical_circle():
    crit = critical_points(genfun_for_front(TrigPolynomial.constant(0.75)))
    assert crit.degenerate
    assert crit.points == []
    assert crit.values.tolist() == [0.75]


def test_critical_values_bracket_the_function():
    f = TrigPolynomial((0.0, 1.0), (0.0, 0.3))
    crit = critical_points(genfun_for_front(f))
    dense = f(np.linspace(0.0, 2 * np.pi, 200_001))
    assert len(crit.points) == 2
    assert crit.values.min() == pytest.approx(dense.min(), abs=1e-8)
    assert crit.values.max() == pytest.approx(dense.max(), abs=1e-8)


def test_negative_bump_adds_a_critical_minimum():
    bump = BumpPerturbation(-0.5, np.pi / 2, 0.0, 0.6)
    family = GenFamily(TrigPolynomial.constant(0.0), 1, radius=4.0, perturbation=bump)
    crit = critical_points(family)
    assert not crit.degenerate
    lowest = min(crit.points, key=lambda c: c.value)
    assert lowest.value == pytest.approx(-0.5, abs=1e-9)
    assert lowest.q == pytest.approx(np.pi / 2, abs=1e-6)
    assert lowest.index == 0


def test_converged_roots_are_kept_whatever_the_solver_status():
    family = genfun_for_front(TrigPolynomial((0.0, 1.0), (0.0, 0.3)))
    crit = critical_points(family)
    assert sorted(c.index for c in crit.points) == [0, 1]
    for c in crit.points:
        dq, dxi = family.gradient(c.q, c.xi)
        assert max(abs(float(dq)), abs(float(dxi))) <= GRADIENT_TOL
