import numpy as np
import pytest

from skylink.errors import ArgumentError
from skylink.genfun.family import TWO_PI, GenFamily, TrigPolynomial, genfun_for_front
from skylink.genfun.filtration import build_filtration, c_minus, fibre_pairing, relative_boundary

COS = TrigPolynomial((0.0, 1.0))


def test_cosine_first_vertex():
    result = c_minus(genfun_for_front(COS), n_q=64)
    assert result.kappa == 0
    assert result.c_minus == pytest.approx(-1.0, abs=1e-12)
    (i, j), = result.witness
    assert result.complex.q[i] == pytest.approx(np.pi)
    assert result.complex.xi[j] == 0.0


def test_zero_section_has_zero_selector():
    assert c_minus(genfun_for_front(TrigPolynomial.constant(0.0)), n_q=64).c_minus == 0.0


def test_constant_shift_moves_the_selector():
    result = c_minus(genfun_for_front(COS.shifted(0.75)), n_q=64)
    assert result.c_minus == pytest.approx(-0.25, abs=1e-12)


def test_negative_quadratic_joins_the_fibre_ends_at_the_minimum():
    result = c_minus(GenFamily(COS, -1, radius=4.0), n_q=64)
    assert result.kappa == 1
    assert result.complex.c_low == -8.0
    assert result.c_minus == pytest.approx(-1.0, abs=1e-12)


def test_witness_is_a_relative_cycle_dual_to_the_fibre():
    result = c_minus(GenFamily(COS, -1, radius=4.0), n_q=64)
    path = result.witness
    n_xi = result.grid[1]
    assert path[0][1] == 0 and path[-1][1] == n_xi - 1
    assert relative_boundary(result.complex, path).size == 0
    assert fibre_pairing(result.complex, path) == 1
    values = result.complex.values[path[:, 0], path[:, 1]]
    assert values.max() == pytest.approx(result.c_minus, abs=1e-12)


@pytest.mark.parametrize("q0", [0.0, 2.1, 4.2])
def test_selector_does_not_depend_on_the_fibre(q0):
    f = TrigPolynomial((0.1, 0.8, -0.3), (0.4, 0.2))
    reference = c_minus(GenFamily(f, -1), n_q=256).c_minus
    assert c_minus(GenFamily(f, -1), n_q=256, q0=q0).c_minus == pytest.approx(reference, abs=1e-12)


def test_grid_refines_until_cells_vary_little():
    cx = build_filtration(genfun_for_front(COS))
    assert cx.shape[0] >= 4096
    assert cx.value_step < 2e-3


def test_constant_front_keeps_the_coarsest_grid():
    cx = build_filtration(genfun_for_front(TrigPolynomial.constant(1.0)))
    assert cx.shape == (256, 33)
    assert cx.value_step == 0.0


def test_even_row_counts_are_made_odd():
    cx = build_filtration(genfun_for_front(COS), n_q=64, n_xi=8)
    assert cx.xi.size == 9
    assert cx.xi[cx.middle] == 0.0


def test_grid_size_limits():
    with pytest.raises(ArgumentError):
        build_filtration(genfun_for_front(COS), n_q=64, n_xi=3)
    with pytest.raises(ArgumentError):
        build_filtration(genfun_for_front(COS), n_q=4)


def test_sublevel_masks_grow_with_the_level():
    cx = build_filtration(genfun_for_front(COS), n_q=64, n_xi=9)
    low_v, low_e = cx.sublevel(-0.5)
    high_v, high_e = cx.sublevel(0.5)
    assert np.all(high_v[low_v]) and np.all(high_e[low_e])
    assert high_v.sum() > low_v.sum()


@pytest.mark.slow
def test_random_members_select_the_grid_minimum(rng):
    for _ in range(20):
        f = TrigPolynomial.random(rng, harmonics=5)
        grid_min = float(f(TWO_PI * np.arange(1024) / 1024).min())
        for sigma in (1, -1):
            assert c_minus(GenFamily(f, sigma), n_q=1024).c_minus == pytest.approx(grid_min, abs=1e-12)
