import numpy as np
import pytest

from skylink.errors import ArgumentError, ChartDomainError, IntegrationError
from skylink.geometry.geodesics import geodesic_fan, geodesic_flow
from skylink.geometry.metrics import Event, Tangent, null_future_direction


def _flow(metric, x, v, s_max, **kwargs):
    return geodesic_flow(metric, x, Tangent(x, v), s_max, **kwargs)


def test_minkowski_geodesic_is_a_straight_line(minkowski):
    path = _flow(minkowski, Event([0.0, 0.0, 0.0]), [1.0, 0.0, 1.0], 3.0, tol=1e-10)
    assert np.allclose(path.positions[-1, 0], [3.0, 0.0, 3.0], atol=1e-9)
    assert path.s_end == pytest.approx(3.0)


def test_flow_starts_from_a_null_tangent(minkowski):
    x = Event([1.0, -1.0, 0.0])
    path = geodesic_flow(minkowski, x, null_future_direction(minkowski, x, np.array([0.6, 0.8])), 5.0, tol=1e-10)
    assert np.allclose(path.positions[-1, 0], [4.0, 3.0, 5.0], atol=1e-9)
    assert path.norm_drift() < 1e-12


def test_flow_needs_a_tangent_at_the_start(minkowski):
    x = Event([0.0, 0.0, 0.0])
    with pytest.raises(ArgumentError):
        geodesic_flow(minkowski, x, np.array([1.0, 0.0, 1.0]), 1.0)
    with pytest.raises(ArgumentError):
        geodesic_flow(minkowski, x, Tangent(Event([1.0, 0.0, 0.0]), [1.0, 0.0, 1.0]), 1.0)


def test_sphere_null_geodesic_reaches_the_antipode(sphere):
    path = _flow(sphere, Event([0.0, 0.0, 1.0, 0.0]), [1.0, 0.0, 0.0, 1.0], np.pi, tol=1e-10)
    end = path.positions[-1, 0]
    assert np.allclose(end, [0.0, 0.0, -1.0, np.pi], atol=1e-7)


def test_sphere_path_stays_on_the_sphere(sphere):
    path = _flow(sphere, Event([0.6, 0.0, 0.8, 0.0]), [0.0, 1.0, 0.0, 1.0], 5.0, tol=1e-10)
    radii = np.linalg.norm(path.positions[:, 0, :3], axis=1)
    assert np.allclose(radii, 1.0, atol=1e-12)


def test_conformal_null_norm_is_preserved(conformal):
    x = Event([-1.5, 0.3, 0.0])
    q = np.array([1.0, 0.0]) * np.exp(-conformal.conformal.value(x.spatial))
    path = geodesic_flow(conformal, x, Tangent(x, np.append(q, 1.0)), 4.0, tol=1e-10)
    assert path.norm_drift() < 1e-8


def test_affine_reparameterisation_traces_the_same_path(conformal):
    x = Event([-1.0, 0.2, 0.0])
    v = np.array([0.8, 0.1, 1.0])
    once = geodesic_flow(conformal, x, Tangent(x, v), 2.0, tol=1e-11)
    twice = geodesic_flow(conformal, x, Tangent(x, 2.0 * v), 1.0, tol=1e-11)
    assert np.allclose(once.positions[-1, 0], twice.positions[-1, 0], atol=1e-8)


def test_fan_rays_match_single_rays(conformal):
    x = Event([0.2, -0.4, 0.0])
    vs = np.array([[0.5, 0.0, 1.0], [0.0, -0.7, 1.0], [0.3, 0.3, 1.0]])
    fan = geodesic_fan(conformal, x, vs, 2.5, tol=1e-11)
    for j, v in enumerate(vs):
        single = geodesic_flow(conformal, x, Tangent(x, v), 2.5, tol=1e-11)
        assert np.allclose(fan.positions[-1, j], single.positions[-1, 0], atol=1e-8)


def test_dense_state_interpolates_each_ray(minkowski):
    vs = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    fan = geodesic_fan(minkowski, Event([0.0, 0.0, 0.0]), vs, 4.0, tol=1e-10)
    pos, vel = fan.state_at(np.array([1.0, 2.5]))
    assert np.allclose(pos, [[1.0, 0.0, 1.0], [0.0, 2.5, 2.5]], atol=1e-9)
    assert np.allclose(vel, vs, atol=1e-9)


def test_zero_length_returns_the_initial_node(minkowski):
    path = _flow(minkowski, Event([1.0, 2.0, 3.0]), [1.0, 0.0, 1.0], 0.0)
    assert path.s.shape == (1,)
    assert np.array_equal(path.positions[0, 0], [1.0, 2.0, 3.0])


def test_negative_affine_length_integrates_backwards(minkowski):
    path = _flow(minkowski, Event([0.0, 0.0, 2.0]), [0.0, 1.0, 1.0], -2.0, tol=1e-10)
    assert np.allclose(path.positions[-1, 0], [0.0, -2.0, 0.0], atol=1e-9)


def test_tolerance_must_be_positive(minkowski):
    with pytest.raises(ArgumentError):
        _flow(minkowski, Event([0.0, 0.0, 0.0]), [1.0, 0.0, 1.0], 1.0, tol=0.0)


def test_velocity_dimension_is_checked(minkowski):
    with pytest.raises(ArgumentError):
        _flow(minkowski, Event([0.0, 0.0, 0.0]), [1.0, 1.0], 1.0)


def test_start_outside_the_chart_is_rejected(sphere):
    with pytest.raises(ChartDomainError):
        _flow(sphere, Event([0.0, 0.0, 2.0, 0.0]), [1.0, 0.0, 0.0, 1.0], 1.0)


def test_leaving_the_chart_raises_with_the_partial_path(minkowski):
    with pytest.raises(IntegrationError) as info:
        _flow(minkowski, Event([0.0, 0.0, 0.0]), [1.0, 0.0, 1.0], 5000.0, tol=1e-8)
    partial = info.value.partial
    assert partial is not None
    assert partial.s_end == pytest.approx(1000.0, rel=1e-6)
