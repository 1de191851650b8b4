import numpy as np
import pytest

from skylink.contact.legendrian import LegendrianCurve
from skylink.geometry.metrics import SpacetimeMetric
from skylink.skies.sky import CauchySlice


@pytest.fixture
def minkowski():
    return SpacetimeMetric.minkowski(2)


@pytest.fixture
def conformal():
    return SpacetimeMetric.conformal_product(2, 0.2, 1.0)


@pytest.fixture
def sphere():
    return SpacetimeMetric.round_sphere(2)


@pytest.fixture
def flat_slice(minkowski):
    return CauchySlice(minkowski, 0.0)


@pytest.fixture
def cusp_curve():
    """Closed front with two down cusps, two up cusps and one negative crossing at (π, 0).

    φ = π + sin 2s, u = cos s − cos(3s)/3, p = sin s; rotation 0, tb −3, winding 0.
    """
    # offset keeps every cusp strictly between two samples
    s = 2.0 * np.pi * (np.arange(400) + 0.3) / 400
    return LegendrianCurve(np.pi + np.sin(2 * s), np.sin(s), np.cos(s) - np.cos(3 * s) / 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
