import numpy as np
import pytest

from warpreg.data.curves import SampledCurve
from warpreg.data.simulate import gaussian_mixture
from warpreg.models.basis import BasisSpec
from warpreg.models.objective import ObjectiveConfig
from warpreg.models.registration import RegistrationConfig

GRID = np.linspace(0.0, 1.0, 1000)


def periodic_shape(t):
    """Positive curve that a 15-term Fourier basis represents exactly."""
    return 3.0 + np.sin(2 * np.pi * t) + 0.5 * np.cos(4 * np.pi * t)


def two_bumps(t):
    return gaussian_mixture([5.0, 5.0], [0.25, 0.75], [0.1, 0.1], t)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def periodic_curve():
    return SampledCurve(GRID, periodic_shape(GRID))


@pytest.fixture
def bump_curve():
    return SampledCurve(GRID, two_bumps(GRID))


@pytest.fixture
def fast_config():
    return RegistrationConfig(basis=BasisSpec.fourier(15), objective=ObjectiveConfig(eval_grid=101))


@pytest.fixture
def spline_config():
    return RegistrationConfig(basis=BasisSpec.bspline(30))


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.delenv("WARPREG_THREADS", raising=False)
