"""Tests for the warp residual and penalised criterion."""

import numpy as np
import pytest
from scipy.integrate import trapezoid

from warpreg.data.curves import SampledCurve
from warpreg.exceptions import ConfigError
from warpreg.models.basis import BasisExpansion, BasisSpec, fit_expansion
from warpreg.models.objective import Objective, ObjectiveConfig, criterion, log_deriv_ratio, positivity_offset, residual_vector
from warpreg.models.solver import minimize
from warpreg.models.warp import default_warp_basis, gauge_direction, identity_warp, warp_from_coeffs

from conftest import GRID, periodic_shape, two_bumps

SPEC = BasisSpec.fourier(15)


@pytest.fixture
def expansions():
    p = fit_expansion(SampledCurve(GRID, periodic_shape(GRID)), SPEC)
    shifted = periodic_shape(np.clip(GRID + 0.05 * np.sin(np.pi * GRID), 0, 1))
    q = fit_expansion(SampledCurve(GRID, shifted), SPEC)
    return p, q


@pytest.mark.parametrize("scale", [0.1, 1.0, 7.3])
def test_amplitude_cancels(expansions, scale, rng):
    p, q = expansions
    for _ in range(20):
        warp = warp_from_coeffs(rng.normal(scale=0.3, size=10))
        assert criterion(p, q.scaled(scale), warp) == pytest.approx(criterion(p, q, warp), rel=1e-12)


def test_residual_norm_equals_criterion(expansions, rng):
    p, q = expansions
    warp = warp_from_coeffs(rng.normal(scale=0.3, size=10))
    residual = residual_vector(p, q, warp)
    assert residual.shape == (2 * 201,)
    assert residual @ residual == pytest.approx(criterion(p, q, warp), rel=1e-14)


def test_identity_is_a_zero_of_self_registration(expansions):
    p, _ = expansions
    assert criterion(p, p, identity_warp()) < 1e-20


def test_penalty_term(expansions, rng):
    p, q = expansions
    warp = warp_from_coeffs(rng.normal(scale=0.3, size=10))
    cfg = ObjectiveConfig(lam=0.5)
    grid = cfg.grid
    _, penalty = Objective(p, q, cfg).split_criterion(warp)
    assert penalty == pytest.approx(0.5 * trapezoid((1 - warp.derivative(grid)) ** 2, grid), rel=1e-12)


def test_data_term_is_weighted_squared_residual(expansions, rng):
    p, q = expansions
    warp = warp_from_coeffs(rng.normal(scale=0.3, size=10))
    cfg = ObjectiveConfig(lam=0.0)
    grid = cfg.grid
    h = warp.evaluate(grid)
    rho = q.derivative(grid) / q.evaluate(grid) - warp.derivative(grid) * p.derivative(h) / p.evaluate(h)
    data, penalty = Objective(p, q, cfg).split_criterion(warp)
    assert penalty == 0.0
    assert data == pytest.approx(trapezoid(rho**2, grid), rel=1e-10)


def test_small_denominators_are_masked():
    sine = BasisExpansion(BasisSpec.fourier(2), [0.0, 1.0])
    ratio, masked = log_deriv_ratio(sine, np.array([0.125, 0.5]))
    assert list(masked) == [False, True]
    assert ratio[0] == pytest.approx(2 * np.pi)
    assert ratio[1] == 0.0


def test_masked_fraction_is_recorded():
    sine = BasisExpansion(BasisSpec.fourier(3), [0.0, 1.0, 0.0])
    cosine = BasisExpansion(BasisSpec.fourier(3), [0.0, 0.0, 1.0])
    objective = Objective(sine, cosine, ObjectiveConfig(eval_grid=101))
    objective.residuals(identity_warp())
    assert 0 < objective.masked_fraction < 0.1


def test_positivity_offset():
    assert positivity_offset(two_bumps(GRID)) == 0.0
    assert positivity_offset(np.array([-1.0, 3.0]), np.array([0.0])) == pytest.approx(1.4)


def test_invalid_config_names_field():
    with pytest.raises(ConfigError) as info:
        ObjectiveConfig(lam=-1.0)
    assert info.value.field == "objective.lambda"
    with pytest.raises(ConfigError):
        ObjectiveConfig(eval_grid=5)


def test_criterion_is_stable_under_grid_refinement(expansions, rng):
    p, q = expansions
    for _ in range(5):
        warp = warp_from_coeffs(rng.normal(scale=0.3, size=10))
        coarse = criterion(p, q, warp, ObjectiveConfig(eval_grid=201))
        fine = criterion(p, q, warp, ObjectiveConfig(eval_grid=2001))
        assert coarse == pytest.approx(fine, rel=1e-2)


def test_zero_floor_masks_nothing_on_positive_curves(expansions, rng):
    p, q = expansions
    ratio, masked = log_deriv_ratio(p, GRID, floor=0.0)
    assert not masked.any()
    assert np.allclose(ratio, p.derivative(GRID) / p.evaluate(GRID), rtol=1e-12, atol=0.0)

    cfg = ObjectiveConfig(lam=0.0, denom_floor=0.0)
    objective = Objective(p, q, cfg)
    warp = warp_from_coeffs(rng.normal(scale=0.3, size=10))
    data, _ = objective.split_criterion(warp)
    assert objective.masked_fraction == 0.0
    grid = cfg.grid
    h = warp.evaluate(grid)
    rho = q.derivative(grid) / q.evaluate(grid) - warp.derivative(grid) * p.derivative(h) / p.evaluate(h)
    assert data == pytest.approx(trapezoid(rho**2, grid), rel=1e-10)


def test_heavy_penalty_pulls_warp_to_identity(rng):
    p = fit_expansion(SampledCurve(GRID, 3.0 + 0.3 * rng.normal(size=GRID.size)), SPEC)
    q = fit_expansion(SampledCurve(GRID, 3.0 + 0.3 * rng.normal(size=GRID.size)), SPEC)
    grid = np.linspace(0.0, 1.0, 1001)

    def slope_distance(lam):
        objective = Objective(p, q, ObjectiveConfig(lam=lam))
        c, _ = minimize(lambda c: objective.residuals(warp_from_coeffs(c)), np.zeros(10), gauge=gauge_direction(default_warp_basis()))
        return np.sqrt(trapezoid((1.0 - warp_from_coeffs(c).derivative(grid)) ** 2, grid))

    loose = slope_distance(1e-2)
    tight = slope_distance(1e6)
    assert tight < 1e-2
    assert tight < loose
