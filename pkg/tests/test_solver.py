"""Tests for the Levenberg-Marquardt solver and finite-difference Jacobian."""

import numpy as np
import pytest

from warpreg.data.curves import SampledCurve
from warpreg.exceptions import ConfigError, SolverError
from warpreg.models.basis import BasisSpec, fit_expansion
from warpreg.models.objective import Objective
from warpreg.models.solver import SolverOptions, fd_jacobian, minimize
from warpreg.data.simulate import warp_f1
from warpreg.models.warp import default_warp_basis, gauge_direction, warp_from_coeffs

from conftest import GRID, periodic_shape, two_bumps

CHECK = np.linspace(0.0, 1.0, 501)


def rosenbrock(c):
    return np.array([10.0 * (c[1] - c[0] ** 2), 1.0 - c[0]])


def test_linear_problem_matches_least_squares(rng):
    A = rng.normal(size=(10, 5))
    b = rng.normal(size=10)
    c, report = minimize(lambda c: A @ c - b, np.zeros(5))
    expected = np.linalg.lstsq(A, b, rcond=None)[0]
    assert report.converged
    assert np.allclose(c, expected, atol=1e-8)


def test_shifted_identity_converges_quickly():
    c, report = minimize(lambda c: c - 3.0, np.zeros(1))
    assert report.converged
    assert report.iterations <= 3
    assert c[0] == pytest.approx(3.0, abs=1e-8)


def test_zero_residual_at_start():
    c, report = minimize(lambda c: c, np.zeros(4))
    assert report.converged
    assert report.iterations == 0
    assert report.final_criterion == 0.0
    assert np.array_equal(c, np.zeros(4))


def test_accepted_steps_strictly_decrease():
    c, report = minimize(rosenbrock, np.array([-1.2, 1.0]))
    history = np.array(report.criterion_history)
    assert np.all(np.diff(history) < 0)
    assert np.allclose(c, [1.0, 1.0], atol=1e-6)
    assert report.final_criterion == history[-1]


def test_never_worse_than_start(rng):
    start = rng.normal(size=2)
    c, report = minimize(rosenbrock, start, SolverOptions(max_iters=2))
    assert report.final_criterion <= np.sum(rosenbrock(start) ** 2)


def test_fd_jacobian_on_smooth_function():
    def residual(c):
        return np.array([np.sin(c[0]) * c[1], np.exp(c[1]), c[0] ** 3])

    c = np.array([0.4, -1.3])
    exact = np.array([[np.cos(0.4) * -1.3, np.sin(0.4)], [0.0, np.exp(-1.3)], [3 * 0.4**2, 0.0]])
    assert np.allclose(fd_jacobian(residual, c), exact, atol=1e-8)


def test_fd_jacobian_matches_richardson_on_registration_residual(rng):
    spec = BasisSpec.fourier(15)
    p = fit_expansion(SampledCurve(GRID, two_bumps(GRID) + 0.5), spec)
    q = fit_expansion(SampledCurve(GRID, two_bumps(np.clip(GRID + 0.03 * np.sin(np.pi * GRID), 0, 1)) + 0.5), spec)
    objective = Objective(p, q)

    def residual(c):
        return objective.residuals(warp_from_coeffs(c))

    c = rng.normal(scale=0.2, size=10)
    jacobian = fd_jacobian(residual, c)

    def central(step):
        return fd_jacobian(residual, c, step)

    h = 1e-3
    richardson = (4 * central(h / 2) - central(h)) / 3
    assert np.linalg.norm(jacobian - richardson) <= 1e-4 * np.linalg.norm(richardson)


def test_non_finite_start():
    with pytest.raises(SolverError):
        minimize(lambda c: np.full(3, np.nan), np.zeros(2))


def test_non_finite_jacobian():
    with pytest.raises(SolverError):
        fd_jacobian(lambda c: np.array([np.log(c[0] - 1.0)]), np.array([1.0]))


def test_pin_first_keeps_gauge():
    c, _ = minimize(lambda c: np.array([c[0] + c[1] - 2.0, c[1] - 2.0]), np.array([5.0, 0.0]), SolverOptions(pin_first=True))
    assert c[0] == 0.0
    assert c[1] == pytest.approx(2.0, abs=1e-6)


def test_multistart_is_deterministic():
    opts = SolverOptions(multistart=3, seed=7)
    first_c, first = minimize(rosenbrock, np.array([-1.2, 1.0]), opts)
    second_c, second = minimize(rosenbrock, np.array([-1.2, 1.0]), opts)
    _, single = minimize(rosenbrock, np.array([-1.2, 1.0]))
    assert np.array_equal(first_c, second_c)
    assert first.n_evaluations == second.n_evaluations > single.n_evaluations


@pytest.mark.parametrize("field, value", [("max_iters", 0), ("xtol", 0.0), ("damping_up", 0.5), ("damping_down", 1.5), ("multistart", -1)])
def test_invalid_options(field, value):
    with pytest.raises(ConfigError) as info:
        SolverOptions(**{field: value})
    assert info.value.field == f"solver.{field}"


def _warp_residual(reference, target, spec):
    objective = Objective(fit_expansion(SampledCurve(GRID, reference), spec), fit_expansion(SampledCurve(GRID, target), spec))

    def residual(c):
        return objective.residuals(warp_from_coeffs(c))

    return residual


@pytest.fixture
def periodic_pair():
    return _warp_residual(periodic_shape(GRID), periodic_shape(warp_f1(0.3, GRID)), BasisSpec.fourier(15))


def test_f1_pair_criterion_drops_by_two_orders():
    residual = _warp_residual(two_bumps(GRID), two_bumps(warp_f1(0.5, GRID)), BasisSpec.bspline(30))
    start = np.zeros(10)
    initial = residual(start) @ residual(start)
    _, report = minimize(residual, start, gauge=gauge_direction(default_warp_basis()))
    assert report.final_criterion <= 0.01 * initial


def test_constant_shift_of_start_gives_same_warp(periodic_pair):
    gauge = gauge_direction(default_warp_basis())
    base, _ = minimize(periodic_pair, np.zeros(10), gauge=gauge)
    shifted, _ = minimize(periodic_pair, np.full(10, 1.3), gauge=gauge)
    assert np.max(np.abs(warp_from_coeffs(base).evaluate(CHECK) - warp_from_coeffs(shifted).evaluate(CHECK))) <= 1e-6


def test_steps_stay_orthogonal_to_gauge(periodic_pair):
    gauge = gauge_direction(default_warp_basis())
    c, report = minimize(periodic_pair, np.zeros(10), SolverOptions(multistart=2, seed=3), gauge=gauge)
    assert report.iterations > 0
    assert abs(gauge @ c) <= 1e-12


def test_pin_first_slides_along_gauge(periodic_pair, rng):
    start = rng.normal(scale=0.3, size=10)
    start[0] = 0.7
    initial = periodic_pair(start) @ periodic_pair(start)
    c, report = minimize(periodic_pair, start, SolverOptions(pin_first=True), gauge=gauge_direction(default_warp_basis()))
    assert c[0] == 0.0
    assert report.criterion_history[0] == pytest.approx(initial, rel=1e-8)
    assert report.final_criterion <= initial


def test_gauge_of_wrong_length():
    with pytest.raises(SolverError):
        minimize(lambda c: c - 1.0, np.zeros(3), gauge=np.ones(2))
