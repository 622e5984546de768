"""Trapezoid quadrature helpers shared by the numeric modules."""

from __future__ import annotations

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import exprel


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Return weights w such that w @ f equals the composite trapezoid of f."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        return np.zeros_like(grid)
    steps = np.diff(grid)
    weights = np.zeros_like(grid)
    weights[:-1] += steps / 2.0
    weights[1:] += steps / 2.0
    return weights


def cumulative_exp_integral(log_values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Cumulative integral of exp(W) with W linear between grid nodes.

    Each panel contributes ``d * exp(W0) * exprel(W1 - W0)``, the exact
    integral of the exponential of the linear interpolant. Every panel is
    positive for finite W.
    """
    log_values = np.asarray(log_values, dtype=float)
    steps = np.diff(np.asarray(grid, dtype=float))
    panels = steps * np.exp(log_values[:-1]) * exprel(np.diff(log_values))
    return np.concatenate(([0.0], np.cumsum(panels)))


def integrate(values: np.ndarray, grid: np.ndarray) -> float:
    """Composite trapezoid of sampled values."""
    return float(trapezoid(np.asarray(values, dtype=float), np.asarray(grid, dtype=float)))


def integrate_up_to(values: np.ndarray, grid: np.ndarray, upper: float) -> float:
    """Trapezoid integral of samples over [grid[0], upper].

    ``upper`` need not be a grid node; the integrand is linearly interpolated there.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    inside = grid < upper
    sub_grid = np.append(grid[inside], upper)
    sub_values = np.append(values[inside], np.interp(upper, grid, values))
    return integrate(sub_values, sub_grid)


def grid_mean(values: np.ndarray, grid: np.ndarray) -> float:
    """Trapezoid average of samples over the span of ``grid``."""
    grid = np.asarray(grid, dtype=float)
    span = grid[-1] - grid[0]
    return integrate(values, grid) / span
