"""Smooth monotone warping functions h(t) = beta0 + beta1 * int_0^t exp(c'B(s)) ds."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import exprel

from ..exceptions import WarpError
from ..utils.constants import DEFAULT_QUAD_SIZE, DEFAULT_WARP_COEFFS, EXP_CLAMP, MIN_QUAD_SIZE
from ..utils.quadrature import cumulative_exp_integral
from .basis import BasisSpec, as_unit_points, eval_basis

ArrayLike = Union[float, np.ndarray]

_BISECTION_STEPS = 52
_GAUGE_TOL = 1e-8


def default_warp_basis(size: int = DEFAULT_WARP_COEFFS) -> BasisSpec:
    return BasisSpec.bspline(size)


@lru_cache(maxsize=32)
def _node_design(wbasis: BasisSpec, quad_size: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes = np.linspace(0.0, 1.0, quad_size)
    values = eval_basis(wbasis, nodes)
    for array in (nodes, values):
        array.setflags(write=False)
    return nodes, values


@lru_cache(maxsize=32)
def gauge_direction(wbasis: BasisSpec, quad_size: int = DEFAULT_QUAD_SIZE) -> Optional[np.ndarray]:
    """Unit coefficient direction g with g'B(t) = 1, or None if the basis has none.

    Moving c along g multiplies exp(W) by a constant that beta1 cancels, so
    every c + k g gives the same warp.
    """
    _, design = _node_design(wbasis, quad_size)
    ones = np.ones(design.shape[0])
    direction, *_ = np.linalg.lstsq(design, ones, rcond=None)
    if np.max(np.abs(design @ direction - ones)) > _GAUGE_TOL:
        return None
    direction = direction / np.linalg.norm(direction)
    direction.setflags(write=False)
    return direction


def _restore_shape(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values[0]) if scalar else values


@dataclass(frozen=True, eq=False)
class MonotoneWarp:
    """Strictly increasing map of [0, 1] onto itself.

    ``beta0`` is fixed at 0 and ``beta1`` normalises the integral so that
    h(1) = 1. W = c'B(t) is sampled on ``quad_size`` equispaced nodes, clamped
    to [-40, 40] and taken as linear between nodes; h integrates exp(W)
    exactly under that interpolation. ``clamped`` records whether the clamp
    was hit.
    """

    c: np.ndarray
    wbasis: BasisSpec
    quad_size: int = DEFAULT_QUAD_SIZE
    beta0: float = field(init=False, default=0.0)
    beta1: float = field(init=False, default=1.0)
    clamped: bool = field(init=False, default=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=float).ravel()
        if c.size != self.wbasis.size:
            raise WarpError(f"expected {self.wbasis.size} warp coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise WarpError("warp coefficients must be finite")
        if int(self.quad_size) < MIN_QUAD_SIZE:
            raise WarpError(f"quadrature grid needs at least {MIN_QUAD_SIZE} points, got {self.quad_size}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "quad_size", int(self.quad_size))

        nodes, design = _node_design(self.wbasis, self.quad_size)
        raw = design @ c
        log_slope = np.clip(raw, -EXP_CLAMP, EXP_CLAMP)
        cumulative = cumulative_exp_integral(log_slope, nodes)
        beta1 = 1.0 / cumulative[-1]
        h_nodes = cumulative * beta1
        h_nodes[-1] = 1.0
        for array in (log_slope, h_nodes):
            array.setflags(write=False)

        object.__setattr__(self, "beta1", float(beta1))
        object.__setattr__(self, "clamped", bool(np.any(np.abs(raw) > EXP_CLAMP)))
        object.__setattr__(self, "_nodes", nodes)
        object.__setattr__(self, "_log_slope", log_slope)
        object.__setattr__(self, "_h_nodes", h_nodes)

    def _panel_of(self, points: np.ndarray) -> np.ndarray:
        return np.clip(np.searchsorted(self._nodes, points, side="right") - 1, 0, self.quad_size - 2)

    def _panel_slope(self, panel: np.ndarray) -> np.ndarray:
        step = self._nodes[panel + 1] - self._nodes[panel]
        return (self._log_slope[panel + 1] - self._log_slope[panel]) / step

    def _within_panel(self, panel: np.ndarray, points: np.ndarray) -> np.ndarray:
        offset = points - self._nodes[panel]
        scale = self.beta1 * np.exp(self._log_slope[panel])
        values = self._h_nodes[panel] + scale * offset * exprel(self._panel_slope(panel) * offset)
        return np.clip(values, self._h_nodes[panel], self._h_nodes[panel + 1])

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        points, scalar = as_unit_points(t)
        values = np.clip(self._within_panel(self._panel_of(points), points), 0.0, 1.0)
        return _restore_shape(values, scalar)

    def derivative(self, t: ArrayLike) -> ArrayLike:
        """beta1 * exp(W(t)) with W linear between nodes, strictly positive."""
        points, scalar = as_unit_points(t)
        panel = self._panel_of(points)
        log_slope = self._log_slope[panel] + self._panel_slope(panel) * (points - self._nodes[panel])
        return _restore_shape(self.beta1 * np.exp(log_slope), scalar)

    def inverse(self, y: ArrayLike) -> ArrayLike:
        """Solve h(t) = y by bisection inside the bracketing quadrature panel."""
        targets, scalar = as_unit_points(y)
        panel = np.clip(np.searchsorted(self._h_nodes, targets, side="right") - 1, 0, self.quad_size - 2)
        low = self._nodes[panel].copy()
        high = self._nodes[panel + 1].copy()
        for _ in range(_BISECTION_STEPS):
            middle = 0.5 * (low + high)
            above = self._within_panel(panel, middle) >= targets
            high = np.where(above, middle, high)
            low = np.where(above, low, middle)
        return _restore_shape(0.5 * (low + high), scalar)

    def inverted(self) -> "InverseWarp":
        return InverseWarp(self)

    @property
    def is_identity(self) -> bool:
        return bool(np.allclose(self._h_nodes, self._nodes, rtol=0.0, atol=1e-12))


@dataclass(frozen=True)
class InverseWarp:
    """View of h^{-1} for a monotone warp; evaluation and inversion swap roles."""

    warp: MonotoneWarp

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        return self.warp.inverse(t)

    def inverse(self, y: ArrayLike) -> ArrayLike:
        return self.warp.evaluate(y)

    def derivative(self, t: ArrayLike) -> ArrayLike:
        return 1.0 / self.warp.derivative(self.warp.inverse(t))


@dataclass(frozen=True, eq=False)
class SampledWarp:
    """A tabulated increasing warp, e.g. read back from ``warps.csv``."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.shape != values.shape or grid.ndim != 1:
            raise WarpError("sampled warp needs matching 1-D grid and values")
        if np.any(np.diff(values) <= 0):
            raise WarpError("sampled warp values must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        return np.interp(t, self.grid, self.values)

    def inverse(self, y: ArrayLike) -> ArrayLike:
        return np.interp(y, self.values, self.grid)

    def inverted(self) -> "SampledWarp":
        return SampledWarp(self.values, self.grid)


def warp_from_coeffs(c: np.ndarray, wbasis: BasisSpec | None = None, quad_size: int = DEFAULT_QUAD_SIZE) -> MonotoneWarp:
    """Build the normalised warp for coefficients ``c``."""
    return MonotoneWarp(c, wbasis or default_warp_basis(), quad_size)


def identity_warp(wbasis: BasisSpec | None = None, quad_size: int = DEFAULT_QUAD_SIZE) -> MonotoneWarp:
    wbasis = wbasis or default_warp_basis()
    return MonotoneWarp(np.zeros(wbasis.size), wbasis, quad_size)


def warp_eval(w: MonotoneWarp, t: ArrayLike) -> ArrayLike:
    return w.evaluate(t)


def warp_deriv(w: MonotoneWarp, t: ArrayLike) -> ArrayLike:
    return w.derivative(t)


def warp_inverse(w: MonotoneWarp, y: ArrayLike) -> ArrayLike:
    return w.inverse(y)
