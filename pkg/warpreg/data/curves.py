"""Sampled curves and affine domain mapping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import CurveFormatError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Real values observed on a strictly increasing time grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = _frozen(self.grid)
        values = _frozen(self.values)
        if grid.ndim != 1 or values.ndim != 1:
            raise CurveFormatError("grid and values must be one-dimensional")
        if grid.size != values.size:
            raise CurveFormatError(f"grid has {grid.size} points but values has {values.size}")
        if grid.size < 2:
            raise CurveFormatError("a curve needs at least two samples")
        if not np.all(np.isfinite(grid)) or not np.all(np.isfinite(values)):
            raise CurveFormatError("grid and values must be finite")
        if np.any(np.diff(grid) <= 0):
            raise CurveFormatError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, values: Sequence[float], domain: Tuple[float, float] = (0.0, 1.0)) -> "SampledCurve":
        values = np.asarray(values, dtype=float)
        return cls(np.linspace(domain[0], domain[1], values.size), values)

    @classmethod
    def from_function(cls, func, size: int = 1000) -> "SampledCurve":
        grid = np.linspace(0.0, 1.0, size)
        return cls(grid, func(grid))

    def __len__(self) -> int:
        return int(self.grid.size)

    @property
    def domain(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def is_canonical(self) -> bool:
        return self.domain == (0.0, 1.0)

    def evaluate(self, t) -> np.ndarray:
        """Linear interpolation of the samples."""
        return np.interp(t, self.grid, self.values)

    def scaled(self, factor: float) -> "SampledCurve":
        return SampledCurve(self.grid, self.values * factor)

    def shifted(self, offset: float) -> "SampledCurve":
        return SampledCurve(self.grid, self.values + offset)

    def to_unit_interval(self) -> "SampledCurve":
        """Map the grid affinely onto [0, 1]."""
        if self.is_canonical:
            return self
        start, stop = self.domain
        grid = (self.grid - start) / (stop - start)
        grid[0], grid[-1] = 0.0, 1.0
        return SampledCurve(grid, self.values)


def common_grid(curves: Sequence[SampledCurve]) -> np.ndarray:
    """Return the grid shared by every curve or raise ``CurveFormatError``."""
    if not curves:
        raise CurveFormatError("no curves given")
    grid = curves[0].grid
    for index, curve in enumerate(curves[1:], start=1):
        if curve.grid.size != grid.size or not np.array_equal(curve.grid, grid):
            raise CurveFormatError(f"curve {index} does not share the grid of curve 0")
    return grid


def stack_values(curves: Sequence[SampledCurve]) -> np.ndarray:
    """Return an (n_curves, n_samples) array; curves must share a grid."""
    common_grid(curves)
    return np.vstack([curve.values for curve in curves])
