"""Fourier and B-spline basis systems on [0, 1]."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import BSpline

from ..exceptions import ConfigError
from .base import BaseBasis
from .registry import register_basis


class FourierBasis(BaseBasis):
    name = "fourier"
    convention = "1, sin(2*pi*j*t), cos(2*pi*j*t), j=1,2,...; even sizes end on an unpaired sine"

    def __init__(self, size: int, degree: int, knots: Optional[Tuple[float, ...]]):
        super().__init__(size, degree, knots)
        columns = np.arange(size)
        self._omega = 2.0 * np.pi * ((columns + 1) // 2)
        self._is_sine = columns % 2 == 1

    @classmethod
    def resolve_knots(cls, size: int, degree: int, knots: Optional[Sequence[float]]) -> None:
        if knots is not None:
            raise ConfigError("knots", "knots only apply to the bspline basis")
        return None

    def values(self, t: np.ndarray) -> np.ndarray:
        phase = np.outer(t, self._omega)
        return np.where(self._is_sine, np.sin(phase), np.cos(phase))

    def derivatives(self, t: np.ndarray) -> np.ndarray:
        phase = np.outer(t, self._omega)
        return np.where(self._is_sine, self._omega * np.cos(phase), -self._omega * np.sin(phase))


def clamped_uniform_knots(size: int, degree: int) -> Tuple[float, ...]:
    """Clamped knot vector with equally spaced interior knots."""
    interior = np.linspace(0.0, 1.0, size - degree + 1)[1:-1]
    knots = np.concatenate((np.zeros(degree + 1), interior, np.ones(degree + 1)))
    return tuple(float(k) for k in knots)


class BSplineBasis(BaseBasis):
    name = "bspline"
    convention = "clamped B-splines, de Boor evaluation"

    def __init__(self, size: int, degree: int, knots: Optional[Tuple[float, ...]]):
        super().__init__(size, degree, knots)
        # identity coefficients give every basis function as one column
        self._spline = BSpline(np.asarray(knots), np.eye(size), degree, extrapolate=True)
        self._derivative = self._spline.derivative()

    @classmethod
    def resolve_knots(cls, size: int, degree: int, knots: Optional[Sequence[float]]) -> Tuple[float, ...]:
        if degree < 1:
            raise ConfigError("degree", f"bspline degree must be >= 1, got {degree}")
        if size < degree + 1:
            raise ConfigError("size", f"bspline of degree {degree} needs size >= {degree + 1}, got {size}")
        if knots is None:
            return clamped_uniform_knots(size, degree)
        knots = tuple(float(k) for k in knots)
        if len(knots) != size + degree + 1:
            raise ConfigError("knots", f"expected {size + degree + 1} knots, got {len(knots)}")
        array = np.asarray(knots)
        if np.any(np.diff(array) < 0):
            raise ConfigError("knots", "knots must be nondecreasing")
        if np.any(array[: degree + 1] != 0.0) or np.any(array[-(degree + 1):] != 1.0):
            raise ConfigError("knots", f"end knots must repeat 0 and 1 exactly {degree + 1} times")
        return knots

    def values(self, t: np.ndarray) -> np.ndarray:
        return self._spline(t)

    def derivatives(self, t: np.ndarray) -> np.ndarray:
        return self._derivative(t)


register_basis(FourierBasis.name, FourierBasis)
register_basis(BSplineBasis.name, BSplineBasis)
