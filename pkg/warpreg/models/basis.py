"""Basis specifications, expansions and least-squares fitting."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg

from ..data.curves import SampledCurve
from ..exceptions import ConfigError, DomainError, IllPosedFitError
from . import bases  # noqa: F401  (registers the built-in systems)
from .base import BaseBasis
from .registry import get_basis

ArrayLike = Union[float, np.ndarray]

# evaluation points this close outside [0, 1] are treated as round-off
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class BasisSpec:
    """A basis system on [0, 1]: kind, number of functions and spline layout."""

    kind: str
    size: int
    degree: int = 3
    knots: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        kind = str(self.kind).lower()
        try:
            system_cls = get_basis(kind)
        except KeyError as exc:
            raise ConfigError("kind", f"unknown basis kind '{self.kind}'") from exc
        if int(self.size) < 1:
            raise ConfigError("size", f"basis size must be >= 1, got {self.size}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "size", int(self.size))
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "knots", system_cls.resolve_knots(self.size, self.degree, self.knots))

    @classmethod
    def fourier(cls, size: int) -> "BasisSpec":
        return cls("fourier", size)

    @classmethod
    def bspline(cls, size: int, degree: int = 3) -> "BasisSpec":
        return cls("bspline", size, degree)

    @property
    def system(self) -> BaseBasis:
        return _system_for(self)

    @property
    def convention(self) -> str:
        return self.system.convention

    def to_dict(self) -> dict:
        data = {"kind": self.kind, "size": self.size}
        if self.kind == "bspline":
            data["degree"] = self.degree
        return data


@lru_cache(maxsize=64)
def _system_for(spec: BasisSpec) -> BaseBasis:
    return get_basis(spec.kind)(spec.size, spec.degree, spec.knots)


def as_unit_points(t: ArrayLike) -> Tuple[np.ndarray, bool]:
    """Return t as a 1-D float array inside [0, 1] and whether it was scalar."""
    points = np.asarray(t, dtype=float)
    scalar = points.ndim == 0
    points = np.atleast_1d(points)
    if points.ndim != 1:
        raise DomainError("evaluation points must be a scalar or a 1-D array")
    if not np.all(np.isfinite(points)):
        raise DomainError("evaluation points must be finite")
    if np.any(points < -_DOMAIN_SLACK) or np.any(points > 1.0 + _DOMAIN_SLACK):
        raise DomainError(f"evaluation points must lie in [0, 1]; got range [{points.min()}, {points.max()}]")
    return np.clip(points, 0.0, 1.0), scalar


def eval_basis(spec: BasisSpec, t: ArrayLike) -> np.ndarray:
    """Phi(t): a vector of length ``spec.size`` or a (len(t), size) matrix."""
    points, scalar = as_unit_points(t)
    matrix = spec.system.values(points)
    return matrix[0] if scalar else matrix


def eval_basis_deriv(spec: BasisSpec, t: ArrayLike) -> np.ndarray:
    """Psi(t) = d/dt Phi(t), same shape conventions as ``eval_basis``."""
    points, scalar = as_unit_points(t)
    matrix = spec.system.derivatives(points)
    return matrix[0] if scalar else matrix


@dataclass(frozen=True, eq=False)
class BasisExpansion:
    """Coefficient vector over a basis system."""

    spec: BasisSpec
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size != self.spec.size:
            raise ValueError(f"expected {self.spec.size} coefficients, got {coeffs.size}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("expansion coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        return eval_basis(self.spec, t) @ self.coeffs

    def derivative(self, t: ArrayLike) -> ArrayLike:
        return eval_basis_deriv(self.spec, t) @ self.coeffs

    def scaled(self, factor: float) -> "BasisExpansion":
        return BasisExpansion(self.spec, self.coeffs * factor)

    def sample(self, grid: np.ndarray) -> SampledCurve:
        return SampledCurve(grid, self.evaluate(grid))


def eval_expansion(exp: BasisExpansion, t: ArrayLike) -> ArrayLike:
    return exp.evaluate(t)


def eval_expansion_deriv(exp: BasisExpansion, t: ArrayLike) -> ArrayLike:
    return exp.derivative(t)


def fit_expansion(curve: SampledCurve, spec: BasisSpec) -> BasisExpansion:
    """Least-squares coefficients of ``curve`` over ``spec`` (pivoted QR)."""
    if len(curve) < spec.size:
        raise IllPosedFitError(f"{len(curve)} samples cannot determine {spec.size} coefficients")
    design = eval_basis(spec, curve.grid)
    coeffs, _, rank, _ = scipy.linalg.lstsq(design, curve.values, lapack_driver="gelsy")
    if rank < spec.size:
        raise IllPosedFitError(f"design matrix has rank {rank} < {spec.size} for {spec.kind} basis")
    return BasisExpansion(spec, coeffs)
