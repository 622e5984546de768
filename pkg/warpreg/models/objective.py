"""Residual and penalised least-squares criterion of the warp differential equation.

For reference expansion p, target expansion q and a candidate warp h, the
residual at t is

    rho(t) = q'Psi(t) / q'Phi(t) - h'(t) * p'Psi(h(t)) / p'Phi(h(t)),

i.e. the log-derivative of the target minus the chain-rule log-derivative of
the warped reference. Amplitude cancels from both ratios. The penalty
lambda * int (1 - h'(t))^2 dt pulls h towards the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np

from ..exceptions import ConfigError
from ..utils.constants import DEFAULT_DENOM_FLOOR, DEFAULT_EVAL_GRID, DEFAULT_LAMBDA, MIN_EVAL_GRID
from ..utils.quadrature import trapezoid_weights
from .basis import BasisExpansion, as_unit_points, eval_basis, eval_basis_deriv
from .warp import MonotoneWarp


_SCALE_GRID = np.linspace(0.0, 1.0, 1001)


@dataclass(frozen=True)
class ObjectiveConfig:
    eval_grid: int = DEFAULT_EVAL_GRID
    lam: float = DEFAULT_LAMBDA
    denom_floor: float = DEFAULT_DENOM_FLOOR

    def __post_init__(self):
        if int(self.eval_grid) < MIN_EVAL_GRID:
            raise ConfigError("objective.eval_grid", f"must be >= {MIN_EVAL_GRID}, got {self.eval_grid}")
        if not self.lam >= 0:
            raise ConfigError("objective.lambda", f"must be >= 0, got {self.lam}")
        if not self.denom_floor >= 0:
            raise ConfigError("objective.denom_floor", f"must be >= 0, got {self.denom_floor}")
        object.__setattr__(self, "eval_grid", int(self.eval_grid))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.eval_grid)


class RatioEvaluation(NamedTuple):
    ratio: Union[float, np.ndarray]
    masked: Union[bool, np.ndarray]


class ObjectiveTerms(NamedTuple):
    data: np.ndarray
    penalty: np.ndarray
    masked: np.ndarray


def dense_samples(exp: BasisExpansion) -> np.ndarray:
    """The expansion on a dense uniform grid of [0, 1]."""
    return exp.evaluate(_SCALE_GRID)


def expansion_scale(exp: BasisExpansion) -> float:
    """max |exp(s)| over a dense uniform grid; the reference for the denominator floor."""
    return float(np.max(np.abs(dense_samples(exp))))


def log_deriv_ratio(
    exp: BasisExpansion,
    t,
    floor: float = DEFAULT_DENOM_FLOOR,
    scale: Optional[float] = None,
) -> RatioEvaluation:
    """q'Psi(t) / q'Phi(t) with points whose denominator is below ``floor * scale`` masked.

    Masked points carry ratio 0.
    """
    points, scalar = as_unit_points(t)
    if scale is None:
        scale = expansion_scale(exp)
    numerator = eval_basis_deriv(exp.spec, points) @ exp.coeffs
    denominator = eval_basis(exp.spec, points) @ exp.coeffs
    masked = np.abs(denominator) < floor * scale
    ratio = np.divide(numerator, denominator, out=np.zeros_like(numerator), where=~masked)
    if scalar:
        return RatioEvaluation(float(ratio[0]), bool(masked[0]))
    return RatioEvaluation(ratio, masked)


def positivity_offset(*values: np.ndarray) -> float:
    """Offset that lifts curves crossing zero so their minimum is 10% of the joint range."""
    stacked = np.concatenate([np.ravel(v) for v in values])
    low, high = float(stacked.min()), float(stacked.max())
    if low > 0:
        return 0.0
    span = high - low
    if span == 0:
        span = 1.0
    return 0.1 * span - low


class Objective:
    """Precomputed pieces of the criterion for one (reference, target) pair."""

    def __init__(self, p: BasisExpansion, q: BasisExpansion, config: Optional[ObjectiveConfig] = None):
        self.p = p
        self.q = q
        self.config = config or ObjectiveConfig()
        self.grid = self.config.grid
        weights = trapezoid_weights(self.grid)
        self._sqrt_weights = np.sqrt(weights)
        self._sqrt_penalty = np.sqrt(self.config.lam * weights)
        self._p_scale = expansion_scale(p)
        self._q_ratio, self._q_masked = log_deriv_ratio(q, self.grid, self.config.denom_floor)
        self.masked_fraction = float(np.mean(self._q_masked))
        self.clamped = False

    def terms(self, warp: MonotoneWarp) -> ObjectiveTerms:
        h = warp.evaluate(self.grid)
        slope = warp.derivative(self.grid)
        p_ratio, p_masked = log_deriv_ratio(self.p, h, self.config.denom_floor, self._p_scale)
        masked = self._q_masked | p_masked
        rho = np.where(masked, 0.0, self._q_ratio - slope * p_ratio)
        return ObjectiveTerms(self._sqrt_weights * rho, self._sqrt_penalty * (1.0 - slope), masked)

    def residuals(self, warp: MonotoneWarp) -> np.ndarray:
        """Stacked residual vector whose squared norm equals ``criterion``."""
        terms = self.terms(warp)
        self.masked_fraction = float(np.mean(terms.masked))
        self.clamped = warp.clamped
        return np.concatenate((terms.data, terms.penalty))

    def criterion(self, warp: MonotoneWarp) -> float:
        residual = self.residuals(warp)
        return float(residual @ residual)

    def split_criterion(self, warp: MonotoneWarp) -> Tuple[float, float]:
        """(data term, penalty term) of the criterion."""
        terms = self.terms(warp)
        return float(terms.data @ terms.data), float(terms.penalty @ terms.penalty)


def residual_vector(p: BasisExpansion, q: BasisExpansion, w: MonotoneWarp, cfg: Optional[ObjectiveConfig] = None) -> np.ndarray:
    return Objective(p, q, cfg).residuals(w)


def criterion(p: BasisExpansion, q: BasisExpansion, w: MonotoneWarp, cfg: Optional[ObjectiveConfig] = None) -> float:
    return Objective(p, q, cfg).criterion(w)
