"""Registration quality metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..data.curves import SampledCurve, common_grid, stack_values
from ..exceptions import CurveFormatError, UndefinedPRDError
from .quadrature import grid_mean, integrate

_RECOVERY_GRID = np.linspace(0.0, 1.0, 1000)


def prd(yhat: SampledCurve, model: SampledCurve) -> float:
    """Percentage root-mean-square difference of ``model`` from ``yhat``."""
    if not np.array_equal(yhat.grid, model.grid):
        raise CurveFormatError("PRD needs both curves on the same grid")
    energy = integrate(yhat.values**2, yhat.grid)
    if energy == 0:
        raise UndefinedPRDError("PRD is undefined for a zero-energy curve")
    return float(100.0 * np.sqrt(integrate((yhat.values - model.values) ** 2, yhat.grid) / energy))


def warp_recovery_rmse(estimated, true_warp, grid: Optional[np.ndarray] = None) -> float:
    """Root mean square of estimated(h_true(t)) - t over ``grid``.

    Both arguments only need an ``evaluate`` method; pass the aligning map
    of a registration to check it undoes the true warp.
    """
    grid = _RECOVERY_GRID if grid is None else np.asarray(grid, dtype=float)
    warped = np.clip(true_warp.evaluate(grid), 0.0, 1.0)
    return float(np.sqrt(np.mean((np.asarray(estimated.evaluate(warped)) - grid) ** 2)))


def cross_sectional_variance(curves: Sequence[SampledCurve]) -> float:
    """Grid average of the pointwise variance (ddof=0) across curves."""
    grid = common_grid(curves)
    return grid_mean(stack_values(curves).var(axis=0), grid)


def variance_reduction(before: Sequence[SampledCurve], after: Sequence[SampledCurve]) -> Tuple[float, float]:
    return cross_sectional_variance(before), cross_sectional_variance(after)


def summarize(values: Sequence[float]) -> Dict[str, float]:
    """Mean, std, median and max of the finite entries."""
    array = np.asarray(values, dtype=float)
    array = array[np.isfinite(array)]
    if array.size == 0:
        return {"mean": float("nan"), "std": float("nan"), "median": float("nan"), "max": float("nan")}
    return {
        "mean": float(array.mean()),
        "std": float(array.std(ddof=1)) if array.size > 1 else 0.0,
        "median": float(np.median(array)),
        "max": float(array.max()),
    }


@dataclass
class EvaluationSummary:
    prd_per_curve: np.ndarray
    variance_before: float
    variance_after: float
    model_order: int
    warp_rmse_per_curve: Optional[np.ndarray] = None

    @property
    def variance_ratio(self) -> float:
        return self.variance_after / self.variance_before if self.variance_before > 0 else float("nan")

    def to_dict(self) -> Dict[str, float]:
        row: Dict[str, float] = {"model_order": self.model_order}
        row.update({f"prd_{key}": value for key, value in summarize(self.prd_per_curve).items()})
        row["variance_before"] = self.variance_before
        row["variance_after"] = self.variance_after
        row["variance_ratio"] = self.variance_ratio
        if self.warp_rmse_per_curve is not None:
            row.update({f"warp_rmse_{key}": value for key, value in summarize(self.warp_rmse_per_curve).items()})
        return row
