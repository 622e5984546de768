"""Choosing the reference curve of a set."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..data.curves import SampledCurve
from ..exceptions import ReferenceSelectionError
from ..utils.quadrature import grid_mean, integrate_up_to
from .registration import RegistrationConfig, register_set

logger = logging.getLogger(__name__)

J_CRITERION = "j_criterion"
HALF_POWER_MEDIAN = "half_power_median"

# candidates whose J differs from the minimum by less than this are tied
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class ReferenceChoice:
    index: int
    method: str
    scores: np.ndarray
    excluded: Tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "method": self.method,
            "scores": [None if not np.isfinite(s) else float(s) for s in self.scores],
            "excluded": list(self.excluded),
        }


def select_reference_j(
    curves: Sequence[SampledCurve],
    cfg: Optional[RegistrationConfig] = None,
    n_jobs: Optional[int] = None,
) -> ReferenceChoice:
    """Pick the curve whose registration needs the least total warping.

    For each candidate j every curve is registered against curves[j] and
    J_j is the grid mean of sum_i (h_i(t) - t)^2 over the successful
    registrations, divided by their count. N candidates cost N^2
    registrations. Candidates with more than half of their registrations
    failed are excluded; excluded candidates score +inf.
    """
    cfg = cfg or RegistrationConfig()
    n = len(curves)
    if n < 2:
        raise ReferenceSelectionError(f"the J criterion needs at least two curves, got {n}")
    grid = cfg.objective.grid
    scores = np.full(n, np.inf)
    excluded = []
    for j in range(n):
        results = register_set(curves, j, cfg, n_jobs)
        succeeded = [result for result in results if not result.failed]
        if n - len(succeeded) > 0.5 * n:
            logger.warning("Excluding candidate %d: %d of %d registrations failed.", j, n - len(succeeded), n)
            excluded.append(j)
            continue
        deviation = sum((result.warp.evaluate(grid) - grid) ** 2 for result in succeeded) / len(succeeded)
        scores[j] = grid_mean(deviation, grid)
        logger.info("Candidate %d: J=%.6e", j, scores[j])

    if not np.any(np.isfinite(scores)):
        raise ReferenceSelectionError("every candidate reference was excluded")
    best = scores.min()
    index = int(np.flatnonzero(scores <= best + _TIE_TOL)[0])
    return ReferenceChoice(index, J_CRITERION, scores, tuple(excluded))


def half_interval_power(curve: SampledCurve) -> float:
    """Integral of y^2 over the first half of the curve's domain."""
    start, stop = curve.domain
    return integrate_up_to(curve.values**2, curve.grid, start + 0.5 * (stop - start))


def select_reference_power(curves: Sequence[SampledCurve]) -> ReferenceChoice:
    """Pick the curve whose half-interval power is the (lower) median."""
    if not curves:
        raise ReferenceSelectionError("no curves to choose from")
    powers = np.array([half_interval_power(curve) for curve in curves])
    order = np.argsort(powers, kind="stable")
    index = int(order[(len(powers) - 1) // 2])
    return ReferenceChoice(index, HALF_POWER_MEDIAN, powers)
