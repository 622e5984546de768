"""Evaluation of registration runs and basis-order sweeps."""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..data.curves import SampledCurve
from ..utils.constants import SWEEP_KINDS, SWEEP_ORDERS
from ..utils.metrics import EvaluationSummary, summarize, variance_reduction, warp_recovery_rmse
from .registration import RegistrationConfig, RegistrationResult, register_set

logger = logging.getLogger(__name__)


def evaluate_alignment(
    before: Sequence[SampledCurve],
    after: Sequence[SampledCurve],
    prd_values: Sequence[float],
    model_order: int,
    aligning_warps: Optional[Sequence] = None,
    true_warps: Optional[Sequence] = None,
) -> EvaluationSummary:
    """Summarise an alignment from its curves, PRDs and (optionally) warps.

    ``aligning_warps`` map each target onto the reference clock; with
    ``true_warps`` (reference-relative) they give the recovery RMSE.
    """
    variance_before, variance_after = variance_reduction(before, after)
    rmse = None
    if aligning_warps is not None and true_warps is not None:
        rmse = np.array(
            [np.nan if est is None else warp_recovery_rmse(est, truth) for est, truth in zip(aligning_warps, true_warps)]
        )
    return EvaluationSummary(
        prd_per_curve=np.asarray(prd_values, dtype=float),
        variance_before=variance_before,
        variance_after=variance_after,
        model_order=model_order,
        warp_rmse_per_curve=rmse,
    )


def evaluate_run(
    curves: Sequence[SampledCurve],
    results: Sequence[RegistrationResult],
    cfg: RegistrationConfig,
    true_warps: Optional[Sequence] = None,
) -> EvaluationSummary:
    """Summary of ``register_set`` output; failed curves are left out of the RMSE."""
    return evaluate_alignment(
        curves,
        [result.aligned for result in results],
        [result.prd for result in results],
        cfg.basis.size,
        [None if result.failed else result.alignment_warp for result in results],
        true_warps,
    )


def prd_by_order(
    curves: Sequence[SampledCurve],
    ref_index: int,
    cfg: Optional[RegistrationConfig] = None,
    orders: Sequence[int] = SWEEP_ORDERS,
    kinds: Sequence[str] = SWEEP_KINDS,
) -> pd.DataFrame:
    """Re-register the set for each basis kind and order; one row per pair."""
    cfg = cfg or RegistrationConfig()
    rows: List[dict] = []
    for kind in kinds:
        for order in orders:
            results = register_set(curves, ref_index, cfg.with_basis(kind, order))
            stats = summarize([result.prd for result in results])
            rows.append(
                {
                    "kind": kind,
                    "order": int(order),
                    "prd_median": stats["median"],
                    "prd_mean": stats["mean"],
                    "n_failed": sum(result.failed for result in results),
                }
            )
            logger.info("%s order %d: median PRD %.3f%%", kind, order, stats["median"])
    return pd.DataFrame(rows, columns=["kind", "order", "prd_median", "prd_mean", "n_failed"])
