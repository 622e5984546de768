"""Tests for PRD, warp recovery and the run summaries."""

import numpy as np
import pytest

from warpreg.data.curves import SampledCurve
from warpreg.data.simulate import DatasetConfig, RelativeWarp, TrueWarp, generate
from warpreg.exceptions import CurveFormatError, UndefinedPRDError
from warpreg.models.evaluator import evaluate_alignment, prd_by_order
from warpreg.models.reference import select_reference_power
from warpreg.models.registration import RegistrationConfig
from warpreg.utils.metrics import (
    EvaluationSummary,
    cross_sectional_variance,
    prd,
    summarize,
    variance_reduction,
    warp_recovery_rmse,
)

from conftest import GRID, periodic_shape


class TestPRD:
    def test_perfect_model(self, periodic_curve):
        assert prd(periodic_curve, periodic_curve) == 0.0

    def test_zero_model(self, periodic_curve):
        zero = SampledCurve(GRID, np.zeros_like(GRID))
        assert prd(periodic_curve, zero) == pytest.approx(100.0)

    def test_scale_invariant(self, periodic_curve):
        model = SampledCurve(GRID, periodic_shape(GRID) + 0.1)
        assert prd(periodic_curve.scaled(3.0), model.scaled(3.0)) == pytest.approx(prd(periodic_curve, model))

    def test_zero_energy(self, periodic_curve):
        zero = SampledCurve(GRID, np.zeros_like(GRID))
        with pytest.raises(UndefinedPRDError):
            prd(zero, periodic_curve)

    def test_grid_mismatch(self, periodic_curve):
        with pytest.raises(CurveFormatError):
            prd(periodic_curve, SampledCurve.from_function(periodic_shape, size=500))


def test_recovery_rmse_of_identity_estimate():
    rmse = warp_recovery_rmse(TrueWarp("none"), TrueWarp("F1", 1.0))
    assert rmse == pytest.approx(np.sqrt(1.0 / 30.0), rel=2e-3)


def test_recovery_rmse_of_exact_inverse():
    warp = TrueWarp("F1", 0.4)
    assert warp_recovery_rmse(RelativeWarp(warp, TrueWarp("none")), warp) < 1e-12


def test_variance_reduction(periodic_curve):
    before = [periodic_curve.scaled(s) for s in (0.5, 1.0, 1.5)]
    after = [periodic_curve] * 3
    variance_before, variance_after = variance_reduction(before, after)
    assert variance_after == pytest.approx(0.0, abs=1e-24)
    assert variance_before == pytest.approx(cross_sectional_variance(before))
    assert variance_before > 0


def test_summarize_ignores_nan():
    stats = summarize([1.0, np.nan, 3.0, 2.0])
    assert stats == {"mean": 2.0, "std": 1.0, "median": 2.0, "max": 3.0}
    assert np.isnan(summarize([np.nan])["median"])


def test_summary_row(periodic_curve):
    curves = [periodic_curve.scaled(s) for s in (0.9, 1.1)]
    summary = evaluate_alignment(curves, [periodic_curve] * 2, [0.5, 1.5], 30, [TrueWarp("none")] * 2, [TrueWarp("none")] * 2)
    row = summary.to_dict()
    assert row["model_order"] == 30
    assert row["prd_median"] == 1.0
    assert row["variance_ratio"] == pytest.approx(0.0, abs=1e-20)
    assert row["warp_rmse_max"] == pytest.approx(0.0, abs=1e-12)


def test_summary_without_truth():
    summary = EvaluationSummary(np.array([1.0]), 2.0, 1.0, 10)
    assert summary.variance_ratio == 0.5
    assert not any(key.startswith("warp_rmse") for key in summary.to_dict())


SWEEP = (10, 15, 20, 30, 35, 40, 45)


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["fourier", "bspline"])
def test_prd_falls_with_basis_order(kind):
    per_seed = []
    for seed in range(10):
        dataset = generate(DatasetConfig(n_curves=7, n_terms=1, seed=seed))
        ref = select_reference_power(dataset.curves).index
        table = prd_by_order(dataset.curves, ref, RegistrationConfig(), orders=SWEEP, kinds=(kind,))
        assert list(table.columns) == ["kind", "order", "prd_median", "prd_mean", "n_failed"]
        assert (table["n_failed"] == 0).all()
        per_seed.append(table["prd_median"].to_numpy())
    medians = np.median(np.array(per_seed), axis=0)
    # weakly decreasing up to solver stopping noise
    assert np.all(medians[1:] <= medians[:-1] * 1.02)
    assert medians[-1] <= 0.5 * medians[0]
    assert 0.5 <= medians[0] <= 6.0
