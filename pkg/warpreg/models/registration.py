"""Pairwise and set registration of sampled curves."""

from __future__ import annotations

import logging
import warnings
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, TransformerMixin

from ..data.curves import SampledCurve, common_grid, stack_values
from ..exceptions import ConfigError, DegenerateFitWarning, DegenerateReferenceError, WarpregError
from ..utils.constants import DEFAULT_BASIS_SIZE, DEFAULT_LAMBDA, DEFAULT_QUAD_SIZE, DEFAULT_WARP_COEFFS, MASKED_WARN_FRACTION, MIN_QUAD_SIZE
from ..utils.metrics import prd
from ..utils.parallel import resolve_n_jobs
from ..utils.quadrature import integrate
from .basis import BasisExpansion, BasisSpec, fit_expansion
from .objective import Objective, ObjectiveConfig, dense_samples, positivity_offset
from .solver import SolverOptions, SolverReport, minimize
from .warp import InverseWarp, MonotoneWarp, default_warp_basis, gauge_direction, identity_warp, warp_from_coeffs

logger = logging.getLogger(__name__)

# |numerator| below this fraction of the Cauchy-Schwarz bound counts as orthogonal
_ORTHOGONAL_TOL = 1e-10
_OFFSET_ROUNDS = 4


@dataclass(frozen=True)
class RegistrationConfig:
    basis: BasisSpec = field(default_factory=lambda: BasisSpec.fourier(DEFAULT_BASIS_SIZE))
    warp_basis: BasisSpec = field(default_factory=default_warp_basis)
    objective: ObjectiveConfig = field(default_factory=ObjectiveConfig)
    solver: SolverOptions = field(default_factory=SolverOptions)
    quad_size: int = DEFAULT_QUAD_SIZE
    n_jobs: Optional[int] = None

    def __post_init__(self):
        if int(self.quad_size) < MIN_QUAD_SIZE:
            raise ConfigError("quad_size", f"must be >= {MIN_QUAD_SIZE}, got {self.quad_size}")

    def with_basis(self, kind: str, size: int) -> "RegistrationConfig":
        return replace(self, basis=BasisSpec(kind, size, self.basis.degree))

    def to_dict(self) -> dict:
        return {
            "basis": self.basis.to_dict(),
            "warp_basis": self.warp_basis.to_dict(),
            "objective": {
                "eval_grid": self.objective.eval_grid,
                "lambda": self.objective.lam,
                "denom_floor": self.objective.denom_floor,
            },
            "solver": asdict(self.solver),
            "quad_size": self.quad_size,
        }


@dataclass
class RegistrationResult:
    """Outcome of registering one target curve to a reference.

    ``warp`` is h-hat in the model y(t) ~ a * x(h(t)); ``alignment_warp``
    is its inverse, which maps the target onto the reference clock.
    ``fitted`` and ``model`` live in the offset-shifted space whenever
    ``offset`` is nonzero.
    """

    warp: MonotoneWarp
    amplitude: float
    prd: float
    criterion: float
    report: SolverReport
    aligned: SampledCurve
    offset: float = 0.0
    fitted: Optional[SampledCurve] = None
    model: Optional[SampledCurve] = None
    failed: bool = False
    error: str = ""

    @property
    def alignment_warp(self) -> InverseWarp:
        return self.warp.inverted()

    @property
    def converged(self) -> bool:
        return not self.failed and self.report.converged

    @classmethod
    def failure(cls, target: SampledCurve, exc: Exception, cfg: RegistrationConfig) -> "RegistrationResult":
        report = SolverReport(converged=False, iterations=0, final_criterion=float("nan"), message=str(exc))
        return cls(
            warp=identity_warp(cfg.warp_basis, cfg.quad_size),
            amplitude=float("nan"),
            prd=float("nan"),
            criterion=float("nan"),
            report=report,
            aligned=target,
            failed=True,
            error=f"{type(exc).__name__}: {exc}",
        )


def estimate_amplitude(y: SampledCurve, x_exp: BasisExpansion, w: MonotoneWarp) -> float:
    """Closed-form least-squares amplitude of ``y`` against x-hat(h(t)).

    Integrals use the trapezoid rule on ``y``'s own [0, 1] grid. Returns 0.0
    with a ``DegenerateFitWarning`` when ``y`` is orthogonal to the warped
    reference.
    """
    grid = y.grid
    warped = x_exp.evaluate(w.evaluate(grid))
    denominator = integrate(warped * warped, grid)
    if not denominator > 0:
        raise DegenerateReferenceError("warped reference is identically zero")
    numerator = integrate(y.values * warped, grid)
    bound = np.sqrt(integrate(y.values * y.values, grid) * denominator)
    if abs(numerator) <= _ORTHOGONAL_TOL * bound:
        warnings.warn("target is orthogonal to the warped reference; amplitude is 0", DegenerateFitWarning, stacklevel=2)
        return 0.0
    return numerator / denominator


def _fit_positive(x: SampledCurve, y: SampledCurve, basis: BasisSpec) -> Tuple[BasisExpansion, BasisExpansion, float]:
    """Fit both curves, lifting them by a common offset until samples and fits are positive."""
    offset = positivity_offset(x.values, y.values)
    for _ in range(_OFFSET_ROUNDS):
        p = fit_expansion(x.shifted(offset) if offset else x, basis)
        q = fit_expansion(y.shifted(offset) if offset else y, basis)
        extra = positivity_offset(x.values + offset, y.values + offset, dense_samples(p), dense_samples(q))
        if not extra:
            break
        offset += extra
    else:
        raise DegenerateReferenceError(f"basis fits still cross zero after an offset of {offset:.6g}")
    if offset:
        logger.warning("Curves or their fits are not strictly positive; shifting both by %.6g before fitting.", offset)
    return p, q, offset


def register_pair(x: SampledCurve, y: SampledCurve, cfg: Optional[RegistrationConfig] = None) -> RegistrationResult:
    """Register target ``y`` to reference ``x``.

    Both curves are mapped affinely onto [0, 1]; the aligned curve is
    returned on ``x``'s original grid.
    """
    cfg = cfg or RegistrationConfig()
    x_unit = x.to_unit_interval()
    y_unit = y.to_unit_interval()

    p, q, offset = _fit_positive(x_unit, y_unit, cfg.basis)
    if offset:
        x_unit = x_unit.shifted(offset)
        y_unit = y_unit.shifted(offset)
    objective = Objective(p, q, cfg.objective)

    def residuals(c: np.ndarray) -> np.ndarray:
        return objective.residuals(warp_from_coeffs(c, cfg.warp_basis, cfg.quad_size))

    gauge = gauge_direction(cfg.warp_basis, cfg.quad_size)
    coeffs, report = minimize(residuals, np.zeros(cfg.warp_basis.size), cfg.solver, gauge)
    warp = warp_from_coeffs(coeffs, cfg.warp_basis, cfg.quad_size)
    final = objective.residuals(warp)
    report.masked_fraction = objective.masked_fraction
    report.clamped_exp = warp.clamped
    if report.masked_fraction > MASKED_WARN_FRACTION:
        logger.warning("%.1f%% of the objective grid was masked by the denominator floor.", 100 * report.masked_fraction)
    if warp.clamped:
        logger.warning("Warp log-slope was clamped to +/-40; the estimate sits at the edge of the representable range.")
    if not report.converged:
        logger.warning("Solver stopped without converging: %s", report.message)

    amplitude = estimate_amplitude(y_unit, p, warp)
    if amplitude == 0.0:
        raise DegenerateReferenceError("amplitude estimate is zero; cannot rescale the target")

    fitted = SampledCurve(y.grid, q.evaluate(y_unit.grid))
    model = SampledCurve(y.grid, amplitude * p.evaluate(warp.evaluate(y_unit.grid)))
    aligned_values = np.interp(warp.inverse(x_unit.grid), y_unit.grid, y_unit.values) / amplitude - offset

    return RegistrationResult(
        warp=warp,
        amplitude=float(amplitude),
        prd=prd(fitted, model),
        criterion=float(final @ final),
        report=report,
        aligned=SampledCurve(x.grid, aligned_values),
        offset=offset,
        fitted=fitted,
        model=model,
    )


def _register_one(reference: SampledCurve, target: SampledCurve, cfg: RegistrationConfig, index: int) -> RegistrationResult:
    try:
        result = register_pair(reference, target, cfg)
    except WarpregError as exc:
        logger.warning("Curve %d failed to register: %s", index, exc)
        return RegistrationResult.failure(target, exc, cfg)
    logger.info(
        "Curve %d: amplitude=%.4f prd=%.3f%% iterations=%d",
        index,
        result.amplitude,
        result.prd,
        result.report.iterations,
    )
    return result


def register_against(
    reference: SampledCurve,
    curves: Sequence[SampledCurve],
    cfg: Optional[RegistrationConfig] = None,
    n_jobs: Optional[int] = None,
) -> List[RegistrationResult]:
    """Register every curve to ``reference``; failures are flagged, not raised."""
    cfg = cfg or RegistrationConfig()
    jobs = resolve_n_jobs(cfg.n_jobs if n_jobs is None else n_jobs)
    results = Parallel(n_jobs=jobs)(
        delayed(_register_one)(reference, curve, cfg, index) for index, curve in enumerate(curves)
    )
    failed = sum(result.failed for result in results)
    if failed:
        logger.warning("%d of %d registrations failed.", failed, len(results))
    return list(results)


def register_set(
    curves: Sequence[SampledCurve],
    ref_index: int,
    cfg: Optional[RegistrationConfig] = None,
    n_jobs: Optional[int] = None,
) -> List[RegistrationResult]:
    """Register every curve, the reference included, against ``curves[ref_index]``."""
    if not 0 <= ref_index < len(curves):
        raise ConfigError("reference", f"index {ref_index} is out of range for {len(curves)} curves")
    return register_against(curves[ref_index], curves, cfg, n_jobs)


def mean_curve(curves: Sequence[SampledCurve]) -> SampledCurve:
    """Pointwise mean of curves sharing one grid."""
    return SampledCurve(common_grid(curves), stack_values(curves).mean(axis=0))


class CurveRegistrar(BaseEstimator, TransformerMixin):
    """scikit-learn transformer that aligns rows of a curve matrix.

    Rows of ``X`` are curves sampled on a uniform grid over [0, 1].
    ``fit`` picks the reference; ``transform`` returns the aligned rows.
    """

    def __init__(
        self,
        reference: Union[int, str] = "auto-power",
        basis_kind: str = "fourier",
        basis_size: int = DEFAULT_BASIS_SIZE,
        warp_coeffs: int = DEFAULT_WARP_COEFFS,
        lam: float = DEFAULT_LAMBDA,
        n_jobs: Optional[int] = None,
    ):
        self.reference = reference
        self.basis_kind = basis_kind
        self.basis_size = basis_size
        self.warp_coeffs = warp_coeffs
        self.lam = lam
        self.n_jobs = n_jobs

    def _config(self) -> RegistrationConfig:
        return RegistrationConfig(
            basis=BasisSpec(self.basis_kind, self.basis_size),
            warp_basis=default_warp_basis(self.warp_coeffs),
            objective=ObjectiveConfig(lam=self.lam),
            n_jobs=self.n_jobs,
        )

    @staticmethod
    def _as_curves(X) -> List[SampledCurve]:
        matrix = np.asarray(X, dtype=float)
        if matrix.ndim != 2:
            raise ValueError("X must be a 2-D array of shape (n_curves, n_samples)")
        return [SampledCurve.uniform(row) for row in matrix]

    def fit(self, X, y=None):
        from .reference import select_reference_j, select_reference_power

        curves = self._as_curves(X)
        config = self._config()
        if self.reference == "auto-power":
            index = select_reference_power(curves).index
        elif self.reference == "auto-j":
            index = select_reference_j(curves, config, self.n_jobs).index
        elif isinstance(self.reference, (int, np.integer)) and 0 <= self.reference < len(curves):
            index = int(self.reference)
        else:
            raise ConfigError("reference", f"expected a curve index, 'auto-j' or 'auto-power', got {self.reference!r}")
        self.config_ = config
        self.reference_index_ = index
        self.reference_curve_ = curves[index]
        return self

    def transform(self, X):
        curves = self._as_curves(X)
        self.results_ = register_against(self.reference_curve_, curves, self.config_, self.n_jobs)
        return np.vstack([result.aligned.values for result in self.results_])
