"""Bases, warps, the registration criterion, its solver and the registration pipeline."""

from .base import BaseBasis
from .registry import register_basis, get_basis, list_bases
from .bases import BSplineBasis, FourierBasis
from .basis import (
    BasisExpansion,
    BasisSpec,
    eval_basis,
    eval_basis_deriv,
    eval_expansion,
    eval_expansion_deriv,
    fit_expansion,
)
from .warp import InverseWarp, MonotoneWarp, SampledWarp, gauge_direction, identity_warp, warp_deriv, warp_eval, warp_from_coeffs, warp_inverse
from .objective import Objective, ObjectiveConfig, criterion, positivity_offset, residual_vector
from .solver import SolverOptions, SolverReport, fd_jacobian, minimize
from .registration import (
    CurveRegistrar,
    RegistrationConfig,
    RegistrationResult,
    estimate_amplitude,
    mean_curve,
    register_against,
    register_pair,
    register_set,
)
from .reference import ReferenceChoice, select_reference_j, select_reference_power
from .evaluator import evaluate_alignment, evaluate_run, prd_by_order

__all__ = [
    "BaseBasis",
    "register_basis",
    "get_basis",
    "list_bases",
    "BSplineBasis",
    "FourierBasis",
    "BasisExpansion",
    "BasisSpec",
    "eval_basis",
    "eval_basis_deriv",
    "eval_expansion",
    "eval_expansion_deriv",
    "fit_expansion",
    "InverseWarp",
    "MonotoneWarp",
    "SampledWarp",
    "gauge_direction",
    "identity_warp",
    "warp_deriv",
    "warp_eval",
    "warp_from_coeffs",
    "warp_inverse",
    "Objective",
    "ObjectiveConfig",
    "criterion",
    "positivity_offset",
    "residual_vector",
    "SolverOptions",
    "SolverReport",
    "fd_jacobian",
    "minimize",
    "CurveRegistrar",
    "RegistrationConfig",
    "RegistrationResult",
    "estimate_amplitude",
    "mean_curve",
    "register_against",
    "register_pair",
    "register_set",
    "ReferenceChoice",
    "select_reference_j",
    "select_reference_power",
    "evaluate_alignment",
    "evaluate_run",
    "prd_by_order",
]
