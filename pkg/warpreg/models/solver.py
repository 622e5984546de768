"""Levenberg-Marquardt minimiser with a central-difference Jacobian."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from ..exceptions import ConfigError, SolverError

logger = logging.getLogger(__name__)

ResidualFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 500
    ftol: float = 1e-10
    xtol: float = 1e-8
    initial_damping: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 0.1
    fd_step: float = 1e-6
    max_damping: float = 1e16
    # fix c_0 = 0 instead of leaving the constant-shift direction to damping
    pin_first: bool = False
    multistart: int = 0
    multistart_scale: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise ConfigError("solver.max_iters", f"must be >= 1, got {self.max_iters}")
        for name in ("ftol", "xtol", "initial_damping", "fd_step", "max_damping", "multistart_scale"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"solver.{name}", f"must be positive, got {getattr(self, name)}")
        if not self.damping_up > 1:
            raise ConfigError("solver.damping_up", f"must be > 1, got {self.damping_up}")
        if not 0 < self.damping_down < 1:
            raise ConfigError("solver.damping_down", f"must lie in (0, 1), got {self.damping_down}")
        if int(self.multistart) < 0:
            raise ConfigError("solver.multistart", f"must be >= 0, got {self.multistart}")


@dataclass
class SolverReport:
    converged: bool
    iterations: int
    final_criterion: float
    criterion_history: List[float] = field(default_factory=list)
    masked_fraction: float = 0.0
    clamped_exp: bool = False
    message: str = ""
    n_evaluations: int = 0


class _CountingResidual:
    def __init__(self, residual_fn: ResidualFn):
        self.residual_fn = residual_fn
        self.count = 0

    def __call__(self, c: np.ndarray) -> np.ndarray:
        self.count += 1
        return np.asarray(self.residual_fn(c), dtype=float)


def _is_finite(residual: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(residual)))


def fd_jacobian(residual_fn: ResidualFn, c: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian; column k perturbs c_k by step * max(1, |c_k|).

    A non-finite residual at a perturbed point halves that column's step once
    before giving up.
    """
    c = np.asarray(c, dtype=float)
    columns = []
    for k in range(c.size):
        delta = step * max(1.0, abs(c[k]))
        for _ in range(2):
            plus, minus = c.copy(), c.copy()
            plus[k] += delta
            minus[k] -= delta
            r_plus = np.asarray(residual_fn(plus), dtype=float)
            r_minus = np.asarray(residual_fn(minus), dtype=float)
            if _is_finite(r_plus) and _is_finite(r_minus):
                break
            delta *= 0.5
        else:
            raise SolverError(f"residual is not finite around coefficient {k}")
        columns.append((r_plus - r_minus) / (plus[k] - minus[k]))
    return np.column_stack(columns)


def _marquardt_scale(normal: np.ndarray) -> np.ndarray:
    scale = np.diag(normal).copy()
    top = scale.max(initial=0.0)
    if top <= 0:
        return np.ones_like(scale)
    return np.maximum(scale, 1e-12 * top)


def _project_out(vector: np.ndarray, direction: np.ndarray | None) -> np.ndarray:
    if direction is None:
        return vector
    return vector - direction * (direction @ vector)


def _levenberg_marquardt(
    residual_fn: ResidualFn,
    c0: np.ndarray,
    free: np.ndarray,
    opts: SolverOptions,
    direction: np.ndarray | None = None,
) -> Tuple[np.ndarray, SolverReport]:
    c = c0.copy()
    residual = residual_fn(c)
    if not _is_finite(residual):
        raise SolverError("residual is not finite at the starting coefficients")
    cost = float(residual @ residual)
    history = [cost]
    damping = opts.initial_damping
    iterations = 0
    converged, message = False, "maximum iterations reached"

    def free_residual(x: np.ndarray) -> np.ndarray:
        full = c.copy()
        full[free] = x
        return residual_fn(full)

    while iterations < opts.max_iters and not converged:
        if cost == 0.0:
            converged, message = True, "zero residual"
            break
        jacobian = fd_jacobian(free_residual, c[free], opts.fd_step)
        gradient = jacobian.T @ residual
        if not np.any(gradient):
            converged, message = True, "zero gradient"
            break
        normal = jacobian.T @ jacobian
        scale = _marquardt_scale(normal)
        accepted = False
        while damping <= opts.max_damping:
            try:
                step = _project_out(-np.linalg.solve(normal + damping * np.diag(scale), gradient), direction)
            except np.linalg.LinAlgError:
                damping *= opts.damping_up
                continue
            if np.linalg.norm(step) <= opts.xtol * (np.linalg.norm(c[free]) + 1.0):
                converged, message = True, "step below xtol"
                break
            trial = c.copy()
            trial[free] += step
            trial_residual = residual_fn(trial)
            trial_cost = float(trial_residual @ trial_residual) if _is_finite(trial_residual) else np.inf
            if trial_cost < cost:
                decrease = cost - trial_cost
                c, residual, previous, cost = trial, trial_residual, cost, trial_cost
                history.append(cost)
                iterations += 1
                damping *= opts.damping_down
                accepted = True
                logger.debug("iteration %d: criterion %.6e, damping %.1e", iterations, cost, damping)
                if decrease <= opts.ftol * previous:
                    converged, message = True, "relative decrease below ftol"
                break
            damping *= opts.damping_up
        if not accepted and not converged:
            message = "no decrease at maximum damping"
            break

    report = SolverReport(
        converged=converged,
        iterations=iterations,
        final_criterion=cost,
        criterion_history=history,
        message=message,
    )
    return c, report


def minimize(
    residual_fn: ResidualFn,
    c0: np.ndarray,
    opts: SolverOptions | None = None,
    gauge: np.ndarray | None = None,
) -> Tuple[np.ndarray, SolverReport]:
    """Minimise ||residual_fn(c)||^2 starting from ``c0``.

    Accepted steps strictly decrease the criterion, so the result is never
    worse than ``c0``. ``gauge`` names a direction the residual does not
    depend on; steps and multistart perturbations are kept orthogonal to it,
    so the iterate never drifts along it. With ``pin_first`` the start slides
    along ``gauge`` until c_0 = 0, which leaves the criterion unchanged; with
    no gauge c_0 is simply reset and the guarantee holds for the reset start.
    Raises ``SolverError`` if the residual at ``c0`` is not finite.
    """
    opts = opts or SolverOptions()
    counted = _CountingResidual(residual_fn)
    start = np.array(c0, dtype=float).ravel()
    free = np.ones(start.size, dtype=bool)
    direction = None
    if gauge is not None:
        direction = np.array(gauge, dtype=float).ravel()
        if direction.shape != start.shape or not np.linalg.norm(direction) > 0:
            raise SolverError(f"gauge must be a nonzero vector of length {start.size}")
        direction = direction / np.linalg.norm(direction)
    if opts.pin_first and start.size > 1:
        free[0] = False
        if direction is not None and abs(direction[0]) > 1e-12:
            start = start - start[0] / direction[0] * direction
        start[0] = 0.0
        direction = None

    best_c, best = _levenberg_marquardt(counted, start, free, opts, direction)
    if opts.multistart:
        rng = np.random.Generator(np.random.PCG64(opts.seed))
        for attempt in range(opts.multistart):
            noise = _project_out(rng.normal(scale=opts.multistart_scale, size=start.size) * free, direction)
            try:
                candidate_c, candidate = _levenberg_marquardt(counted, start + noise, free, opts, direction)
            except SolverError as exc:
                logger.debug("multistart %d skipped: %s", attempt, exc)
                continue
            if candidate.final_criterion < best.final_criterion:
                best_c, best = candidate_c, candidate
    best.n_evaluations = counted.count
    return best_c, best
