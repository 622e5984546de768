"""Run configuration: ``config/params.yaml`` defaults, validated run files and CLI overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .data.simulate import DatasetConfig
from .exceptions import ConfigError
from .models.basis import BasisSpec
from .models.objective import ObjectiveConfig
from .models.registration import RegistrationConfig
from .models.solver import SolverOptions
from .utils.constants import PRESETS, SWEEP_KINDS, SWEEP_ORDERS

CONFIG_PATH = Path(__file__).resolve().parents[1] / "config" / "params.yaml"
SECTIONS = ("registration", "simulation", "evaluation")


class _Schema(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class BasisSchema(_Schema):
    kind: str = "fourier"
    size: int = 30
    degree: int = 3


class ObjectiveSchema(_Schema):
    eval_grid: int = 201
    lam: float = Field(1e-2, alias="lambda")
    denom_floor: float = 1e-6


class SolverSchema(_Schema):
    max_iters: int = 500
    ftol: float = 1e-10
    xtol: float = 1e-8
    initial_damping: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 0.1
    fd_step: float = 1e-6
    max_damping: float = 1e16
    pin_first: bool = False
    multistart: int = 0
    multistart_scale: float = 0.5
    seed: int = 0


class RegistrationSchema(_Schema):
    basis: BasisSchema = Field(default_factory=BasisSchema)
    warp_basis: BasisSchema = Field(default_factory=lambda: BasisSchema(kind="bspline", size=10))
    objective: ObjectiveSchema = Field(default_factory=ObjectiveSchema)
    solver: SolverSchema = Field(default_factory=SolverSchema)
    quad_size: int = 1001
    n_jobs: Optional[int] = None


class SimulationSchema(_Schema):
    n_curves: int = 21
    n_terms: int = 2
    centers: Optional[List[float]] = None
    widths: Optional[List[float]] = None
    z_mean: float = 5.0
    z_std: float = 1.5
    warp_family: str = "F1"
    f1_b_range: Tuple[float, float] = (-1.0, 1.0)
    f2_c_set: List[int] = Field(default_factory=lambda: [0, 1, 2, 3])
    f2_b_max: float = 0.09
    f2_monotone_margin: float = 0.95
    grid_size: int = 1000
    seed: int = 0


class EvaluationSchema(_Schema):
    orders: List[int] = Field(default_factory=lambda: list(SWEEP_ORDERS))
    kinds: List[str] = Field(default_factory=lambda: list(SWEEP_KINDS))


class RunSchema(_Schema):
    registration: RegistrationSchema = Field(default_factory=RegistrationSchema)
    simulation: SimulationSchema = Field(default_factory=SimulationSchema)
    evaluation: EvaluationSchema = Field(default_factory=EvaluationSchema)


@dataclass(frozen=True)
class EvaluationSettings:
    orders: Tuple[int, ...] = SWEEP_ORDERS
    kinds: Tuple[str, ...] = SWEEP_KINDS


@dataclass(frozen=True)
class RunConfig:
    registration: RegistrationConfig = field(default_factory=RegistrationConfig)
    simulation: DatasetConfig = field(default_factory=DatasetConfig)
    evaluation: EvaluationSettings = field(default_factory=EvaluationSettings)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "registration": self.registration.to_dict(),
            "simulation": self.simulation.to_dict(),
            "evaluation": {"orders": list(self.evaluation.orders), "kinds": list(self.evaluation.kinds)},
        }

    def with_overrides(
        self,
        seed: Optional[int] = None,
        basis_order: Optional[int] = None,
        basis_kind: Optional[str] = None,
        lam: Optional[float] = None,
        warp_coeffs: Optional[int] = None,
    ) -> "RunConfig":
        """Apply command-line flags on top of the file values."""
        registration, simulation = self.registration, self.simulation
        if basis_order is not None or basis_kind is not None:
            registration = registration.with_basis(basis_kind or registration.basis.kind, basis_order or registration.basis.size)
        if lam is not None:
            registration = replace(registration, objective=replace(registration.objective, lam=lam))
        if warp_coeffs is not None:
            registration = replace(registration, warp_basis=BasisSpec(registration.warp_basis.kind, warp_coeffs, registration.warp_basis.degree))
        if seed is not None:
            simulation = simulation.with_seed(seed)
            registration = replace(registration, solver=replace(registration.solver, seed=int(seed)))
        return replace(self, registration=registration, simulation=simulation)


def _deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _read_mapping(path: Path) -> Dict[str, Any]:
    try:
        with path.open("r", encoding="utf-8") as handle:
            raw = (json.load(handle) if path.suffix == ".json" else yaml.safe_load(handle)) or {}
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(str(path), f"cannot parse: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(str(path), "top level must be a mapping")
    return raw


def load_defaults(path: Path = CONFIG_PATH) -> Dict[str, Any]:
    """Defaults from ``params.yaml``; a missing file means built-in defaults."""
    if not path.exists():
        return {}
    return _read_mapping(path)


def _expand_preset(simulation: Dict[str, Any], defaults: Dict[str, Any]) -> Dict[str, Any]:
    simulation = dict(simulation)
    name = simulation.pop("preset", None)
    if name is None:
        return _deep_merge(defaults, simulation)
    if name not in PRESETS:
        raise ConfigError("simulation.preset", f"unknown preset '{name}'; choose from {sorted(PRESETS)}")
    return {**defaults, **PRESETS[name], **simulation}


def _scoped(prefix: str, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ConfigError as exc:
        raise ConfigError(f"{prefix}.{exc.field}", exc.message) from exc


def _build(schema: RunSchema) -> RunConfig:
    reg = schema.registration
    registration = _scoped(
        "registration",
        RegistrationConfig,
        basis=_scoped("registration.basis", BasisSpec, reg.basis.kind, reg.basis.size, reg.basis.degree),
        warp_basis=_scoped("registration.warp_basis", BasisSpec, reg.warp_basis.kind, reg.warp_basis.size, reg.warp_basis.degree),
        objective=_scoped("registration", ObjectiveConfig, reg.objective.eval_grid, reg.objective.lam, reg.objective.denom_floor),
        solver=_scoped("registration", SolverOptions, **reg.solver.model_dump()),
        quad_size=reg.quad_size,
        n_jobs=reg.n_jobs,
    )
    sim = schema.simulation.model_dump()
    for key in ("centers", "widths", "f1_b_range", "f2_c_set"):
        if sim[key] is not None:
            sim[key] = tuple(sim[key])
    evaluation = EvaluationSettings(tuple(schema.evaluation.orders), tuple(k.lower() for k in schema.evaluation.kinds))
    return RunConfig(registration, DatasetConfig(**sim), evaluation)


def _sectioned(raw: Optional[Dict[str, Any]], section: str) -> Dict[str, Any]:
    raw = dict(raw or {})
    if raw and not any(key in SECTIONS for key in raw):
        raw = {section: raw}
    return raw


def resolve_config(raw: Optional[Dict[str, Any]] = None, section: str = "simulation", defaults: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Validate a run config mapping on top of the defaults.

    A mapping without any of the section keys is read as the body of
    ``section``, so a bare ``DatasetConfig`` JSON works for ``simulate``.
    """
    defaults = load_defaults() if defaults is None else defaults
    raw = _sectioned(raw, section)
    merged = _deep_merge({key: value for key, value in defaults.items() if key != "simulation"}, {k: v for k, v in raw.items() if k != "simulation"})
    merged["simulation"] = _expand_preset(raw.get("simulation", {}) or {}, defaults.get("simulation", {}) or {})
    try:
        schema = RunSchema.model_validate(merged)
    except ValidationError as exc:
        error = exc.errors()[0]
        raise ConfigError(".".join(str(part) for part in error["loc"]), error["msg"]) from exc
    return _build(schema)


def load_run_config(path: Optional[str | Path] = None, section: str = "simulation", preset: Optional[str] = None) -> RunConfig:
    """Read a JSON or YAML run file and resolve it; ``preset`` names a simulation preset."""
    raw = _sectioned(_read_mapping(Path(path)) if path is not None else {}, section)
    if preset is not None:
        raw["simulation"] = {**(raw.get("simulation") or {}), "preset": preset}
    return resolve_config(raw, section)
