"""Synthetic Gaussian-mixture curves with known F1/F2 time warps."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ConfigError, NonMonotoneWarpError
from ..utils.constants import (
    F1_B_RANGE,
    F2_B_MAX,
    F2_C_SET,
    F2_MONOTONE_MARGIN,
    GRID_SIZE,
    MIXTURE_CENTERS,
    MIXTURE_WIDTHS,
    N_CURVES,
    PRESETS,
    WARP_FAMILIES,
    Z_MEAN,
    Z_STD,
)
from .curves import SampledCurve

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_BISECTION_STEPS = 60
_MAX_REDRAWS = 10_000


def gaussian_mixture(z: Sequence[float], centers: Sequence[float], widths: Sequence[float], t: ArrayLike) -> ArrayLike:
    """sum_k z_k exp(-(t - t_k)^2 / (2 b_k^2))."""
    z = np.asarray(z, dtype=float)
    centers = np.asarray(centers, dtype=float)
    widths = np.asarray(widths, dtype=float)
    if not (z.shape == centers.shape == widths.shape) or z.ndim != 1:
        raise ConfigError("widths", "coefficients, centres and widths must have the same length")
    if np.any(widths <= 0):
        raise ConfigError("widths", "Gaussian widths must be positive")
    points = np.asarray(t, dtype=float)
    bumps = np.exp(-((points[..., None] - centers) ** 2) / (2.0 * widths**2))
    values = bumps @ z
    return float(values) if np.ndim(values) == 0 else values


def warp_f1(b: float, t: ArrayLike) -> ArrayLike:
    """Quadratic warp t + b t (1 - t); monotone for |b| <= 1."""
    if abs(b) > 1:
        raise NonMonotoneWarpError(f"F1 warp needs |b| <= 1, got b={b}")
    t = np.asarray(t, dtype=float)
    values = t + b * t * (1.0 - t)
    return float(values) if values.ndim == 0 else values


def warp_f2(b: float, c: int, t: ArrayLike) -> ArrayLike:
    """Sinusoidal warp t + b sin(2 pi c t); strictly monotone for |2 pi c b| < 1."""
    if abs(2.0 * np.pi * c * b) >= 1:
        raise NonMonotoneWarpError(f"F2 warp needs |2*pi*c*b| < 1, got b={b}, c={c}")
    t = np.asarray(t, dtype=float)
    values = t + b * np.sin(2.0 * np.pi * c * t)
    return float(values) if values.ndim == 0 else values


@dataclass(frozen=True)
class TrueWarp:
    """Closed-form ground-truth warp of one simulated curve."""

    family: str
    b: float = 0.0
    c: int = 0

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        if self.family == "F1":
            return warp_f1(self.b, t)
        if self.family == "F2":
            return warp_f2(self.b, self.c, t)
        return np.asarray(t, dtype=float) if np.ndim(t) else float(t)

    def derivative(self, t: ArrayLike) -> ArrayLike:
        t = np.asarray(t, dtype=float)
        if self.family == "F1":
            values = 1.0 + self.b * (1.0 - 2.0 * t)
        elif self.family == "F2":
            values = 1.0 + 2.0 * np.pi * self.c * self.b * np.cos(2.0 * np.pi * self.c * t)
        else:
            values = np.ones_like(t)
        return float(values) if values.ndim == 0 else values

    def inverse(self, y: ArrayLike) -> ArrayLike:
        y = np.asarray(y, dtype=float)
        if self.family == "F1" and self.b != 0:
            # stable root of b t^2 - (1 + b) t + y = 0 inside [0, 1]
            denominator = (1.0 + self.b) + np.sqrt(np.maximum((1.0 + self.b) ** 2 - 4.0 * self.b * y, 0.0))
            values = np.divide(2.0 * y, denominator, out=np.zeros_like(y), where=denominator > 0)
        elif self.family == "F2" and self.c != 0 and self.b != 0:
            low = np.zeros_like(y)
            high = np.ones_like(y)
            for _ in range(_BISECTION_STEPS):
                middle = 0.5 * (low + high)
                above = warp_f2(self.b, self.c, middle) >= y
                high = np.where(above, middle, high)
                low = np.where(above, low, middle)
            values = 0.5 * (low + high)
        else:
            values = y
        return float(values) if values.ndim == 0 else values

    def relative_to(self, reference: "TrueWarp") -> "RelativeWarp":
        """The warp carrying the reference curve onto this one: h_ref^{-1} o h."""
        return RelativeWarp(reference, self)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RelativeWarp:
    reference: TrueWarp
    warp: TrueWarp

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        return self.reference.inverse(self.warp.evaluate(t))

    def inverse(self, y: ArrayLike) -> ArrayLike:
        return self.warp.inverse(self.reference.evaluate(y))


@dataclass(frozen=True)
class DatasetConfig:
    n_curves: int = N_CURVES
    n_terms: int = 2
    centers: Optional[Tuple[float, ...]] = None
    widths: Optional[Tuple[float, ...]] = None
    z_mean: float = Z_MEAN
    z_std: float = Z_STD
    warp_family: str = "F1"
    f1_b_range: Tuple[float, float] = F1_B_RANGE
    f2_c_set: Tuple[int, ...] = F2_C_SET
    f2_b_max: float = F2_B_MAX
    f2_monotone_margin: float = F2_MONOTONE_MARGIN
    grid_size: int = GRID_SIZE
    seed: int = 0

    def __post_init__(self):
        if self.n_curves < 1:
            raise ConfigError("simulation.n_curves", f"must be >= 1, got {self.n_curves}")
        if self.n_terms < 1:
            raise ConfigError("simulation.n_terms", f"must be >= 1, got {self.n_terms}")
        centers = self.centers if self.centers is not None else MIXTURE_CENTERS.get(self.n_terms)
        widths = self.widths if self.widths is not None else MIXTURE_WIDTHS.get(self.n_terms)
        if centers is None or len(centers) != self.n_terms:
            raise ConfigError("simulation.centers", f"need {self.n_terms} centres")
        if widths is None or len(widths) != self.n_terms:
            raise ConfigError("simulation.widths", f"need {self.n_terms} widths")
        if any(w <= 0 for w in widths):
            raise ConfigError("simulation.widths", "widths must be positive")
        if not self.z_std >= 0:
            raise ConfigError("simulation.z_std", f"must be >= 0, got {self.z_std}")
        family = "none" if str(self.warp_family).lower() == "none" else str(self.warp_family).upper()
        if family not in WARP_FAMILIES:
            raise ConfigError("simulation.warp_family", f"expected one of {WARP_FAMILIES}, got {self.warp_family!r}")
        low, high = self.f1_b_range
        if not -1 <= low <= high <= 1:
            raise ConfigError("simulation.f1_b_range", f"must satisfy -1 <= low <= high <= 1, got {self.f1_b_range}")
        if not self.f2_c_set or any(int(c) != c or c < 0 for c in self.f2_c_set):
            raise ConfigError("simulation.f2_c_set", "must be a non-empty set of non-negative integers")
        if not self.f2_b_max > 0:
            raise ConfigError("simulation.f2_b_max", f"must be positive, got {self.f2_b_max}")
        if not 0 < self.f2_monotone_margin < 1:
            raise ConfigError("simulation.f2_monotone_margin", f"must lie in (0, 1), got {self.f2_monotone_margin}")
        if self.grid_size < 2:
            raise ConfigError("simulation.grid_size", f"must be >= 2, got {self.grid_size}")
        object.__setattr__(self, "centers", tuple(float(v) for v in centers))
        object.__setattr__(self, "widths", tuple(float(v) for v in widths))
        object.__setattr__(self, "warp_family", family)
        object.__setattr__(self, "f1_b_range", (float(low), float(high)))
        object.__setattr__(self, "f2_c_set", tuple(int(c) for c in self.f2_c_set))

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "DatasetConfig":
        try:
            preset = PRESETS[name]
        except KeyError as exc:
            raise ConfigError("simulation.preset", f"unknown preset '{name}'; choose from {sorted(PRESETS)}") from exc
        return cls(**{**preset, **overrides})

    def with_seed(self, seed: int) -> "DatasetConfig":
        return replace(self, seed=int(seed))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_size)

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("centers", "widths", "f1_b_range", "f2_c_set"):
            data[key] = list(data[key])
        return data


@dataclass
class SyntheticDataset:
    curves: List[SampledCurve]
    true_warps: List[TrueWarp]
    coeffs: np.ndarray
    config: DatasetConfig

    def __len__(self) -> int:
        return len(self.curves)

    def relative_warps(self, ref_index: int) -> List[RelativeWarp]:
        """Ground truth for registering every curve against ``curves[ref_index]``."""
        reference = self.true_warps[ref_index]
        return [warp.relative_to(reference) for warp in self.true_warps]


def _draw_f2_b(rng: np.random.Generator, c: int, config: DatasetConfig) -> float:
    for _ in range(_MAX_REDRAWS):
        b = float(rng.uniform(-config.f2_b_max, config.f2_b_max))
        if abs(2.0 * np.pi * c * b) < config.f2_monotone_margin:
            return b
    raise ConfigError("simulation.f2_b_max", f"cannot draw a monotone F2 warp for c={c}")


def _true_warps(rng: np.random.Generator, config: DatasetConfig) -> List[TrueWarp]:
    if config.warp_family == "F1":
        return [TrueWarp("F1", float(b)) for b in np.linspace(*config.f1_b_range, config.n_curves)]
    if config.warp_family == "F2":
        warps = []
        for index in range(config.n_curves):
            c = config.f2_c_set[index % len(config.f2_c_set)]
            warps.append(TrueWarp("F2", _draw_f2_b(rng, c, config), c))
        return warps
    return [TrueWarp("none") for _ in range(config.n_curves)]


def generate(config: Optional[DatasetConfig] = None) -> SyntheticDataset:
    """Draw a reproducible dataset.

    The PCG64 stream is consumed in a fixed order: mixture coefficients
    first, then F2 warp parameters.
    """
    config = config or DatasetConfig()
    rng = np.random.Generator(np.random.PCG64(config.seed))
    coeffs = rng.normal(config.z_mean, config.z_std, size=(config.n_curves, config.n_terms))
    warps = _true_warps(rng, config)
    grid = config.grid

    curves = []
    for index, (z, warp) in enumerate(zip(coeffs, warps)):
        values = gaussian_mixture(z, config.centers, config.widths, warp.evaluate(grid))
        if np.min(values) <= 0:
            logger.warning("Simulated curve %d is not strictly positive (min %.3g).", index, np.min(values))
        curves.append(SampledCurve(grid, values))

    logger.info(
        "Generated %d %s curves with %d Gaussian terms (seed %d).",
        config.n_curves,
        config.warp_family,
        config.n_terms,
        config.seed,
    )
    return SyntheticDataset(curves, warps, coeffs, config)
