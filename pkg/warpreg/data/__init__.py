"""Sampled curves, curve tables and synthetic datasets."""

from .curves import SampledCurve, common_grid, stack_values
from .simulate import DatasetConfig, SyntheticDataset, TrueWarp, gaussian_mixture, generate, warp_f1, warp_f2

__all__ = [
    "SampledCurve",
    "common_grid",
    "stack_values",
    "DatasetConfig",
    "SyntheticDataset",
    "TrueWarp",
    "gaussian_mixture",
    "generate",
    "warp_f1",
    "warp_f2",
]
