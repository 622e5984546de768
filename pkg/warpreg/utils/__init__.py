"""Utility helpers."""

from .quadrature import cumulative_exp_integral, grid_mean, integrate, integrate_up_to, trapezoid_weights
from .parallel import resolve_n_jobs
from .io import read_json, read_table, write_csv, write_json

__all__ = [
    "cumulative_exp_integral",
    "grid_mean",
    "integrate",
    "integrate_up_to",
    "trapezoid_weights",
    "resolve_n_jobs",
    "read_json",
    "read_table",
    "write_csv",
    "write_json",
]
