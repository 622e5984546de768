"""Long-format curve tables: one row per (curve_id, t, value)."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..exceptions import CurveFormatError
from ..models.warp import SampledWarp
from ..utils.io import read_table
from .curves import SampledCurve

CURVE_COLUMNS = ("curve_id", "t", "value")


def _check_columns(frame: pd.DataFrame, columns: Sequence[str], source: str) -> None:
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise CurveFormatError(f"{source} is missing columns {missing}")


def _split(frame: pd.DataFrame) -> Dict[int, pd.DataFrame]:
    groups = {}
    for curve_id, group in frame.groupby("curve_id", sort=True):
        groups[int(curve_id)] = group.sort_values("t", kind="stable")
    return groups


def frame_to_curves(frame: pd.DataFrame, value_column: str = "value", source: str = "curve table") -> List[SampledCurve]:
    _check_columns(frame, ("curve_id", "t", value_column), source)
    if frame.empty:
        raise CurveFormatError(f"{source} has no rows")
    curves = []
    for curve_id, group in _split(frame).items():
        try:
            curves.append(SampledCurve(group["t"].to_numpy(float), group[value_column].to_numpy(float)))
        except (CurveFormatError, ValueError) as exc:
            raise CurveFormatError(f"{source}, curve {curve_id}: {exc}") from exc
    return curves


def curves_to_frame(curves: Sequence[SampledCurve], value_column: str = "value", ids: Optional[Sequence[int]] = None) -> pd.DataFrame:
    ids = list(range(len(curves))) if ids is None else list(ids)
    return pd.DataFrame(
        {
            "curve_id": np.concatenate([np.full(len(curve), curve_id) for curve_id, curve in zip(ids, curves)]),
            "t": np.concatenate([curve.grid for curve in curves]),
            value_column: np.concatenate([curve.values for curve in curves]),
        }
    )


def load_curves(path) -> List[SampledCurve]:
    """Load curves ordered by ``curve_id`` from a CSV/JSON/Parquet file."""
    return frame_to_curves(read_table(path), "value", str(path))


def load_warps(path, value_column: str = "h") -> List[SampledWarp]:
    """Load tabulated warps (``true_warps.csv`` or ``warps.csv``)."""
    frame = read_table(path)
    _check_columns(frame, ("curve_id", "t", value_column), str(path))
    return [SampledWarp(group["t"].to_numpy(float), group[value_column].to_numpy(float)) for group in _split(frame).values()]
