"""Table and JSON I/O with lossless float formatting."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pandas as pd

from ..exceptions import CurveFormatError
from .constants import CSV_FLOAT_FORMAT


SUPPORTED_EXTENSIONS = {".csv", ".json", ".parquet"}


def read_table(path: str | Path) -> pd.DataFrame:
    """Read CSV, JSON, or Parquet into a DataFrame."""
    path = Path(path)
    if path.suffix not in SUPPORTED_EXTENSIONS:
        raise CurveFormatError(f"Unsupported file type: {path.suffix}")
    if not path.exists():
        raise CurveFormatError(f"No such file: {path}")
    if path.suffix == ".csv":
        return pd.read_csv(path, float_precision="round_trip")
    if path.suffix == ".json":
        return pd.read_json(path)
    return pd.read_parquet(path)


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    """Write with 17 significant digits, LF line endings and UTF-8."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    return path


def write_json(data: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
