"""Worker-count resolution for joblib."""

from __future__ import annotations

import logging
import os
from typing import Optional

from .constants import THREADS_ENV

logger = logging.getLogger(__name__)


def _env_cap() -> Optional[int]:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return None
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        logger.warning("Ignoring invalid %s=%r; using 1 worker.", THREADS_ENV, raw)
        return 1
    return cap


def resolve_n_jobs(n_jobs: Optional[int] = None) -> int:
    """Return the joblib worker count; ``WARPREG_THREADS`` caps any request."""
    cap = _env_cap()
    if n_jobs is None or n_jobs < 1:
        return cap or 1
    return n_jobs if cap is None else min(n_jobs, cap)
