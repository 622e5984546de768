"""Base class for basis systems."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional, Sequence, Tuple

import numpy as np


class BaseBasis(ABC):
    """Interface every registered basis system implements.

    ``values`` and ``derivatives`` take a 1-D array of points already checked
    to lie in [0, 1] and return a (len(t), size) design matrix.
    """

    name: str
    convention: str = ""

    def __init__(self, size: int, degree: int, knots: Optional[Tuple[float, ...]]):
        self.size = size
        self.degree = degree
        self.knots = knots

    @classmethod
    @abstractmethod
    def resolve_knots(cls, size: int, degree: int, knots: Optional[Sequence[float]]) -> Optional[Tuple[float, ...]]:
        raise NotImplementedError

    @abstractmethod
    def values(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def derivatives(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError
