"""Name-to-class registry of basis systems, looked up by ``BasisSpec.kind``."""

from __future__ import annotations

from typing import Dict, Type

from .base import BaseBasis


_BASIS_REGISTRY: Dict[str, Type[BaseBasis]] = {}


def register_basis(kind: str, basis_cls: Type[BaseBasis]) -> Type[BaseBasis]:
    kind = kind.lower()
    if kind in _BASIS_REGISTRY:
        raise ValueError(f"Basis kind '{kind}' already registered.")
    _BASIS_REGISTRY[kind] = basis_cls
    return basis_cls


def get_basis(kind: str) -> Type[BaseBasis]:
    try:
        return _BASIS_REGISTRY[kind.lower()]
    except KeyError:
        raise KeyError(f"Basis kind '{kind}' is not registered; known kinds: {sorted(_BASIS_REGISTRY)}") from None


def list_bases() -> Dict[str, Type[BaseBasis]]:
    return dict(_BASIS_REGISTRY)
