"""Registration of functional data by warp differential equations."""

__all__ = ["data", "models", "utils"]
__version__ = "0.1.0"
