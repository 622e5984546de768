"""Exception hierarchy for the warpreg package."""

from __future__ import annotations


class WarpregError(Exception):
    """Base class for every error raised by warpreg."""


class DomainError(WarpregError, ValueError):
    """An argument lies outside the unit interval."""


class IllPosedFitError(WarpregError, ValueError):
    """The basis design matrix cannot be fitted uniquely."""


class WarpError(WarpregError, ValueError):
    """A monotone warp cannot be built from the given coefficients."""


class NonMonotoneWarpError(WarpregError, ValueError):
    """Closed-form warp parameters that break monotonicity on [0, 1]."""


class SolverError(WarpregError, RuntimeError):
    """The least-squares solver cannot proceed."""


class DegenerateReferenceError(WarpregError, ValueError):
    """The warped reference vanishes, so no amplitude can be estimated."""


class UndefinedPRDError(WarpregError, ValueError):
    """PRD is undefined for a zero-energy curve."""


class ReferenceSelectionError(WarpregError, RuntimeError):
    """No candidate reference curve survived selection."""


class CurveFormatError(WarpregError, ValueError):
    """A curve table is malformed or the curves do not share a grid."""


class ConfigError(WarpregError, ValueError):
    """Invalid configuration value."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class DegenerateFitWarning(UserWarning):
    """Amplitude estimate is zero because the curves are orthogonal."""
