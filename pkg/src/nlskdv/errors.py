"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid configuration value, file, or initial/boundary data."""


class OutOfRangeError(ValueError):
    """Argument outside the supported evaluation range."""


class QuadratureConvergenceError(RuntimeError):
    """An adaptive quadrature failed to reach its tolerance within its cap."""


class BlowUpError(RuntimeError):
    """Non-finite field values detected during time stepping.

    This is a flagged physical/numerical outcome, not a programming error:
    the run is halted and the halt time recorded.
    """

    def __init__(self, t: float):
        super().__init__(f"non-finite field values at t = {t:.6g}")
        self.t = t
