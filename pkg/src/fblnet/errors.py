"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FblnetError(Exception):
    """Base class for all package errors."""


class DomainError(FblnetError, ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(FblnetError, ArithmeticError):
    """Adaptive quadrature did not reach the requested accuracy.

    The best estimate and its error bound are kept so callers can decide
    whether the result is still usable.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class SeriesDivergenceError(FblnetError, ArithmeticError):
    """The Laplace-transform power series is not converging at this argument."""

    def __init__(self, message: str, last_term: float):
        super().__init__(f"{message}; use the quadrature path instead (last term magnitude {last_term:.3e})")
        self.last_term = last_term


class UnsupportedError(FblnetError, NotImplementedError):
    """The requested evaluation path does not support these parameters."""


class ConfigError(FblnetError, ValueError):
    """A sweep configuration failed to parse or validate."""
