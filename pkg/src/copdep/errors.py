"""Semantic exception hierarchy.

Public functions never raise bare ValueError/RuntimeError; every contract
violation maps to one of the classes below so callers (and the CLI exit-code
mapping) can distinguish bad input from numerical failure.
"""

from __future__ import annotations


class CopdepError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(CopdepError, ValueError):
    """An argument violates a documented precondition."""


class InvalidDataError(CopdepError, ValueError):
    """Input data is malformed (non-finite values, bad CSV cells, ...)."""

    def __init__(self, message: str, column: int | str | None = None):
        super().__init__(message)
        self.column = column


class InsufficientDataError(CopdepError):
    """Too few rows to estimate anything."""


class CopulaValidationError(CopdepError):
    """A mass grid failed the copula validity checks."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class RebalanceError(CopdepError):
    """Iterative proportional fitting did not reach the target tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class DegenerateMarginalError(CopdepError):
    """A marginal slab has zero mass and cannot be rescaled."""


class IncompatibleOperandsError(CopdepError):
    """Product operands disagree on the shared coupling marginal."""


class DegenerateBoundError(CopdepError):
    """A normalizing upper bound is numerically zero."""


class EvaluationError(CopdepError):
    """A user-supplied function produced a non-finite value."""
