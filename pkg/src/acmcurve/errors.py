"""Exception types raised across the package."""

from __future__ import annotations


class AcmCurveError(Exception):
    """Base class for all package errors."""


class DimensionError(AcmCurveError, ValueError):
    """Operands live in different ambient rings or have incompatible shapes."""


class CharacteristicError(AcmCurveError, ValueError):
    """The prime is too small for the degrees involved (or not prime)."""


class GenericityError(AcmCurveError):
    """Random choices failed to be general within the rejection budget."""

    def __init__(self, message: str, stage: str | None = None, attempts: int = 0):
        super().__init__(message)
        self.stage = stage
        self.attempts = attempts


class EmptySystemError(AcmCurveError, ValueError):
    """A linear system with no members was asked for a member."""


class FeasibilityError(AcmCurveError):
    """A computation would exceed its dense-matrix or degree budget."""


class NonIsolatedSingularityError(AcmCurveError):
    """The Jacobian scheme of a plane curve has positive dimension."""


class ParseError(AcmCurveError, ValueError):
    """Malformed polynomial or ideal text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
