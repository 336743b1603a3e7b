"""
Exception hierarchy for the measures library.

The CLI maps these onto exit codes; library code only raises.
"""
from __future__ import annotations

from typing import Optional


class MeasureError(Exception):
    """Base class for all library errors."""


class ValidationError(MeasureError, ValueError):
    """An input violates a stated invariant. The message names the bound."""


class UnsupportedDimensionError(ValidationError):
    """Input dimensions exceed what an evaluator is built for."""


class SupportError(MeasureError):
    """The support of a witness state does not contain the support of rho."""


class StateFileError(MeasureError):
    """
    A state or spec document could not be parsed.

    Args:
        message: What went wrong
        line: 1-based line of a JSON syntax error, if known
        column: 1-based column of a JSON syntax error, if known
        field: Document field that is missing or malformed, if known
    """

    def __init__(self, message: str,
                 line: Optional[int] = None,
                 column: Optional[int] = None,
                 field: Optional[str] = None):
        self.line = line
        self.column = column
        self.field = field
        super().__init__(message)

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if self.field is not None:
            where.append(f"field '{self.field}'")
        msg = super().__str__()
        return f"{', '.join(where)}: {msg}" if where else msg
