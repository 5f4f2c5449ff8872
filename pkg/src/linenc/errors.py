"""Exception types shared across the package.

Each class carries the CLI exit code it maps to.
"""

from __future__ import annotations


class LinencError(Exception):
    exit_code = 1


class UsageError(LinencError, ValueError):
    """Caller broke a precondition (length mismatch, bad argument)."""

    exit_code = 2


class FormatError(LinencError, ValueError):
    """Malformed matrix, codeword, or schedule input."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StructuralError(LinencError, RuntimeError):
    """A graph invariant the algorithms rely on did not hold."""

    exit_code = 3
