"""Exception types raised by the orbitk core."""

from __future__ import annotations


class OrbitkError(Exception):
    """Base class for all orbitk errors."""


class DomainError(OrbitkError, ValueError):
    """An input lies outside an operation's domain."""


class ResourceLimitError(OrbitkError, MemoryError):
    """A requested table or buffer exceeds the configured budget."""

    def __init__(self, message: str, required: int | None = None) -> None:
        super().__init__(message)
        self.required = required


class ArithmeticOverflowError(OrbitkError, OverflowError):
    """A value left the unsigned 64-bit range."""


class IterationBudgetError(OrbitkError, RuntimeError):
    """An iteration bound was exhausted before the expected event."""
