"""Exception types shared across the package."""

from __future__ import annotations


class CrunchError(Exception):
    """Base class for all package errors."""


class ValidationError(CrunchError, ValueError):
    """An input violated a documented invariant.

    ``key`` names the offending field when there is one, so front ends can
    report it back to the user.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class ConfigFormatError(CrunchError):
    """A configuration document could not be parsed at all."""


class BracketError(CrunchError, ArithmeticError):
    """The objective does not change sign on the supplied bracket."""


class ConvergenceError(CrunchError, ArithmeticError):
    """A root search exhausted its iteration budget."""
