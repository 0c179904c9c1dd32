"""Exceptions raised by the toolkit.

Every error derives from :class:`FugledeError` and from the builtin that
best describes it, so callers can catch either.
"""

from typing import Optional


class FugledeError(Exception):
    """Base class for toolkit errors."""


class InvalidHadamardError(FugledeError, ValueError):
    """A matrix failed the Hadamard row-agreement check."""

    def __init__(self, source_id: str, message: Optional[str] = None):
        self.source_id = source_id
        super().__init__(message or f"not a Hadamard matrix: {source_id}")


class MalformedLineError(FugledeError, ValueError):
    """A catalog line has the wrong length or an illegal character."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class OrderMismatchError(FugledeError, ValueError):
    """A parsed block does not have the expected order."""


class EmptyInputError(FugledeError, ValueError):
    """The input contained no matrix block."""


class UnknownCatalogOrderError(FugledeError, ValueError):
    """No catalog files are known for the requested order."""

    def __init__(self, order: int):
        self.order = order
        super().__init__(f"no such catalog order: {order}")


class NetworkUnreachableError(FugledeError, RuntimeError):
    """The catalog could not be downloaded and no local copy exists."""


class ChecksumError(FugledeError, ValueError):
    """A cached catalog file does not match its manifest hash."""


class PointOutOfRangeError(FugledeError, ValueError):
    """A point does not fit in d bits."""


class DimensionTooLargeError(FugledeError, ValueError):
    """The brute-force oracles only run for small dimensions."""


class InvalidCaseError(FugledeError, ValueError):
    """An enumeration or verification case is not supported."""


class CheckpointError(FugledeError, RuntimeError):
    """The checkpoint database could not be read or does not match the run."""


class WitnessError(FugledeError, AssertionError):
    """A witness produced by the search failed its independent recheck."""
