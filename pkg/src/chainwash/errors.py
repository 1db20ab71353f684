"""Exception hierarchy shared across the pipeline.

Domain failures raise typed errors instead of returning sentinel values so
that aggregate tables can never silently absorb NaNs or stale text.
"""

from __future__ import annotations


class ChainwashError(Exception):
    """Base class for all domain errors raised by this package."""


class ConfigurationError(ChainwashError):
    """Invalid or missing configuration: unknown tokenizer, bad manifest, unreadable prompt file."""


class ContractViolationError(ChainwashError):
    """A caller broke an operation precondition (e.g. mismatched vector lengths)."""


class TransportError(ChainwashError):
    """A remote call failed after exhausting its retry budget."""

    def __init__(self, message: str, attempts: int = 0, endpoint: str = ""):
        super().__init__(message)
        self.attempts = attempts
        self.endpoint = endpoint


class RewriteFailedError(ChainwashError):
    """A rewriter produced unusable output (e.g. empty after normalization)."""


class UndefinedMetricError(ChainwashError):
    """A metric was requested on inputs where it has no defined value."""


class DuplicateCellError(ChainwashError):
    """Attempt to append a second ok record for an already-completed grid cell."""


class StoreCorruptionError(ChainwashError):
    """A store file contains a line that does not parse as a record."""

    def __init__(self, message: str, path: str = "", line_no: int = 0):
        super().__init__(message)
        self.path = path
        self.line_no = line_no
