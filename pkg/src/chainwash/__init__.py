"""Desk-scale harness for red-green text watermarking and multi-hop rewrite attacks.

The package covers the full loop: watermarked generation with a small n-gram
surrogate model, repeated key-naive rewriting (remote chat endpoints or a
deterministic offline substituter), detector re-scoring of every hop, and
aggregate robustness metrics with CSV/SVG reports.
"""

__version__ = "0.1.0"

from chainwash.errors import (
    ChainwashError,
    ConfigurationError,
    ContractViolationError,
    DuplicateCellError,
    RewriteFailedError,
    StoreCorruptionError,
    TransportError,
    UndefinedMetricError,
)

__all__ = [
    "ChainwashError",
    "ConfigurationError",
    "ContractViolationError",
    "DuplicateCellError",
    "RewriteFailedError",
    "StoreCorruptionError",
    "TransportError",
    "UndefinedMetricError",
    "__version__",
]
