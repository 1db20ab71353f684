"""Core parameter and result types for watermark embedding and detection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chainwash.errors import ContractViolationError

_MAX_KEY = 2**64


@dataclass(frozen=True)
class WatermarkParams:
    """Secret key plus the knobs shared by generation-time biasing and detection.

    gamma is the green-list rate, delta the logit boost added to green tokens,
    context_window the number of preceding tokens hashed into each position's
    seed, top_k the candidate cutoff used during generation, and p_threshold
    the binary detection threshold on the one-sided binomial p-value.
    """

    key: int
    gamma: float = 0.25
    delta: float = 3.0
    context_window: int = 1
    top_k: int = 50
    p_threshold: float = 0.05

    def __post_init__(self):
        if not 0 <= self.key < _MAX_KEY:
            raise ContractViolationError("key must be an unsigned 64-bit integer")
        if not 0.0 < self.gamma < 1.0:
            raise ContractViolationError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.delta < 0:
            raise ContractViolationError(f"delta must be non-negative, got {self.delta}")
        if self.context_window < 1:
            raise ContractViolationError("context_window must be >= 1")
        if self.top_k < 1:
            raise ContractViolationError("top_k must be >= 1")
        if not 0.0 < self.p_threshold < 1.0:
            raise ContractViolationError("p_threshold must lie in (0, 1)")


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of scoring one token sequence against one key."""

    n_scored: int
    n_green: int
    g_hat: float
    p_value: float
    detected: bool

    def __post_init__(self):
        if self.n_green > self.n_scored:
            raise ContractViolationError("n_green cannot exceed n_scored")
        if not 0.0 <= self.g_hat <= 1.0:
            raise ContractViolationError("g_hat must lie in [0, 1]")


@dataclass
class GreenMask:
    """Boolean green-membership vector over a full vocabulary."""

    membership: np.ndarray

    def __post_init__(self):
        self.membership = np.asarray(self.membership, dtype=bool)

    def __len__(self) -> int:
        return int(self.membership.shape[0])

    def green_fraction(self) -> float:
        return float(self.membership.mean()) if len(self) else 0.0
