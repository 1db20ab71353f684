"""Counter-based keyed randomness for green-list membership.

Python's built-in hash() is salted per process, and seeding a stateful
generator per (seed, token) pair would be far too slow for scoring, so green
membership is derived from a stateless splitmix64-style finalizer: every
(seed, token) pair maps to one uniform in [0, 1) with no sequential state.
All operations are vectorized over numpy uint64 arrays and wrap mod 2^64.
"""

from __future__ import annotations

import numpy as np

_PHI = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_TOKEN_SALT = np.uint64(0xD6E8FEB86659FD93)

MASK64 = 0xFFFFFFFFFFFFFFFF


def mix64(x: np.ndarray | int) -> np.ndarray:
    """Bijective 64-bit finalizer (splitmix64) applied elementwise.

    Accepts Python ints or uint64 arrays; always computes on uint64 arrays so
    overflow wraps silently.
    """
    z = np.asarray(x, dtype=np.uint64) + _PHI
    z = (z ^ (z >> np.uint64(30))) * _C1
    z = (z ^ (z >> np.uint64(27))) * _C2
    return z ^ (z >> np.uint64(31))


def keyed_uniform(seed: np.ndarray | int, token: np.ndarray | int) -> np.ndarray:
    """Uniform in [0, 1) for each (seed, token) pair, broadcasting like numpy.

    Both inputs pass through the finalizer before combining, so structured
    seeds (e.g. sums of small token ids) cannot align with token ids.
    """
    s = mix64(seed)
    t = mix64(np.asarray(token, dtype=np.uint64) ^ _TOKEN_SALT)
    bits = mix64(s ^ t)
    # keep the top 53 bits: exactly representable in a double
    return (bits >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def green_flags(seed: np.ndarray | int, token: np.ndarray | int, gamma: float) -> np.ndarray:
    """Boolean green-membership for (seed, token) pairs at green rate gamma."""
    return keyed_uniform(seed, token) < gamma


def premix_tokens(token: np.ndarray) -> np.ndarray:
    """Precompute the token half of keyed_uniform for a fixed candidate set."""
    return mix64(np.asarray(token, dtype=np.uint64) ^ _TOKEN_SALT)


def green_flags_premixed(seed: np.ndarray | int, premixed: np.ndarray, gamma: float) -> np.ndarray:
    """green_flags against token hashes prepared by premix_tokens."""
    bits = mix64(mix64(seed) ^ premixed)
    return (bits >> np.uint64(11)).astype(np.float64) * (2.0**-53) < gamma
