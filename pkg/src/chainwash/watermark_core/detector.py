"""Green-list derivation, logit biasing, and the binomial watermark detector.

Seeding follows the additive scheme: the seed for a position is the secret
key plus the sum of the token ids in its context window, mod 2^64, which is
deterministic and order-free within the window. Positions whose window reaches
past the start of the sequence are padded with the tokenizer's reserved
begin id, so every position is scored and n_scored equals sequence length.
"""

from __future__ import annotations

from math import exp, lgamma, log, log1p
from typing import Iterable, Sequence

import numpy as np

from chainwash.errors import ContractViolationError
from chainwash.watermark_core.params import DetectionResult, GreenMask, WatermarkParams
from chainwash.watermark_core.prng import MASK64, green_flags, keyed_uniform
from chainwash.watermark_core.tokenizers import TokenSeq, begin_pad_id, get_tokenizer


def sum_hash(context: TokenSeq | Iterable[int], key: int) -> int:
    """Seed for one position: (key + sum of context ids) mod 2^64."""
    ids = context.ids if isinstance(context, TokenSeq) else context
    return (int(key) + sum(int(i) for i in ids)) & MASK64


def window_seeds(ids: np.ndarray, key: int, window: int, pad_id: int) -> np.ndarray:
    """Per-position seeds over a whole sequence via sliding window sums."""
    ids = np.asarray(ids, dtype=np.uint64)
    n = ids.shape[0]
    ext = np.concatenate([np.full(window, pad_id, dtype=np.uint64), ids[: max(n - 1, 0)]])
    cs = np.zeros(ext.shape[0] + 1, dtype=np.uint64)
    np.cumsum(ext, dtype=np.uint64, out=cs[1:])
    return np.uint64(key & MASK64) + (cs[window : window + n] - cs[:n])


def derive_green_mask(seed: int, gamma: float, vocab_size: int) -> GreenMask:
    """Bernoulli(gamma) membership for every token id under one seed."""
    if not 0.0 < gamma < 1.0:
        raise ContractViolationError(f"gamma must lie in (0, 1), got {gamma}")
    flags = green_flags(np.uint64(seed & MASK64), np.arange(vocab_size, dtype=np.uint64), gamma)
    return GreenMask(membership=flags)


def apply_bias(logits: Sequence[float] | np.ndarray, mask: GreenMask | np.ndarray, delta: float) -> np.ndarray:
    """Add delta to every green entry; red entries pass through unchanged."""
    out = np.asarray(logits, dtype=np.float64)
    membership = mask.membership if isinstance(mask, GreenMask) else np.asarray(mask, dtype=bool)
    if out.shape != membership.shape:
        raise ContractViolationError(
            f"logits shape {out.shape} does not match mask shape {membership.shape}"
        )
    if delta == 0.0:
        return out.copy()
    return out + delta * membership


def binomial_p_value(n: int, k: int, gamma: float) -> float:
    """Exact one-sided upper tail P[K >= k] for K ~ Binomial(n, gamma).

    Summed in log space around the largest tail term so that tiny tails keep
    full precision and large counts cannot overflow. Returns 1.0 when there is
    no evidence (n == 0 or k == 0).
    """
    if not 0 <= k <= n:
        raise ContractViolationError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not 0.0 < gamma < 1.0:
        raise ContractViolationError(f"gamma must lie in (0, 1), got {gamma}")
    if n == 0 or k == 0:
        return 1.0
    # anchor at the largest term of the tail: the pmf mode clamped into [k, n]
    j0 = min(n, max(k, int((n + 1) * gamma)))
    log_t0 = (
        lgamma(n + 1)
        - lgamma(j0 + 1)
        - lgamma(n - j0 + 1)
        + j0 * log(gamma)
        + (n - j0) * log1p(-gamma)
    )
    odds = gamma / (1.0 - gamma)
    total = 1.0
    f = 1.0
    for j in range(j0, n):  # upward terms t_{j+1}/t_j
        f *= (n - j) / (j + 1) * odds
        total += f
        if f < total * 1e-18:
            break
    f = 1.0
    for j in range(j0 - 1, k - 1, -1):  # downward terms t_j/t_{j+1}
        f *= (j + 1) / ((n - j) * odds)
        total += f
        if f < total * 1e-18:
            break
    p = exp(log_t0) * total
    return p if p < 1.0 else 1.0


def score_ids(ids: Sequence[int] | np.ndarray, params: WatermarkParams, pad_id: int) -> DetectionResult:
    """Score a raw id sequence; pad_id fills context windows before position 0."""
    ids = np.asarray(ids, dtype=np.uint64)
    n = int(ids.shape[0])
    if n == 0:
        return DetectionResult(n_scored=0, n_green=0, g_hat=0.0, p_value=1.0, detected=False)
    seeds = window_seeds(ids, params.key, params.context_window, pad_id)
    greens = green_flags(seeds, ids, params.gamma)
    k = int(greens.sum())
    p = binomial_p_value(n, k, params.gamma)
    return DetectionResult(
        n_scored=n,
        n_green=k,
        g_hat=k / n,
        p_value=p,
        detected=p < params.p_threshold,
    )


def score_text(tokens: TokenSeq, params: WatermarkParams) -> DetectionResult:
    """Score a TokenSeq, deriving the begin pad from its tokenizer."""
    tok = get_tokenizer(tokens.tokenizer)
    return score_ids(np.asarray(tokens.ids, dtype=np.uint64), params, begin_pad_id(tok.spec))
