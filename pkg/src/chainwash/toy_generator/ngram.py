"""Add-one-smoothed n-gram language model over a tokenizer's observed support.

The model only ever assigns probability to token ids seen in its training
corpus (its support); smoothing spreads mass across that support rather than
the full hashed id space, so every sampleable id has a known surface form.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from chainwash.errors import ConfigurationError
from chainwash.watermark_core.tokenizers import TokenizerSpec, begin_pad_id, get_tokenizer


@dataclass
class ToyLM:
    order: int
    support: np.ndarray                      # sorted unique token ids
    counts: dict                             # context tuple -> count vector over support
    vocab: TokenizerSpec
    _log_cond_cache: dict = field(default_factory=dict, repr=False)
    _marginal: np.ndarray | None = field(default=None, repr=False)
    _mixed_log_cond: np.ndarray | None = field(default=None, repr=False)
    _expected_green: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def support_size(self) -> int:
        return int(self.support.shape[0])

    @property
    def context_len(self) -> int:
        return self.order - 1

    def conditional(self, ctx: tuple) -> np.ndarray:
        """Smoothed next-token distribution over the support for one context."""
        counts = self.counts.get(ctx)
        v = self.support_size
        if counts is None:
            return np.full(v, 1.0 / v)
        sm = counts + 1.0
        return sm / sm.sum()

    def log_conditional(self, ctx: tuple) -> np.ndarray:
        cached = self._log_cond_cache.get(ctx)
        if cached is None:
            cached = np.log(self.conditional(ctx))
            with self._lock:
                self._log_cond_cache.setdefault(ctx, cached)
        return cached

    def marginal(self) -> np.ndarray:
        """Smoothed unigram distribution over the support."""
        if self._marginal is None:
            totals = np.zeros(self.support_size)
            for vec in self.counts.values():
                totals += vec
            totals += 1.0
            self._marginal = totals / totals.sum()
        return self._marginal

    def mixed_log_conditional(self) -> np.ndarray:
        """log of the marginal-weighted mixture of bigram conditionals.

        Used when the immediately preceding position is still masked. Only
        meaningful for order 2; higher orders back off instead.
        """
        if self._mixed_log_cond is None:
            m = self.marginal()
            mix = np.full(self.support_size, 0.0)
            for i, cid in enumerate(self.support):
                mix += m[i] * self.conditional((int(cid),))
            self._mixed_log_cond = np.log(mix / mix.sum())
        return self._mixed_log_cond


def train_ngram(corpus: Sequence[str], order: int, spec: TokenizerSpec) -> ToyLM:
    """Count n-grams over a tokenized corpus; deterministic given inputs."""
    if not corpus:
        raise ConfigurationError("training corpus is empty")
    if not 1 <= order <= 4:
        raise ConfigurationError(f"order must lie in [1, 4], got {order}")
    tok = get_tokenizer(spec.name)
    pad = begin_pad_id(spec)
    ctx_len = order - 1

    seqs = [tok.tokenize(text).ids for text in corpus]
    seen: set[int] = set()
    for ids in seqs:
        seen.update(ids)
    if not seen:
        raise ConfigurationError("training corpus tokenized to nothing")
    support = np.array(sorted(seen), dtype=np.uint64)
    index = {int(t): i for i, t in enumerate(support)}

    counts: dict[tuple, np.ndarray] = {}
    v = support.shape[0]
    for ids in seqs:
        padded = (pad,) * ctx_len + ids
        for i in range(len(ids)):
            ctx = padded[i : i + ctx_len]
            vec = counts.get(ctx)
            if vec is None:
                vec = np.zeros(v)
                counts[ctx] = vec
            vec[index[padded[i + ctx_len]]] += 1.0
    return ToyLM(order=order, support=support, counts=counts, vocab=spec)
