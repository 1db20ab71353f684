"""Watermarked sampling from a ToyLM: autoregressive and masked-denoise modes.

Both modes add the green-list bias to the model's log-probabilities before
top-k sampling. The masked mode commits positions block by block, in random
order inside the active block; when the context of a position is still masked,
the bias falls back to the expected green probability under the model's
unconditional marginal, and the model distribution falls back to the
marginal-weighted mixture of conditionals.

Sampling also refuses to re-use a (seed, token) pair already realized inside
the same sequence (unless every candidate would be excluded). Natural text
rarely repeats context/token pairs; without this guard the surrogate's
repetitions would correlate green counts across positions and miscalibrate
the detector's false-positive rate on unwatermarked output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import ceil

import numpy as np

from chainwash.errors import ContractViolationError
from chainwash.watermark_core.params import WatermarkParams
from chainwash.watermark_core.prng import MASK64, green_flags_premixed, keyed_uniform, premix_tokens
from chainwash.watermark_core.tokenizers import TokenSeq, begin_pad_id
from chainwash.toy_generator.ngram import ToyLM

MODE_AUTOREGRESSIVE = "autoregressive"
MODE_MASKED_DENOISE = "masked-denoise"


@dataclass(frozen=True)
class GenerationConfig:
    length: int = 300
    steps: int = 300
    block_length: int = 25
    temperature: float = 0.5
    mode: str = MODE_AUTOREGRESSIVE
    rng_seed: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise ContractViolationError("length must be >= 1")
        if self.block_length < 1 or self.block_length > self.length:
            raise ContractViolationError("need 1 <= block_length <= length")
        if self.temperature <= 0:
            raise ContractViolationError("temperature must be positive")
        if self.mode not in (MODE_AUTOREGRESSIVE, MODE_MASKED_DENOISE):
            raise ContractViolationError(f"unknown generation mode {self.mode!r}")
        if self.steps < ceil(self.length / self.block_length):
            raise ContractViolationError("steps must cover at least one step per block")

    @property
    def n_blocks(self) -> int:
        return ceil(self.length / self.block_length)


def sample_top_k(logits, k: int, temperature: float, rng: np.random.Generator) -> int:
    """Sample an index from softmax(logits/temperature) over the k largest logits."""
    if k < 1:
        raise ContractViolationError("k must be >= 1")
    if temperature <= 0:
        raise ContractViolationError("temperature must be positive")
    logits = np.asarray(logits, dtype=np.float64)
    k = min(k, logits.shape[0])
    cand = np.argpartition(logits, logits.shape[0] - k)[-k:]
    return int(_softmax_pick(logits[cand], temperature, rng, cand))


def _softmax_pick(vals: np.ndarray, temperature: float, rng: np.random.Generator, idx: np.ndarray) -> int:
    z = vals / temperature
    z = z - z.max()
    w = np.exp(z)
    c = np.cumsum(w)
    r = rng.random() * c[-1]
    j = int(np.searchsorted(c, r, side="right"))
    return int(idx[min(j, len(idx) - 1)])


class _PairGuard:
    """Tracks realized (seed, token) pairs within one sequence."""

    def __init__(self):
        self._by_seed: dict[int, set[int]] = {}

    def add(self, seed: int, token: int) -> None:
        self._by_seed.setdefault(seed, set()).add(token)

    def used(self, seed: int) -> set[int] | None:
        return self._by_seed.get(seed)

    def pair_used(self, seed: int, token: int) -> bool:
        s = self._by_seed.get(seed)
        return s is not None and token in s


def _pick_candidate(
    biased: np.ndarray,
    support: np.ndarray,
    k: int,
    temperature: float,
    rng: np.random.Generator,
    left_excluded: set[int] | None,
    right_check,
) -> int:
    """Top-k sample over support logits, skipping already-used pairs when possible."""
    kk = min(k, biased.shape[0])
    cand = np.argpartition(biased, biased.shape[0] - kk)[-kk:]
    if left_excluded or right_check is not None:
        vals = biased[cand].copy()
        any_kept = False
        for i, ci in enumerate(cand):
            tid = int(support[ci])
            drop = bool(left_excluded and tid in left_excluded)
            if not drop and right_check is not None:
                drop = right_check(tid)
            if drop:
                vals[i] = -np.inf
            else:
                any_kept = True
        if any_kept:
            return int(_softmax_pick(vals, temperature, rng, cand))
    return int(_softmax_pick(biased[cand], temperature, rng, cand))


def _expected_green(lm: ToyLM, key: int, gamma: float) -> np.ndarray:
    """P(token green) per support token when the previous token is unknown,
    weighted by the model marginal. Cached per (key, gamma) on the model."""
    cache_key = (key, gamma)
    vec = lm._expected_green.get(cache_key)
    if vec is None:
        seeds = np.uint64(key & MASK64) + lm.support
        u = keyed_uniform(seeds[:, None], lm.support[None, :])
        vec = lm.marginal() @ (u < gamma)
        with lm._lock:
            lm._expected_green.setdefault(cache_key, vec)
    return vec


def _premixed_support(lm: ToyLM) -> np.ndarray:
    pre = getattr(lm, "_premixed_support", None)
    if pre is None:
        pre = premix_tokens(lm.support)
        lm._premixed_support = pre
    return pre


def _distribute(total: int, parts: int) -> list[int]:
    base, rem = divmod(total, parts)
    return [base + 1 if i < rem else base for i in range(parts)]


def generate_watermarked(
    lm: ToyLM,
    prompt: TokenSeq,
    wm: WatermarkParams,
    cfg: GenerationConfig,
    _trace: list | None = None,
) -> TokenSeq:
    """Generate cfg.length watermarked tokens conditioned on the prompt."""
    if prompt.tokenizer != lm.vocab.name:
        raise ContractViolationError(
            f"prompt tokenizer {prompt.tokenizer!r} does not match model tokenizer {lm.vocab.name!r}"
        )
    rng = np.random.default_rng(cfg.rng_seed & MASK64)
    if cfg.mode == MODE_AUTOREGRESSIVE:
        ids = _generate_autoregressive(lm, prompt, wm, cfg, rng, _trace)
    else:
        ids = _generate_masked(lm, prompt, wm, cfg, rng, _trace)
    return TokenSeq(ids=tuple(int(i) for i in ids), tokenizer=lm.vocab.name)


def _lm_context_start(lm: ToyLM, prompt: TokenSeq) -> deque:
    pad = begin_pad_id(lm.vocab)
    ctx = deque(maxlen=lm.context_len) if lm.context_len else deque(maxlen=0)
    if lm.context_len:
        padded = (pad,) * lm.context_len + tuple(prompt.ids)
        ctx.extend(padded[-lm.context_len :])
    return ctx


def _generate_autoregressive(lm, prompt, wm, cfg, rng, trace) -> list[int]:
    pad = begin_pad_id(lm.vocab)
    pre = _premixed_support(lm)
    sup = lm.support
    guard = _PairGuard()
    lm_ctx = _lm_context_start(lm, prompt)
    wm_ctx = deque([pad] * wm.context_window, maxlen=wm.context_window)
    out: list[int] = []
    k = min(wm.top_k, lm.support_size)
    for i in range(cfg.length):
        logp = lm.log_conditional(tuple(lm_ctx))
        seed = (wm.key + sum(wm_ctx)) & MASK64
        if wm.delta != 0.0:
            greens = green_flags_premixed(np.uint64(seed), pre, wm.gamma)
            biased = logp + wm.delta * greens
        else:
            biased = logp
        ci = _pick_candidate(biased, sup, k, cfg.temperature, rng, guard.used(seed), None)
        tid = int(sup[ci])
        guard.add(seed, tid)
        out.append(tid)
        if lm.context_len:
            lm_ctx.append(tid)
        wm_ctx.append(tid)
        if trace is not None:
            trace.append(i)
    return out


def _masked_lm_logits(lm: ToyLM, window: list) -> np.ndarray:
    """Model log-probs for a context that may contain masked (None) slots."""
    if all(v is not None for v in window):
        return lm.log_conditional(tuple(window))
    if lm.order == 2:
        return lm.mixed_log_conditional()
    # higher orders with masked slots: fall back to the marginal
    return np.log(lm.marginal())


def _generate_masked(lm, prompt, wm, cfg, rng, trace) -> list[int]:
    pad = begin_pad_id(lm.vocab)
    pre = _premixed_support(lm)
    sup = lm.support
    guard = _PairGuard()
    L = cfg.length
    seq: list = [None] * L
    k = min(wm.top_k, lm.support_size)
    w = wm.context_window

    # committed tokens immediately left of position 0: the model conditions on
    # the prompt tail, while the watermark window is begin-padded exactly like
    # the detector's view of the standalone output
    depth = lm.context_len
    left_ext = ((pad,) * depth + tuple(prompt.ids))[-depth:] if depth else ()

    def lm_committed_at(pos: int):
        if pos < 0:
            return left_ext[depth + pos] if depth + pos >= 0 else pad
        return seq[pos]

    def wm_committed_at(pos: int):
        return pad if pos < 0 else seq[pos]

    exp_green = _expected_green(lm, wm.key, wm.gamma) if wm.delta != 0.0 else None

    blocks = []
    for b in range(cfg.n_blocks):
        lo = b * cfg.block_length
        blocks.append((lo, min(lo + cfg.block_length, L)))
    steps_per_block = _distribute(cfg.steps, cfg.n_blocks)

    for (lo, hi), n_steps in zip(blocks, steps_per_block):
        order = rng.permutation(np.arange(lo, hi))
        fills_per_step = _distribute(hi - lo, min(n_steps, hi - lo))
        cursor = 0
        for step_fill in fills_per_step:
            for p in order[cursor : cursor + step_fill]:
                p = int(p)
                lm_window = [lm_committed_at(p - j) for j in range(lm.context_len, 0, -1)]
                logp = _masked_lm_logits(lm, lm_window)

                wm_window = [wm_committed_at(p - j) for j in range(w, 0, -1)]
                seed = None
                if all(v is not None for v in wm_window):
                    seed = (wm.key + sum(wm_window)) & MASK64
                if wm.delta != 0.0:
                    if seed is not None:
                        bias = wm.delta * green_flags_premixed(np.uint64(seed), pre, wm.gamma)
                    elif w == 1:
                        bias = wm.delta * exp_green
                    else:
                        bias = wm.delta * _mc_expected_green(lm, wm, wm_window, rng)
                    biased = logp + bias
                else:
                    biased = logp

                left_excl = guard.used(seed) if (w == 1 and seed is not None) else None
                right_check = None
                if w == 1 and p + 1 < L and seq[p + 1] is not None:
                    right_check = _make_right_check(guard, wm.key, int(seq[p + 1]))

                ci = _pick_candidate(biased, sup, k, cfg.temperature, rng, left_excl, right_check)
                tid = int(sup[ci])
                seq[p] = tid
                if w == 1:
                    if seed is not None:
                        guard.add(seed, tid)
                    if p + 1 < L and seq[p + 1] is not None:
                        guard.add((wm.key + tid) & MASK64, int(seq[p + 1]))
                if trace is not None:
                    trace.append(p)
            cursor += step_fill
    return [int(t) for t in seq]


def _make_right_check(guard: _PairGuard, key: int, right_tok: int):
    def check(tid: int) -> bool:
        return guard.pair_used((key + tid) & MASK64, right_tok)

    return check


def _mc_expected_green(lm: ToyLM, wm: WatermarkParams, window: list, rng, n_draws: int = 32) -> np.ndarray:
    """Monte-Carlo expected green probability for windows wider than one token."""
    known = sum(int(v) for v in window if v is not None)
    n_masked = sum(1 for v in window if v is None)
    draws = rng.choice(lm.support_size, size=(n_draws, n_masked), p=lm.marginal())
    sums = lm.support[draws.reshape(-1)].reshape(n_draws, n_masked).sum(axis=1, dtype=np.uint64)
    seeds = np.uint64((wm.key + known) & MASK64) + sums
    flags = green_flags_premixed(seeds[:, None], _premixed_support(lm)[None, :], wm.gamma)
    return flags.mean(axis=0)
