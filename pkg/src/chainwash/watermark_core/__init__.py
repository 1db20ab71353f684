"""Key-seeded green lists, logit biasing, tokenization, and the binomial detector."""

from chainwash.watermark_core.params import DetectionResult, GreenMask, WatermarkParams
from chainwash.watermark_core.prng import green_flags, keyed_uniform, mix64
from chainwash.watermark_core.tokenizers import (
    TokenSeq,
    Tokenizer,
    TokenizerSpec,
    begin_pad_id,
    builtin_tokenizer,
    get_tokenizer,
    load_vocab_file_tokenizer,
    register_tokenizer,
    tokenize,
)
from chainwash.watermark_core.detector import (
    apply_bias,
    binomial_p_value,
    derive_green_mask,
    score_ids,
    score_text,
    sum_hash,
    window_seeds,
)

__all__ = [
    "DetectionResult",
    "GreenMask",
    "TokenSeq",
    "Tokenizer",
    "TokenizerSpec",
    "WatermarkParams",
    "apply_bias",
    "begin_pad_id",
    "binomial_p_value",
    "builtin_tokenizer",
    "derive_green_mask",
    "get_tokenizer",
    "green_flags",
    "keyed_uniform",
    "load_vocab_file_tokenizer",
    "mix64",
    "register_tokenizer",
    "score_ids",
    "score_text",
    "sum_hash",
    "tokenize",
    "window_seeds",
]
