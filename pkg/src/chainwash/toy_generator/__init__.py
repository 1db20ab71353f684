"""Desk-scale watermarked text generation with a small n-gram surrogate model."""

from chainwash.toy_generator.corpus import (
    SUBSETS,
    default_training_corpus,
    generate_prompts,
    write_prompt_file,
)
from chainwash.toy_generator.ngram import ToyLM, train_ngram
from chainwash.toy_generator.generate import (
    GenerationConfig,
    MODE_AUTOREGRESSIVE,
    MODE_MASKED_DENOISE,
    generate_watermarked,
    sample_top_k,
)

__all__ = [
    "GenerationConfig",
    "MODE_AUTOREGRESSIVE",
    "MODE_MASKED_DENOISE",
    "SUBSETS",
    "ToyLM",
    "default_training_corpus",
    "generate_prompts",
    "generate_watermarked",
    "sample_top_k",
    "train_ngram",
    "write_prompt_file",
]
