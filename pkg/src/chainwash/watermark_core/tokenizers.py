"""Word/punctuation tokenizers with stable cross-process token ids.

Two modes are supported. The hashed mode maps each surface token into a fixed
id range with a keyed blake2b digest and remembers surface forms so ids can be
turned back into text. The external mode reads a newline-delimited vocabulary
file where the line index is the token id.

The contract both modes satisfy: retokenizing detokenized output yields the
identical id sequence.
"""

from __future__ import annotations

import hashlib
import re
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from chainwash.errors import ConfigurationError

MODE_HASHED = "whitespace-punct-hashed"
MODE_VOCAB_FILE = "external-vocab-file"

_TOKEN_RE = re.compile(r"[a-z0-9']+|[^\sa-z0-9']")

# Punctuation that glues to the preceding token when rendering text.
_NO_SPACE_BEFORE = {".", ",", ";", ":", "!", "?", ")", "]", "}", "%"}
_NO_SPACE_AFTER = {"(", "[", "{", "$"}


@dataclass(frozen=True)
class TokenizerSpec:
    name: str
    vocab_size: int
    mode: str = MODE_HASHED

    def __post_init__(self):
        if self.vocab_size < 2:
            raise ConfigurationError("vocab_size must be >= 2")
        if self.mode not in (MODE_HASHED, MODE_VOCAB_FILE):
            raise ConfigurationError(f"unknown tokenizer mode {self.mode!r}")


@dataclass(frozen=True)
class TokenSeq:
    """Token ids plus the name of the tokenizer that produced them."""

    ids: tuple
    tokenizer: str

    def __len__(self) -> int:
        return len(self.ids)


def begin_pad_id(spec: TokenizerSpec) -> int:
    """Reserved id used to left-pad context windows; sits just past the vocabulary."""
    return spec.vocab_size


def split_words(text: str) -> list[str]:
    """Lowercase and split into word/punctuation surface tokens."""
    return _TOKEN_RE.findall(text.lower())


def join_words(words: Iterable[str]) -> str:
    parts: list[str] = []
    for w in words:
        if parts and w not in _NO_SPACE_BEFORE and parts[-1] not in _NO_SPACE_AFTER:
            parts.append(" ")
        parts.append(w)
    return "".join(parts)


def _hash_token(token: str, vocab_size: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") % vocab_size


class Tokenizer:
    """A registered tokenizer instance: spec plus surface-form tables."""

    def __init__(self, spec: TokenizerSpec, vocab: Sequence[str] | None = None):
        self.spec = spec
        self._lock = threading.Lock()
        if spec.mode == MODE_VOCAB_FILE:
            if vocab is None:
                raise ConfigurationError("external-vocab-file tokenizer needs a vocabulary")
            if len(vocab) != spec.vocab_size:
                raise ConfigurationError(
                    f"vocab file has {len(vocab)} entries, spec says {spec.vocab_size}"
                )
            self._vocab = list(vocab)
            self._str_to_id = {s: i for i, s in enumerate(self._vocab)}
            self._id_to_str: dict[int, str] = dict(enumerate(self._vocab))
        else:
            self._vocab = []
            self._str_to_id = {}
            self._id_to_str = {}

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def vocab_size(self) -> int:
        return self.spec.vocab_size

    def encode_word(self, word: str) -> int:
        if self.spec.mode == MODE_VOCAB_FILE:
            known = self._str_to_id.get(word)
            if known is not None:
                return known
            return _hash_token(word, self.vocab_size)
        tid = _hash_token(word, self.vocab_size)
        # remember a surface form so the id can be rendered back to text
        if tid not in self._id_to_str:
            with self._lock:
                self._id_to_str.setdefault(tid, word)
        return tid

    def tokenize(self, text: str) -> TokenSeq:
        ids = tuple(self.encode_word(w) for w in split_words(text))
        return TokenSeq(ids=ids, tokenizer=self.name)

    def surface(self, token_id: int) -> str:
        s = self._id_to_str.get(int(token_id))
        if s is None:
            raise ConfigurationError(
                f"token id {token_id} has no known surface form under tokenizer {self.name!r}"
            )
        return s

    def detokenize(self, tokens: TokenSeq | Iterable[int]) -> str:
        ids = tokens.ids if isinstance(tokens, TokenSeq) else tokens
        return join_words(self.surface(i) for i in ids)


_REGISTRY: dict[str, Tokenizer] = {}
_REGISTRY_LOCK = threading.Lock()


def register_tokenizer(tok: Tokenizer) -> Tokenizer:
    with _REGISTRY_LOCK:
        _REGISTRY[tok.name] = tok
    return tok


def get_tokenizer(name: str) -> Tokenizer:
    tok = _REGISTRY.get(name)
    if tok is None:
        raise ConfigurationError(f"tokenizer {name!r} is not registered")
    return tok


def builtin_tokenizer(vocab_size: int = 4096) -> Tokenizer:
    """The default hashed tokenizer, registered on first use."""
    name = f"ws-hash-{vocab_size}"
    with _REGISTRY_LOCK:
        tok = _REGISTRY.get(name)
        if tok is None:
            tok = Tokenizer(TokenizerSpec(name=name, vocab_size=vocab_size, mode=MODE_HASHED))
            _REGISTRY[name] = tok
    return tok


def load_vocab_file_tokenizer(name: str, path: str) -> Tokenizer:
    """Register a tokenizer from a newline-delimited vocab file (line index = id)."""
    try:
        with open(path, encoding="utf-8") as fh:
            vocab = [line.rstrip("\n") for line in fh]
    except OSError as exc:
        raise ConfigurationError(f"cannot read vocab file {path}: {exc}") from exc
    while vocab and vocab[-1] == "":
        vocab.pop()
    spec = TokenizerSpec(name=name, vocab_size=len(vocab), mode=MODE_VOCAB_FILE)
    return register_tokenizer(Tokenizer(spec, vocab=vocab))


def tokenize(text: str, spec: TokenizerSpec) -> TokenSeq:
    """Tokenize with a registered tokenizer matching spec.name."""
    tok = get_tokenizer(spec.name)
    if tok.spec != spec:
        raise ConfigurationError(f"registered tokenizer {spec.name!r} does not match given spec")
    return tok.tokenize(text)
