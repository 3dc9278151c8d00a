"""
Signed feature hashing of word and character n-grams.

A deterministic, parameter-free stand-in for a frozen contextual encoder:
every n-gram is hashed with seeded MurmurHash3 into one of `dim` buckets,
the hash sign decides whether it adds or subtracts, and the bucket vector is
L2-normalized.
"""

import attrs
import numpy as np
from sklearn.utils import murmurhash3_32

from common.errors import ConfigurationError
from common.tokenize import char_ngrams, tokenize_text, word_ngrams


def _orders(value) -> tuple[int, ...]:
    return tuple(int(v) for v in value)


@attrs.frozen
class FeaturizerConfig:
    """Settings of the hashed n-gram featurizer."""

    dim: int = attrs.field(default=512, converter=int)
    """Number of hash buckets (d_e); must be a power of two."""

    word_orders: tuple[int, ...] = attrs.field(default=(1, 2), converter=_orders)
    char_orders: tuple[int, ...] = attrs.field(default=(3, 4, 5), converter=_orders)
    hash_seed: int = attrs.field(default=0, converter=int)

    @dim.validator
    def _check_dim(self, attribute, value):
        if value < 1 or value & (value - 1):
            raise ConfigurationError(f"featurizer dim must be a power of two, got {value}")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "word_orders": list(self.word_orders),
            "char_orders": list(self.char_orders),
            "hash_seed": self.hash_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeaturizerConfig":
        return cls(
            dim=data["dim"],
            word_orders=data["word_orders"],
            char_orders=data["char_orders"],
            hash_seed=data["hash_seed"],
        )


def ngram_keys(text: str, cfg: FeaturizerConfig) -> list[str]:
    """Namespaced n-gram strings of `text` ("w:" word grams, "c:" char grams)."""

    tokens = tokenize_text(text)
    keys = ["w:" + g for g in word_ngrams(tokens, cfg.word_orders)]
    keys.extend("c:" + g for g in char_ngrams(tokens, cfg.char_orders))
    return keys


def featurize(text: str, cfg: FeaturizerConfig) -> np.ndarray:
    """Unit-norm hashed n-gram vector of length ``cfg.dim`` (zero vector for empty text)."""

    keys = ngram_keys(text, cfg)
    if not keys:
        return np.zeros(cfg.dim, dtype=np.float64)

    hashes = np.array([murmurhash3_32(k, seed=cfg.hash_seed) for k in keys], dtype=np.int64)
    buckets = np.abs(hashes) % cfg.dim
    signs = np.where(hashes >= 0, 1.0, -1.0)
    vec = np.bincount(buckets, weights=signs, minlength=cfg.dim).astype(np.float64)

    norm = np.linalg.norm(vec)
    if norm == 0.0:
        return vec
    return vec / norm
