"""
Label encoding, forward logits and decoding for coral heads.

A K-class ordinal label y becomes K-1 binary targets (bit k set iff k < y).
Heads emit logits; every decoder applies the sigmoid itself.
"""

import math

import numpy as np
from scipy.special import expit

from common.errors import ConfigurationError, DataValidationError, NumericError
from schemas.schemas import BinaryLabelVector, BinningMode, CoralHead, OrdinalLabel

CLASS_UNITS = 2
SCORE_UNITS = 4
SCORE_MIN = 1.0
SCORE_MAX = 5.0


def encode_ordinal(label: OrdinalLabel) -> BinaryLabelVector:
    """Binary decomposition of an ordinal label."""

    return BinaryLabelVector([1 if k < label.value else 0 for k in range(label.num_classes - 1)])


def ideal_logits(bits: BinaryLabelVector, magnitude: float = 40.0) -> np.ndarray:
    """Logits that saturate towards `bits`: +magnitude for ones, -magnitude for zeros."""

    return np.where(bits.as_array() > 0.5, magnitude, -magnitude)


def coral_forward(head: CoralHead, x: np.ndarray) -> np.ndarray:
    """
    Logits of every unit: ``weights . x + biases_k``.

    `x` may be a single vector or a batch of row vectors.
    """

    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != head.dim:
        raise ConfigurationError(
            f"coral head expects inputs of dim {head.dim}, got {x.shape[-1]}"
        )
    return (x @ head.weights)[..., None] + head.biases


def _checked_logits(logits, units: int, name: str) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    if logits.shape[-1] != units:
        raise ConfigurationError(f"{name} expects {units} logits, got {logits.shape[-1]}")
    if not np.all(np.isfinite(logits)):
        raise NumericError(f"{name} received non-finite logits: {logits}")
    return logits


def decode_class(logits) -> int | np.ndarray:
    """
    Class label 0..2 from the two classification logits.

    A unit counts only when its probability is strictly above 0.5, so a zero
    logit never votes.
    """

    logits = _checked_logits(logits, CLASS_UNITS, "decode_class")
    labels = np.sum(expit(logits) > 0.5, axis=-1)
    return int(labels) if labels.ndim == 0 else labels.astype(np.int64)


def decode_label(logits) -> int | np.ndarray:
    """Generic threshold decoding for a head with any number of units."""

    logits = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(logits)):
        raise NumericError(f"decode_label received non-finite logits: {logits}")
    labels = np.sum(expit(logits) > 0.5, axis=-1)
    return int(labels) if labels.ndim == 0 else labels.astype(np.int64)


def decode_score(logits) -> float | np.ndarray:
    """Continuous 1-5 plausibility score: sum of the four unit probabilities plus one."""

    logits = _checked_logits(logits, SCORE_UNITS, "decode_score")
    scores = np.sum(expit(logits), axis=-1) + 1.0
    return float(scores) if scores.ndim == 0 else scores


def expected_rank(logits) -> float | np.ndarray:
    """Sum of unit probabilities for a head with any number of units."""

    logits = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(logits)):
        raise NumericError(f"expected_rank received non-finite logits: {logits}")
    ranks = np.sum(expit(logits), axis=-1)
    return float(ranks) if ranks.ndim == 0 else ranks


def normalize_score(score: float, mode: BinningMode | str) -> OrdinalLabel:
    """
    Bin a 1-5 score into a 0-4 label.

    Round mode rounds half up (2.5 -> 3 -> label 2); floor mode floors. Both
    subtract one and clamp to 0..4.
    """

    mode = BinningMode(mode)
    score = float(score)
    if not SCORE_MIN <= score <= SCORE_MAX:
        raise DataValidationError(f"score {score} outside [{SCORE_MIN:g}, {SCORE_MAX:g}]")

    if mode is BinningMode.ROUND:
        binned = math.floor(score + 0.5) - 1
    else:
        binned = math.floor(score) - 1
    return OrdinalLabel(min(max(binned, 0), 4), 5)
