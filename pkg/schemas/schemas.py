"""
Defines schemas/contracts to use inside of and between packages.
"""

import re
from enum import Enum
from typing import Iterator, Optional, Sequence

import attrs
import numpy as np

from common.errors import ConfigurationError, DataValidationError

PLACEHOLDER = "[FILLER]"
"""Literal marking the blank in the `sentence` column."""

_ID_SUFFIX_RE = re.compile(r"^(.*)_(\d+)$")


class ResolvedPattern(Enum):
    """
    Relationship between the fillers and their context.
    """

    IMPLICIT_REFERENCE = "IMPLICIT REFERENCE"
    """Filler makes an implicit reference explicit."""

    ADDED_COMPOUND = "ADDED COMPOUND"
    """Filler adds a modifier forming a compound."""

    METONYMIC_REFERENCE = "METONYMIC REFERENCE"
    """Filler resolves a metonymy."""

    FUSED_HEAD = "FUSED HEAD"
    """Filler supplies the head of a fused-head construction."""

    @classmethod
    def parse(cls, text: str) -> "ResolvedPattern":
        key = " ".join((text or "").replace("_", " ").split()).upper()
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown resolved pattern {text!r}")


class PlausibilityClass(Enum):
    """
    Subtask A label, ordered from least to most plausible.
    """

    IMPLAUSIBLE = 0
    NEUTRAL = 1
    PLAUSIBLE = 2

    @property
    def display(self) -> str:
        return self.name.capitalize()

    @classmethod
    def parse(cls, text: str) -> "PlausibilityClass":
        """Accept class names case-insensitively, or the integer codes 0/1/2."""

        key = (text or "").strip()
        if key.isdigit() and int(key) in {m.value for m in cls}:
            return cls(int(key))
        try:
            return cls[key.upper()]
        except KeyError:
            raise ValueError(f"unknown class label {text!r}") from None


class BinningMode(Enum):
    """How a 1-5 plausibility score is turned into a 0-4 ordinal label."""

    ROUND = "round"
    FLOOR = "floor"


class PoolingMode(Enum):
    """Which parts of the filler representation feed the projection layer."""

    CONCAT = "concat"
    """Whole-context vector followed by the filler vector."""

    FILLER_ONLY = "filler_only"
    """Filler vector alone."""


# ------------------------------------
# Ordinal types
# ------------------------------------


def _check_num_classes(instance, attribute, value):
    if value < 2:
        raise ConfigurationError(f"num_classes must be >= 2, got {value}")


@attrs.frozen
class OrdinalLabel:
    """A class index together with the number of ordered classes."""

    value: int = attrs.field(converter=int)
    num_classes: int = attrs.field(converter=int, validator=_check_num_classes)

    @value.validator
    def _check_value(self, attribute, value):
        if not 0 <= value <= self.num_classes - 1:
            raise ConfigurationError(
                f"label {value} outside 0..{self.num_classes - 1}"
            )


def _to_bits(bits: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(b) for b in bits)


@attrs.frozen
class BinaryLabelVector:
    """
    K-1 binary targets of an ordinal label: bit k is 1 iff k < label.

    The bits are always a run of ones followed by a run of zeros.
    """

    bits: tuple[int, ...] = attrs.field(converter=_to_bits)

    @bits.validator
    def _check_bits(self, attribute, value):
        if any(b not in (0, 1) for b in value):
            raise ConfigurationError(f"bits must be 0/1, got {value}")
        if any(value[k] < value[k + 1] for k in range(len(value) - 1)):
            raise ConfigurationError(f"bits must be non-increasing, got {value}")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def label(self) -> int:
        """Number of leading ones, i.e. the source label."""

        return sum(self.bits)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.float64)


def _as_vector(value) -> np.ndarray:
    arr = np.array(value, dtype=np.float64)
    if arr.ndim != 1:
        raise ConfigurationError(f"expected a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError("vector contains non-finite entries")
    return arr


@attrs.frozen(eq=False)
class CoralHead:
    """
    Ordinal output layer: one weight vector shared by all K-1 units, one bias per unit.
    """

    weights: np.ndarray = attrs.field(converter=_as_vector)
    biases: np.ndarray = attrs.field(converter=_as_vector)

    @biases.validator
    def _check_biases(self, attribute, value):
        if value.shape[0] < 1:
            raise ConfigurationError("a coral head needs at least one unit")

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])

    @property
    def num_classes(self) -> int:
        return int(self.biases.shape[0]) + 1

    @classmethod
    def initialize(cls, dim: int, num_classes: int, rng: np.random.Generator) -> "CoralHead":
        """
        Small uniform weights and a decreasing bias ramp with unit spacing centered
        on zero, e.g. (0.5, -0.5) for three classes. A fresh head is rank consistent
        and each interior class owns a logit interval one unit wide.
        """

        if num_classes < 2:
            raise ConfigurationError(f"num_classes must be >= 2, got {num_classes}")
        bound = 1.0 / np.sqrt(dim)
        weights = rng.uniform(-bound, bound, size=dim)
        biases = (num_classes - 2) / 2.0 - np.arange(num_classes - 1, dtype=np.float64)
        return cls(weights=weights, biases=biases)


def _non_negative(instance, attribute, value):
    if not value >= 0.0:
        raise ConfigurationError(f"{attribute.name} must be >= 0, got {value}")


@attrs.frozen
class LossWeights:
    """Weights of the classification and regression terms in the joint loss."""

    lambda_c: float = attrs.field(default=0.5, converter=float, validator=_non_negative)
    lambda_r: float = attrs.field(default=0.5, converter=float, validator=_non_negative)


# ------------------------------------
# Dataset types
# ------------------------------------


def placeholder_count(sentence: str) -> int:
    return (sentence or "").count(PLACEHOLDER)


def _optional_score(value) -> Optional[float]:
    return None if value is None else float(value)


@attrs.frozen
class ClozeInstance:
    """One (context, filler) pair with its features and optional gold labels."""

    id: str
    resolved_pattern: ResolvedPattern
    article_title: str
    section_header: str
    previous_context: str
    sentence: str
    follow_up_context: str
    filler: str
    class_label: Optional[PlausibilityClass] = None
    plausibility_score: Optional[float] = attrs.field(default=None, converter=_optional_score)

    def __attrs_post_init__(self):
        count = placeholder_count(self.sentence)
        if count != 1:
            raise DataValidationError(
                f"instance {self.id!r}: sentence must contain exactly one {PLACEHOLDER}, found {count}"
            )
        if self.plausibility_score is not None and not 1.0 <= self.plausibility_score <= 5.0:
            raise DataValidationError(
                f"instance {self.id!r}: plausibility score {self.plausibility_score} outside [1, 5]"
            )

    @property
    def context_id(self) -> str:
        """Id of the shared context; ``"17_3"`` belongs to context ``"17"``."""

        match = _ID_SUFFIX_RE.match(self.id)
        return match.group(1) if match else self.id

    @property
    def filler_index(self) -> int:
        match = _ID_SUFFIX_RE.match(self.id)
        return int(match.group(2)) if match else 0

    @property
    def key(self) -> tuple[str, int]:
        return (self.context_id, self.filler_index)

    @property
    def has_labels(self) -> bool:
        return self.class_label is not None and self.plausibility_score is not None


@attrs.frozen
class Corpus:
    """An ordered, validated collection of cloze instances."""

    instances: tuple[ClozeInstance, ...] = attrs.field(converter=tuple)

    @instances.validator
    def _check_unique(self, attribute, value):
        seen_ids: set[str] = set()
        seen_keys: set[tuple[str, int]] = set()
        for inst in value:
            if inst.id in seen_ids or inst.key in seen_keys:
                raise DataValidationError(f"duplicate instance id {inst.id!r}")
            seen_ids.add(inst.id)
            seen_keys.add(inst.key)

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self) -> Iterator[ClozeInstance]:
        return iter(self.instances)

    def __getitem__(self, idx: int) -> ClozeInstance:
        return self.instances[idx]

    @property
    def ids(self) -> list[str]:
        return [inst.id for inst in self.instances]

    @property
    def stats(self) -> dict[str, int]:
        """Per-class counts (unlabeled rows under "unlabeled")."""

        counts = {c.display: 0 for c in PlausibilityClass}
        counts["unlabeled"] = 0
        for inst in self.instances:
            if inst.class_label is None:
                counts["unlabeled"] += 1
            else:
                counts[inst.class_label.display] += 1
        return counts
