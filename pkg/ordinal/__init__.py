"""Coral ordinal-regression math: label encoding, logits, losses, decoding."""

from .coral import (
    coral_forward,
    decode_class,
    decode_score,
    encode_ordinal,
    ideal_logits,
    normalize_score,
)
from .loss import combined_batch_loss, ordinal_bce_loss

__all__ = [
    "coral_forward",
    "combined_batch_loss",
    "decode_class",
    "decode_score",
    "encode_ordinal",
    "ideal_logits",
    "normalize_score",
    "ordinal_bce_loss",
]
