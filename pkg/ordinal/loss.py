"""
Per-head binary cross-entropy and the weighted joint loss.
"""

from typing import Sequence

import numpy as np

from common.errors import ConfigurationError, UsageError
from schemas.schemas import BinaryLabelVector, LossWeights


def ordinal_bce_loss(logits, target: BinaryLabelVector | np.ndarray) -> float | np.ndarray:
    """
    Sum over units of the binary cross-entropy between sigmoid(logit) and the target bit.

    Uses ``softplus(z) - t * z`` so nothing overflows for large logits. Batched
    inputs (rows of logits and targets) return one loss per row.
    """

    logits = np.asarray(logits, dtype=np.float64)
    bits = target.as_array() if isinstance(target, BinaryLabelVector) else np.asarray(target, dtype=np.float64)
    if logits.shape != bits.shape:
        raise ConfigurationError(
            f"logits shape {logits.shape} does not match target shape {bits.shape}"
        )
    per_unit = np.logaddexp(0.0, logits) - bits * logits
    loss = np.sum(per_unit, axis=-1)
    return float(loss) if np.ndim(loss) == 0 else loss


def combined_batch_loss(per_sample: Sequence[tuple[float, float]] | np.ndarray, w: LossWeights) -> float:
    """Mean over the batch of ``lambda_c * l_c + lambda_r * l_r``."""

    pairs = np.asarray(per_sample, dtype=np.float64)
    if pairs.size == 0:
        raise UsageError("combined_batch_loss needs a non-empty batch")
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ConfigurationError(f"expected (l_c, l_r) pairs, got shape {pairs.shape}")

    weighted = w.lambda_c * pairs[:, 0] + w.lambda_r * pairs[:, 1]
    return float(np.sum(weighted) / pairs.shape[0])
