"""
Seeded mini-batch iteration.
"""

import numpy as np

from common.errors import UsageError
from schemas.schemas import Corpus


def batch_iter(c: Corpus | int, batch_size: int, seed: int, epoch: int = 0) -> list[np.ndarray]:
    """
    Row-index batches for one epoch.

    The permutation depends only on (seed, epoch), so every epoch has its own
    order and a rerun with the same seed reproduces it. The last batch may be short.
    """

    if batch_size < 1:
        raise UsageError(f"batch size must be >= 1, got {batch_size}")

    n = int(c) if isinstance(c, (int, np.integer)) else len(c)
    rng = np.random.default_rng([int(seed), int(epoch)])
    order = rng.permutation(n)
    return [order[i : i + batch_size] for i in range(0, n, batch_size)]
