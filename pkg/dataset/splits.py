"""
Combining and splitting corpora.
"""

import numpy as np

from common.errors import DataValidationError, RowIssue
from schemas.schemas import Corpus


def merge_train_dev(train: Corpus, dev: Corpus) -> Corpus:
    """Train rows followed by dev rows; ids must not collide."""

    train_ids = set(train.ids)
    train_keys = {inst.key for inst in train}
    clashes = [inst.id for inst in dev if inst.id in train_ids or inst.key in train_keys]
    if clashes:
        raise DataValidationError(
            [RowIssue("<dev>", 0, "id", f"id {cid!r} also present in train") for cid in clashes]
        )
    return Corpus(train.instances + dev.instances)


def split_by_context(c: Corpus, dev_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """
    Hold out whole contexts so that all fillers of a context land in one split.

    Rows keep their original relative order inside each split.
    """

    contexts = sorted({inst.context_id for inst in c})
    rng = np.random.default_rng(seed)
    shuffled = [contexts[i] for i in rng.permutation(len(contexts))]
    n_dev = int(round(len(contexts) * dev_fraction))
    dev_contexts = set(shuffled[:n_dev])

    train = [inst for inst in c if inst.context_id not in dev_contexts]
    dev = [inst for inst in c if inst.context_id in dev_contexts]
    return Corpus(train), Corpus(dev)
