"""
Pooled filler representation: whole-context vector followed by filler vector.

The context half plays the role of a transformer's [CLS] vector and the filler
half the role of the filler's last word piece. Filler-only pooling keeps just
the filler half.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import attrs
import numpy as np

from common.errors import ConfigurationError
from common.log import info, progress
from schemas.schemas import ClozeInstance, Corpus, PoolingMode

from .embeddings import EmbeddingTable
from .featurize import FeaturizerConfig, featurize
from .format import format_instance


@attrs.frozen(eq=False)
class PooledRepresentation:
    vector: np.ndarray
    pooling: PoolingMode = PoolingMode.CONCAT

    @property
    def context_half(self) -> Optional[np.ndarray]:
        if self.pooling is PoolingMode.FILLER_ONLY:
            return None
        return self.vector[: self.vector.shape[0] // 2]

    @property
    def filler_half(self) -> np.ndarray:
        if self.pooling is PoolingMode.FILLER_ONLY:
            return self.vector
        return self.vector[self.vector.shape[0] // 2 :]


def _unit(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    return vec if norm == 0.0 else vec / norm


def pool(
    instance: ClozeInstance,
    filler: str,
    cfg: FeaturizerConfig,
    pooling: PoolingMode = PoolingMode.CONCAT,
) -> PooledRepresentation:
    filler_vec = featurize(filler, cfg)
    if pooling is PoolingMode.FILLER_ONLY:
        return PooledRepresentation(vector=filler_vec, pooling=pooling)

    context_vec = featurize(format_instance(instance, filler).text, cfg)
    return PooledRepresentation(vector=np.concatenate([context_vec, filler_vec]), pooling=pooling)


def pool_from_embeddings(
    instance: ClozeInstance,
    table: EmbeddingTable,
    pooling: PoolingMode = PoolingMode.CONCAT,
) -> PooledRepresentation:
    """Same layout as `pool`, with both halves read from an embedding file."""

    context_vec, filler_vec = table.lookup(instance.key)
    filler_vec = _unit(filler_vec)
    if pooling is PoolingMode.FILLER_ONLY:
        return PooledRepresentation(vector=filler_vec, pooling=pooling)
    return PooledRepresentation(
        vector=np.concatenate([_unit(context_vec), filler_vec]), pooling=pooling
    )


def encode_corpus(
    corpus: Corpus,
    cfg: FeaturizerConfig,
    pooling: PoolingMode = PoolingMode.CONCAT,
    embeddings: Optional[EmbeddingTable] = None,
    threads: int = 1,
) -> np.ndarray:
    """
    (n, pooled dim) matrix of pooled representations, rows in corpus order.

    Worker threads only change how rows are produced; results are collected in
    input order, so the matrix is identical for any thread count.
    """

    width = cfg.dim * (2 if pooling is PoolingMode.CONCAT else 1)
    if len(corpus) == 0:
        return np.zeros((0, width), dtype=np.float64)

    if embeddings is not None and embeddings.dim != cfg.dim:
        raise ConfigurationError(
            f"embedding dim {embeddings.dim} does not match featurizer dim {cfg.dim}"
        )

    if embeddings is not None:
        def encode_one(inst: ClozeInstance) -> np.ndarray:
            return pool_from_embeddings(inst, embeddings, pooling).vector
    else:
        def encode_one(inst: ClozeInstance) -> np.ndarray:
            return pool(inst, inst.filler, cfg, pooling).vector

    threads = max(int(threads), 1)
    info("Featurize", f"encoding {len(corpus):,} instance(s) with {threads} thread(s)")
    if threads == 1:
        rows = [encode_one(inst) for inst in progress(corpus, desc="Featurizing", total=len(corpus))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool_:
            rows = list(
                progress(pool_.map(encode_one, corpus), desc="Featurizing", total=len(corpus))
            )
    return np.vstack(rows)
