"""
Batch prediction with a trained model.
"""

from pathlib import Path
from typing import Optional

import numpy as np

from common.errors import ConfigurationError
from common.log import info
from dataset.tsv import load_tsv
from encoder.embeddings import EmbeddingTable, read_embeddings
from encoder.pool import encode_corpus
from evaluation.utils import Prediction, write_predictions
from ordinal.coral import decode_class, decode_score
from schemas.schemas import Corpus
from tinynet.checkpoint import load_checkpoint
from tinynet.model import ModelParams, predict_logits


def predict_features(model: ModelParams, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decoded classes (0..2) and scores (1..5) for rows of pooled inputs."""

    if features.shape[0] == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64)
    class_logits, score_logits = predict_logits(model, features)
    return np.atleast_1d(decode_class(class_logits)), np.atleast_1d(decode_score(score_logits))


def check_embedding_use(model: ModelParams, embeddings: Optional[EmbeddingTable]) -> None:
    if model.uses_embeddings and embeddings is None:
        raise ConfigurationError("checkpoint was trained on an embedding file; pass --embeddings")
    if not model.uses_embeddings and embeddings is not None:
        raise ConfigurationError("checkpoint was trained on hashed features; drop --embeddings")


def predict_corpus(
    model: ModelParams,
    corpus: Corpus,
    embeddings: Optional[EmbeddingTable] = None,
    threads: int = 1,
) -> list[Prediction]:
    check_embedding_use(model, embeddings)
    features = encode_corpus(corpus, model.featurizer, model.pooling, embeddings, threads)
    if features.shape[1] != model.input_dim:
        raise ConfigurationError(
            f"inputs have dim {features.shape[1]}, checkpoint expects {model.input_dim}"
        )
    classes, scores = predict_features(model, features)
    return [
        Prediction(inst.id, int(cls), float(score))
        for inst, cls, score in zip(corpus, classes, scores)
    ]


def run_predict(
    checkpoint_path: str | Path,
    data_path: str | Path,
    out_path: str | Path,
    embeddings_path: Optional[str | Path] = None,
    threads: int = 1,
) -> list[Prediction]:
    model = load_checkpoint(checkpoint_path)
    corpus = load_tsv(data_path)
    embeddings = read_embeddings(embeddings_path) if embeddings_path else None

    preds = predict_corpus(model, corpus, embeddings, threads)
    write_predictions(out_path, preds)
    info("Predict", f"Saved {len(preds):,} prediction(s) to: {out_path}")
    return preds
