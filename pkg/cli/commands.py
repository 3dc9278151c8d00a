"""
Implementations of the command-line subcommands.

Each command prints its result on stdout, sends progress and diagnostics to
stderr, and raises a `CoralClozeError` subclass on failure.
"""

from pathlib import Path
from typing import Optional

import numpy as np

from common.errors import NumericError
from common.log import info
from dataset.stats import corpus_stats, format_stats
from dataset.synthetic import make_synthetic_splits
from dataset.tsv import load_tsv, write_tsv
from encoder.embeddings import read_embeddings
from encoder.featurize import FeaturizerConfig
from evaluation.compute_metrics import evaluate_predictions
from evaluation.report import EvalReport
from ordinal.coral import CLASS_UNITS, SCORE_UNITS, encode_ordinal
from schemas.schemas import LossWeights, OrdinalLabel
from tinynet.gradcheck import GradCheckReport, grad_check
from tinynet.model import Batch, init_model, pooled_dim
from training.pipeline import TrainResult, run_training
from training.predict import run_predict

from .config import TrainConfig

GRADCHECK_DIM = 8
GRADCHECK_HIDDEN = 4
GRADCHECK_BATCH = 6


def cmd_train(
    config: TrainConfig,
    train_path: str | Path,
    dev_path: str | Path,
    out_checkpoint: str | Path,
    embeddings_path: Optional[str | Path] = None,
    log_path: Optional[str | Path] = None,
    threads: int = 1,
    fmt: str = "text",
) -> TrainResult:
    train = load_tsv(train_path)
    dev = load_tsv(dev_path)
    embeddings = read_embeddings(embeddings_path) if embeddings_path else None

    result = run_training(
        config, train, dev, out_checkpoint, embeddings=embeddings, log_path=log_path, threads=threads
    )
    print(result.report.render(fmt), end="")
    return result


def cmd_predict(
    checkpoint: str | Path,
    data_path: str | Path,
    out_path: str | Path,
    embeddings_path: Optional[str | Path] = None,
    threads: int = 1,
) -> int:
    preds = run_predict(checkpoint, data_path, out_path, embeddings_path, threads)
    return len(preds)


def cmd_eval(
    predictions: str | Path,
    gold: str | Path,
    per_instance: bool = False,
    fmt: str = "text",
) -> EvalReport:
    report = evaluate_predictions(predictions, gold, per_instance=per_instance)
    print(report.render(fmt), end="")
    return report


def gradcheck_batch(config: TrainConfig, rng: np.random.Generator) -> Batch:
    """Random pooled inputs with random class (0..2) and score (0..4) targets."""

    featurizer = FeaturizerConfig(dim=GRADCHECK_DIM, hash_seed=config.hash_seed)
    features = rng.normal(size=(GRADCHECK_BATCH, pooled_dim(featurizer, config.pooling)))
    class_labels = rng.integers(0, CLASS_UNITS + 1, size=GRADCHECK_BATCH)
    score_labels = rng.integers(0, SCORE_UNITS + 1, size=GRADCHECK_BATCH)
    return Batch(
        features=features,
        class_bits=np.stack(
            [encode_ordinal(OrdinalLabel(y, CLASS_UNITS + 1)).as_array() for y in class_labels]
        ),
        score_bits=np.stack(
            [encode_ordinal(OrdinalLabel(y, SCORE_UNITS + 1)).as_array() for y in score_labels]
        ),
    )


def cmd_gradcheck(config: TrainConfig, tol: float = 1e-5, h: float = 1e-5) -> GradCheckReport:
    """
    Finite-difference check on a seeded miniature model.

    Raises `NumericError` when the largest relative error is not below `tol`.
    """

    featurizer = FeaturizerConfig(dim=GRADCHECK_DIM, hash_seed=config.hash_seed)
    model = init_model(
        featurizer,
        pooling=config.pooling,
        binning=config.binning,
        hidden_dim=GRADCHECK_HIDDEN,
        seed=config.seed,
    )
    batch = gradcheck_batch(config, np.random.default_rng(config.seed))
    weights = LossWeights(config.lambda_c, config.lambda_r)

    report = grad_check(model, batch, h=h, tol=tol, weights=weights)
    for name, err in report.errors.items():
        flag = "  (zero gradient)" if name in report.zero_gradient else ""
        print(f"{name}: {err:.3e}{flag}")
    print(f"max_relative_error: {report.max_error:.3e}")
    print(f"result: {'pass' if report.passed else 'fail'} (tol {tol:g})")

    if not report.passed:
        raise NumericError(
            f"gradient check failed: max relative error {report.max_error:.3e} >= tol {tol:g}"
        )
    return report


def cmd_stats(data_path: str | Path) -> dict:
    stats = corpus_stats(load_tsv(data_path))
    print(format_stats(stats))
    return stats


def cmd_synth(
    out_dir: str | Path, n_instances: int = 2000, dev_fraction: float = 0.2, seed: int = 0
) -> tuple[Path, Path]:
    """Write a planted-signal train/dev pair as ``train.tsv`` and ``dev.tsv``."""

    out_dir = Path(out_dir)
    train, dev = make_synthetic_splits(n_instances, dev_fraction=dev_fraction, seed=seed)
    train_path, dev_path = out_dir / "train.tsv", out_dir / "dev.tsv"
    write_tsv(train, train_path)
    write_tsv(dev, dev_path)
    info("Synth", f"Wrote {len(train):,} train and {len(dev):,} dev row(s) to: {out_dir}")
    print(train_path)
    print(dev_path)
    return train_path, dev_path
