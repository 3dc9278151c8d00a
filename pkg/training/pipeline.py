"""
Training loop: featurize, fit both heads with AdamW on a cosine schedule,
evaluate after every epoch and keep the best epoch's parameters.

Everything here is a function of (config, inputs); two runs with the same
arguments write byte-identical checkpoints and run logs.
"""

import math
from pathlib import Path
from typing import Optional

import attrs
import numpy as np

from cli.config import TrainConfig
from common.errors import DataValidationError, NumericError, UndefinedCorrelationError
from common.log import info, progress, warn
from dataset.batching import batch_iter
from dataset.splits import merge_train_dev
from dataset.targets import make_targets
from encoder.embeddings import EmbeddingTable
from encoder.featurize import FeaturizerConfig
from encoder.pool import encode_corpus
from evaluation.compute_metrics import evaluate
from evaluation.metrics import accuracy
from evaluation.report import EvalReport
from evaluation.utils import Prediction
from schemas.schemas import Corpus, LossWeights
from tinynet.checkpoint import save_checkpoint
from tinynet.model import Batch, ModelParams, init_model, loss_and_gradients
from tinynet.optim import (
    LrSchedule,
    OptimizerState,
    cosine_lr,
    optimizer_step,
    total_training_steps,
)

from .predict import predict_features


@attrs.frozen
class EpochRecord:
    epoch: int
    loss: Optional[float]
    """Sample-weighted mean training loss; None for the untrained epoch 0."""

    lr: float
    """Learning rate of the last step in the epoch."""

    report: EvalReport


@attrs.frozen(eq=False)
class TrainResult:
    model: ModelParams
    report: EvalReport
    best_epoch: int
    history: tuple[EpochRecord, ...]


def selection_value(report: EvalReport, metric: str) -> float:
    if metric == "accuracy":
        return report.accuracy
    return -math.inf if report.spearman is None else report.spearman


def evaluate_model(
    model: ModelParams,
    corpus: Corpus,
    features: np.ndarray,
    per_instance: bool,
    split: str,
) -> EvalReport:
    """Report for the labeled rows of `corpus`; an undefined correlation is reported as None."""

    classes, scores = predict_features(model, features)
    preds = [Prediction(inst.id, int(c), float(s)) for inst, c, s in zip(corpus, classes, scores)]
    labels = {"split": split, "binning": model.binning.value, "pooling": model.pooling.value}
    try:
        return evaluate(preds, corpus, per_instance=per_instance, **labels)
    except UndefinedCorrelationError as e:
        warn("Train", f"{split} Spearman undefined ({e})")

    labeled = [inst for inst in corpus if inst.has_labels]
    by_id = {p.id: p for p in preds}
    return EvalReport(
        accuracy=accuracy(
            [by_id[inst.id].predicted_class for inst in labeled],
            [inst.class_label.value for inst in labeled],
        ),
        spearman=None,
        n=len(labeled),
        skipped=len(corpus) - len(labeled),
        spearman_mode="per_instance" if per_instance else "global",
        **labels,
    )


def _format_metric(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.6f}"


def format_run_log(config: TrainConfig, history: list[EpochRecord], best_epoch: int) -> str:
    lines = ["# config"]
    lines.extend(config.to_lines())
    lines.append("# epochs")
    for rec in history:
        lines.append(
            f"epoch={rec.epoch} loss={_format_metric(rec.loss)} lr={rec.lr:.6e} "
            f"accuracy={rec.report.accuracy:.6f} spearman={_format_metric(rec.report.spearman)} "
            f"n={rec.report.n} split={rec.report.split}"
        )
    lines.append(f"best_epoch={best_epoch}")
    return "\n".join(lines) + "\n"


def run_training(
    config: TrainConfig,
    train: Corpus,
    dev: Corpus,
    out_checkpoint: str | Path,
    embeddings: Optional[EmbeddingTable] = None,
    log_path: Optional[str | Path] = None,
    threads: int = 1,
) -> TrainResult:
    """
    Train a model and write the selected checkpoint plus a run log.

    With `merge_dev` the dev rows join the training data, the report is
    computed on the merged training rows, and the final epoch is kept.
    Otherwise the epoch with the best dev metric (`config.select`) is kept;
    ties go to the earlier epoch.
    """

    split = "dev"
    if config.merge_dev:
        train = merge_train_dev(train, dev)
        eval_corpus, split = train, "train"
    else:
        eval_corpus = dev

    if not any(inst.has_labels for inst in eval_corpus):
        raise DataValidationError(f"{split} split has no rows with both labels to evaluate on")

    targets = make_targets(train, config.binning)
    if config.epochs > 0 and len(targets) == 0:
        raise DataValidationError("training split has no rows with both labels")

    featurizer = FeaturizerConfig(dim=config.d_e, hash_seed=config.hash_seed)
    train_features = encode_corpus(train, featurizer, config.pooling, embeddings, threads)
    eval_features = (
        train_features
        if config.merge_dev
        else encode_corpus(eval_corpus, featurizer, config.pooling, embeddings, threads)
    )

    model = init_model(
        featurizer,
        pooling=config.pooling,
        binning=config.binning,
        hidden_dim=config.h,
        seed=config.seed,
        uses_embeddings=embeddings is not None,
    )
    info(
        "Train",
        f"{len(targets):,} training row(s), {model.input_dim} -> {model.hidden_dim} hidden, "
        f"{config.epochs} epoch(s) of batch {config.batch_size}",
    )

    weights = LossWeights(config.lambda_c, config.lambda_r)
    features = train_features[targets.row_indices]
    total = total_training_steps(config.epochs, len(targets), config.batch_size)
    schedule = LrSchedule(config.base_lr, total) if total > 0 else None
    optimizer = OptimizerState(base_lr=config.base_lr, weight_decay=config.weight_decay)

    report = evaluate_model(model, eval_corpus, eval_features, config.per_instance, split)
    history = [EpochRecord(epoch=0, loss=None, lr=0.0, report=report)]
    best_model, best_epoch, best_value = model, 0, None

    step = 0
    for epoch in range(1, config.epochs + 1):
        batches = batch_iter(len(targets), config.batch_size, config.seed, epoch)
        loss_sum = 0.0
        lr = 0.0
        for idx in progress(batches, desc=f"Epoch {epoch}/{config.epochs}"):
            batch = Batch(
                features=features[idx],
                class_bits=targets.class_bits[idx],
                score_bits=targets.score_bits[idx],
            )
            loss, grads = loss_and_gradients(model, batch, weights)
            if not math.isfinite(loss):
                raise NumericError(f"non-finite loss {loss} at epoch {epoch}, step {step + 1}")
            lr = cosine_lr(schedule, step)
            model = model.with_parameters(optimizer_step(optimizer, model.parameters(), grads, lr))
            loss_sum += loss * len(idx)
            step += 1

        report = evaluate_model(model, eval_corpus, eval_features, config.per_instance, split)
        record = EpochRecord(epoch=epoch, loss=loss_sum / len(targets), lr=lr, report=report)
        history.append(record)
        info(
            "Train",
            f"epoch {epoch}/{config.epochs} loss={record.loss:.4f} lr={lr:.3e} "
            f"{split} accuracy={report.accuracy:.4f} spearman={_format_metric(report.spearman)}",
        )

        value = selection_value(report, config.select)
        if config.merge_dev or best_value is None or value > best_value:
            best_model, best_epoch, best_value = model, epoch, value

    best_report = history[best_epoch].report
    save_checkpoint(best_model, out_checkpoint)
    info("Train", f"Saved epoch {best_epoch} checkpoint to: {out_checkpoint}")

    log_path = Path(log_path) if log_path else Path(f"{out_checkpoint}.log")
    log_path.parent.mkdir(parents=True, exist_ok=True)
    log_path.write_text(format_run_log(config, history, best_epoch), encoding="utf-8")

    return TrainResult(
        model=best_model, report=best_report, best_epoch=best_epoch, history=tuple(history)
    )
