"""
Score a predictions file against a gold TSV.

Rows are joined on ``id``; row order in either file does not matter.
"""

from pathlib import Path
from typing import Optional

from common.errors import DataValidationError, RowIssue, UndefinedCorrelationError
from common.log import info, warn
from dataset.tsv import load_tsv
from schemas.schemas import Corpus

from .metrics import accuracy, spearman, spearman_per_instance
from .report import EvalReport
from .utils import Prediction, read_predictions

MAX_LISTED_IDS = 5


def _unmatched(pred_path, gold_path, preds: list[Prediction], gold: Corpus) -> list[RowIssue]:
    gold_ids = set(gold.ids)
    pred_ids = {p.id for p in preds}
    issues = []
    missing_gold = [p.id for p in preds if p.id not in gold_ids]
    missing_pred = [gid for gid in gold.ids if gid not in pred_ids]
    if missing_gold:
        shown = ", ".join(missing_gold[:MAX_LISTED_IDS])
        issues.append(
            RowIssue(str(pred_path), 0, "id", f"{len(missing_gold)} id(s) not in gold, e.g. {shown}")
        )
    if missing_pred:
        shown = ", ".join(missing_pred[:MAX_LISTED_IDS])
        issues.append(
            RowIssue(str(gold_path), 0, "id", f"{len(missing_pred)} id(s) without a prediction, e.g. {shown}")
        )
    return issues


def evaluate(
    preds: list[Prediction],
    gold: Corpus,
    per_instance: bool = False,
    split: str = "dev",
    binning: Optional[str] = None,
    pooling: Optional[str] = None,
) -> EvalReport:
    """
    Accuracy and Spearman over gold rows that carry both labels.

    Gold rows missing a label are skipped and counted. Raises
    `UndefinedCorrelationError` for constant gold scores.
    """

    by_id = {p.id: p for p in preds}
    pred_cls, gold_cls, pred_scores, gold_scores, groups = [], [], [], [], []
    skipped = 0
    for inst in gold:
        if not inst.has_labels:
            skipped += 1
            continue
        p = by_id[inst.id]
        pred_cls.append(p.predicted_class)
        gold_cls.append(inst.class_label.value)
        pred_scores.append(p.predicted_score)
        gold_scores.append(inst.plausibility_score)
        groups.append(inst.context_id)

    acc = accuracy(pred_cls, gold_cls)
    contexts_skipped = 0
    if per_instance:
        rho, _, contexts_skipped = spearman_per_instance(pred_scores, gold_scores, groups)
    else:
        rho = spearman(pred_scores, gold_scores)

    return EvalReport(
        accuracy=acc,
        spearman=rho,
        n=len(pred_cls),
        skipped=skipped,
        spearman_mode="per_instance" if per_instance else "global",
        contexts_skipped=contexts_skipped,
        binning=binning,
        pooling=pooling,
        split=split,
    )


def evaluate_predictions(
    pred_path: str | Path, gold_path: str | Path, per_instance: bool = False
) -> EvalReport:
    preds = read_predictions(pred_path)
    gold = load_tsv(gold_path)

    issues = _unmatched(pred_path, gold_path, preds, gold)
    if issues:
        raise DataValidationError(issues)

    info("Eval", f"Joined {len(preds):,} prediction(s) with gold on id")
    try:
        report = evaluate(preds, gold, per_instance=per_instance, split=Path(gold_path).stem)
    except UndefinedCorrelationError as e:
        raise UndefinedCorrelationError(f"{gold_path}: {e}") from e

    if report.skipped:
        warn("Eval", f"{report.skipped:,} gold row(s) without both labels skipped")
    return report
