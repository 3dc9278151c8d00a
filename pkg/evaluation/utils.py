"""
Predictions TSV: ``id``, ``predicted_class`` (0/1/2), ``predicted_score``
(six decimal digits). Header row always present, even with no predictions.
"""

from pathlib import Path
from typing import Iterable, NamedTuple

from common.errors import DataValidationError, RowIssue
from dataset.tsv import parse_score, read_tsv_rows

PREDICTION_COLUMNS = ("id", "predicted_class", "predicted_score")


class Prediction(NamedTuple):
    id: str
    predicted_class: int
    predicted_score: float


def format_prediction(pred: Prediction) -> str:
    return f"{pred.id}\t{int(pred.predicted_class)}\t{pred.predicted_score:.6f}"


def write_predictions(path: str | Path, rows: Iterable[Prediction]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["\t".join(PREDICTION_COLUMNS)]
    lines.extend(format_prediction(row) for row in rows)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


def read_predictions(path: str | Path) -> list[Prediction]:
    rows = read_tsv_rows(path, PREDICTION_COLUMNS)

    issues: list[RowIssue] = []
    preds: list[Prediction] = []
    seen: dict[str, int] = {}
    for line_no, row in rows:
        pid = row["id"]
        if pid in seen:
            issues.append(
                RowIssue(str(path), line_no, "id", f"duplicate id {pid!r} (first seen on line {seen[pid]})")
            )
            continue
        seen[pid] = line_no
        try:
            cls = int(row["predicted_class"])
            if cls not in (0, 1, 2):
                raise ValueError
        except ValueError:
            issues.append(
                RowIssue(str(path), line_no, "predicted_class", f"expected 0, 1 or 2, got {row['predicted_class']!r}")
            )
            continue
        try:
            score = parse_score(row["predicted_score"])
            if score is None:
                raise ValueError
        except ValueError:
            issues.append(
                RowIssue(
                    str(path),
                    line_no,
                    "predicted_score",
                    f"expected a finite score in [1, 5], got {row['predicted_score']!r}",
                )
            )
            continue
        preds.append(Prediction(pid, cls, score))
    if issues:
        raise DataValidationError(issues)
    return preds
