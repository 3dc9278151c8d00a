"""
Canonical TSV format for cloze instances.

One row per (context, filler) pair, tab-separated, "\\n" line endings, UTF-8,
mandatory header row. Columns:

  - id                  (e.g. "17_3": context 17, filler 3)
  - resolved_pattern    (IMPLICIT REFERENCE | ADDED COMPOUND | METONYMIC REFERENCE | FUSED HEAD)
  - article_title
  - section_header
  - previous_context
  - sentence            (contains exactly one "[FILLER]")
  - follow_up_context
  - filler
  - class_label         (Implausible | Neutral | Plausible, case-insensitive; may be empty)
  - plausibility_score  (1-5; may be empty)

Fields may not contain tabs or newlines.
"""

import math
from pathlib import Path
from typing import Optional

from common.errors import DataValidationError, RowIssue
from common.log import info
from schemas.schemas import (
    PLACEHOLDER,
    ClozeInstance,
    Corpus,
    PlausibilityClass,
    ResolvedPattern,
    placeholder_count,
)

COLUMNS = (
    "id",
    "resolved_pattern",
    "article_title",
    "section_header",
    "previous_context",
    "sentence",
    "follow_up_context",
    "filler",
    "class_label",
    "plausibility_score",
)


def read_tsv_rows(path: str | Path, required: tuple[str, ...]) -> list[tuple[int, dict[str, str]]]:
    """
    Strictly split a TSV file into (line number, row dict) pairs.

    Raises `DataValidationError` for a missing header, missing or unknown
    columns, and rows with the wrong number of fields.
    """

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"TSV file not found at: {path}")
    try:
        with path.open(encoding="utf-8", newline="") as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise DataValidationError([RowIssue(str(path), 0, "", f"not valid UTF-8 ({e})")]) from e

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DataValidationError([RowIssue(str(path), 1, "", "missing header row")])

    header = lines[0].split("\t")
    issues: list[RowIssue] = []
    for col in required:
        if col not in header:
            issues.append(RowIssue(str(path), 1, col, "missing column"))
    for col in header:
        if col not in required:
            issues.append(RowIssue(str(path), 1, col, "unknown column"))
    if len(set(header)) != len(header):
        issues.append(RowIssue(str(path), 1, "", "duplicate column name"))
    if issues:
        raise DataValidationError(issues)

    rows: list[tuple[int, dict[str, str]]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if "\r" in line:
            issues.append(RowIssue(str(path), line_no, "", "carriage return in row"))
            continue
        fields = line.split("\t")
        if len(fields) != len(header):
            issues.append(
                RowIssue(
                    str(path),
                    line_no,
                    "",
                    f"expected {len(header)} tab-separated fields, found {len(fields)}",
                )
            )
            continue
        rows.append((line_no, dict(zip(header, fields))))
    if issues:
        raise DataValidationError(issues)
    return rows


def parse_score(text: str) -> Optional[float]:
    """Empty -> None; otherwise a finite float in [1, 5] (ValueError if not)."""

    text = text.strip()
    if not text:
        return None
    value = float(text)
    if not math.isfinite(value) or not 1.0 <= value <= 5.0:
        raise ValueError(f"score {text} outside [1, 5]")
    return value


def _parse_row(path: str, line_no: int, row: dict[str, str], issues: list[RowIssue]):
    def bad(field: str, message: str) -> None:
        issues.append(RowIssue(path, line_no, field, message))

    start = len(issues)
    if not row["id"].strip():
        bad("id", "empty id")

    pattern = None
    try:
        pattern = ResolvedPattern.parse(row["resolved_pattern"])
    except ValueError as e:
        bad("resolved_pattern", str(e))

    count = placeholder_count(row["sentence"])
    if count != 1:
        bad("sentence", f"expected exactly one {PLACEHOLDER}, found {count}")

    label = None
    if row["class_label"].strip():
        try:
            label = PlausibilityClass.parse(row["class_label"])
        except ValueError as e:
            bad("class_label", str(e))

    score = None
    try:
        score = parse_score(row["plausibility_score"])
    except ValueError as e:
        bad("plausibility_score", str(e))

    if len(issues) > start:
        return None
    return ClozeInstance(
        id=row["id"],
        resolved_pattern=pattern,
        article_title=row["article_title"],
        section_header=row["section_header"],
        previous_context=row["previous_context"],
        sentence=row["sentence"],
        follow_up_context=row["follow_up_context"],
        filler=row["filler"],
        class_label=label,
        plausibility_score=score,
    )


def load_tsv(path: str | Path) -> Corpus:
    """Load and validate a corpus; all row problems are reported together."""

    rows = read_tsv_rows(path, COLUMNS)

    issues: list[RowIssue] = []
    instances: list[ClozeInstance] = []
    first_seen: dict[object, int] = {}
    for line_no, row in rows:
        inst = _parse_row(str(path), line_no, row, issues)
        if inst is None:
            continue
        for key in (inst.id, inst.key):
            if key in first_seen:
                issues.append(
                    RowIssue(
                        str(path),
                        line_no,
                        "id",
                        f"duplicate id {inst.id!r} (first seen on line {first_seen[key]})",
                    )
                )
                break
        else:
            first_seen[inst.id] = line_no
            first_seen[inst.key] = line_no
            instances.append(inst)
    if issues:
        raise DataValidationError(issues)

    info("Dataset", f"Loaded {len(instances):,} row(s) from {path}")
    return Corpus(instances)


def _format_score(score: Optional[float]) -> str:
    return "" if score is None else repr(float(score))


def write_tsv(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus in the canonical format; `load_tsv` reads it back unchanged."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    lines = ["\t".join(COLUMNS)]
    issues: list[RowIssue] = []
    for row_no, inst in enumerate(corpus, start=2):
        fields = [
            inst.id,
            inst.resolved_pattern.value,
            inst.article_title,
            inst.section_header,
            inst.previous_context,
            inst.sentence,
            inst.follow_up_context,
            inst.filler,
            "" if inst.class_label is None else inst.class_label.display,
            _format_score(inst.plausibility_score),
        ]
        for col, value in zip(COLUMNS, fields):
            if "\t" in value or "\n" in value or "\r" in value:
                issues.append(RowIssue(str(path), row_no, col, "tab or newline inside field"))
        lines.append("\t".join(fields))
    if issues:
        raise DataValidationError(issues)

    with path.open("w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")
