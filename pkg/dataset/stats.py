"""
Label distribution of a corpus (subtask A classes, subtask B bins).
"""

from ordinal.coral import normalize_score
from schemas.schemas import BinningMode, Corpus, PlausibilityClass


def corpus_stats(c: Corpus) -> dict[str, dict[str, int]]:
    """
    Counts per class and per 1-5 bin under rounding and flooring.

    Bins are reported on the 1-5 scale (label + 1).
    """

    classes = {cls.display: 0 for cls in PlausibilityClass}
    rounded = {str(k): 0 for k in range(1, 6)}
    floored = {str(k): 0 for k in range(1, 6)}
    for inst in c:
        if inst.class_label is not None:
            classes[inst.class_label.display] += 1
        if inst.plausibility_score is not None:
            rounded[str(normalize_score(inst.plausibility_score, BinningMode.ROUND).value + 1)] += 1
            floored[str(normalize_score(inst.plausibility_score, BinningMode.FLOOR).value + 1)] += 1

    return {
        "class": classes,
        "round": rounded,
        "floor": floored,
        "total": {"rows": len(c)},
    }


def format_stats(stats: dict[str, dict[str, int]]) -> str:
    lines = []
    for section in ("class", "round", "floor"):
        counts = stats[section]
        total = sum(counts.values())
        cells = []
        for name, count in counts.items():
            pct = (count / total * 100) if total else 0.0
            cells.append(f"{name}={count} ({pct:.2f}%)")
        lines.append(f"{section}: " + "  ".join(cells) + f"  total={total}")
    lines.append(f"rows: {stats['total']['rows']}")
    return "\n".join(lines)
