"""
Subtask metrics: accuracy for classes, Spearman's rank correlation for scores.
"""

from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from common.errors import UndefinedCorrelationError, UsageError


def _paired(pred: Iterable, gold: Iterable, minimum: int) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(list(pred))
    g = np.asarray(list(gold))
    if p.shape != g.shape or p.ndim != 1:
        raise UsageError(f"prediction/gold length mismatch: {p.shape} vs {g.shape}")
    if p.shape[0] < minimum:
        raise UsageError(f"need at least {minimum} paired value(s), got {p.shape[0]}")
    return p, g


def accuracy(pred: Iterable[int], gold: Iterable[int]) -> float:
    """Fraction of exact matches."""

    p, g = _paired(pred, gold, minimum=1)
    return float(np.mean(p == g))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""

    return rankdata(np.asarray(values, dtype=np.float64), method="average")


def spearman(pred: Iterable[float], gold: Iterable[float]) -> float:
    """Pearson correlation of average ranks."""

    p, g = _paired(pred, gold, minimum=2)
    p = p.astype(np.float64)
    g = g.astype(np.float64)
    if np.all(p == p[0]) or np.all(g == g[0]):
        raise UndefinedCorrelationError("Spearman correlation is undefined for a constant vector")

    rp = average_ranks(p)
    rg = average_ranks(g)
    rp -= rp.mean()
    rg -= rg.mean()
    rho = float(np.dot(rp, rg) / np.sqrt(np.dot(rp, rp) * np.dot(rg, rg)))
    return min(max(rho, -1.0), 1.0)


def spearman_per_instance(
    pred: Iterable[float], gold: Iterable[float], groups: Iterable[Hashable]
) -> tuple[float, int, int]:
    """
    Mean of per-context Spearman correlations.

    Returns (mean, contexts used, contexts skipped). Contexts with fewer than two
    rows or constant gold are skipped; constant predictions in a context count
    as zero correlation.
    """

    p, g = _paired(pred, gold, minimum=2)
    keys = list(groups)
    if len(keys) != p.shape[0]:
        raise UsageError(f"groups length {len(keys)} does not match {p.shape[0]} values")

    members: dict[Hashable, list[int]] = {}
    for i, key in enumerate(keys):
        members.setdefault(key, []).append(i)

    values: list[float] = []
    skipped = 0
    for idx in members.values():
        gp, gg = p[idx].astype(np.float64), g[idx].astype(np.float64)
        if len(idx) < 2 or np.all(gg == gg[0]):
            skipped += 1
            continue
        if np.all(gp == gp[0]):
            values.append(0.0)
            continue
        values.append(spearman(gp, gg))

    if not values:
        raise UndefinedCorrelationError("no context has non-constant gold scores")
    return float(np.mean(values)), len(values), skipped
