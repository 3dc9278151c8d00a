"""
Binary training targets for both heads.
"""

import attrs
import numpy as np

from common.log import warn
from ordinal.coral import CLASS_UNITS, SCORE_UNITS, encode_ordinal, normalize_score
from schemas.schemas import BinningMode, Corpus, OrdinalLabel


@attrs.frozen(eq=False)
class TrainingTargets:
    """Targets for the rows of a corpus that carry both gold labels."""

    row_indices: np.ndarray
    """Positions of the kept rows in the source corpus."""

    class_bits: np.ndarray
    """(n, 2) binary decomposition of the 3-way class label."""

    score_bits: np.ndarray
    """(n, 4) binary decomposition of the binned 1-5 score."""

    excluded: int = 0

    def __len__(self) -> int:
        return int(self.row_indices.shape[0])


def make_targets(c: Corpus, mode: BinningMode | str) -> TrainingTargets:
    """
    Class target from the 3-way label, score target from the binned score.

    Rows missing either label are left out and counted.
    """

    mode = BinningMode(mode)
    indices: list[int] = []
    class_rows: list[np.ndarray] = []
    score_rows: list[np.ndarray] = []
    for i, inst in enumerate(c):
        if not inst.has_labels:
            continue
        class_label = OrdinalLabel(inst.class_label.value, CLASS_UNITS + 1)
        score_label = normalize_score(inst.plausibility_score, mode)
        indices.append(i)
        class_rows.append(encode_ordinal(class_label).as_array())
        score_rows.append(encode_ordinal(score_label).as_array())

    excluded = len(c) - len(indices)
    if excluded:
        warn("Dataset", f"{excluded:,} row(s) without both labels excluded from training")

    return TrainingTargets(
        row_indices=np.asarray(indices, dtype=np.int64),
        class_bits=np.asarray(class_rows, dtype=np.float64).reshape(-1, CLASS_UNITS),
        score_bits=np.asarray(score_rows, dtype=np.float64).reshape(-1, SCORE_UNITS),
        excluded=excluded,
    )
