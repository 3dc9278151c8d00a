import json

import numpy as np
import pytest

from common.errors import DataValidationError, UndefinedCorrelationError, UsageError
from dataset.tsv import write_tsv
from evaluation.compute_metrics import evaluate_predictions
from evaluation.metrics import accuracy, average_ranks, spearman, spearman_per_instance
from evaluation.report import EvalReport
from evaluation.utils import Prediction, read_predictions, write_predictions
from schemas.schemas import Corpus


def _brute_ranks(values):
    ranks = []
    for v in values:
        below = sum(1 for u in values if u < v)
        equal = sum(1 for u in values if u == v)
        ranks.append(below + (equal + 1) / 2.0)
    return ranks


def _brute_spearman(a, b):
    ra, rb = _brute_ranks(list(a)), _brute_ranks(list(b))
    n = len(ra)
    ma, mb = sum(ra) / n, sum(rb) / n
    cov = sum((x - ma) * (y - mb) for x, y in zip(ra, rb))
    va = sum((x - ma) ** 2 for x in ra)
    vb = sum((y - mb) ** 2 for y in rb)
    return cov / (va * vb) ** 0.5


def test_accuracy():
    assert accuracy([0, 1, 2, 2], [0, 1, 1, 2]) == 0.75
    with pytest.raises(UsageError):
        accuracy([], [])
    with pytest.raises(UsageError):
        accuracy([0, 1], [0])


def test_average_ranks_with_ties():
    assert average_ranks([10, 20, 20, 30]).tolist() == [1.0, 2.5, 2.5, 4.0]


def test_spearman_examples():
    assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    assert spearman([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(4.5 / np.sqrt(22.5))


def test_spearman_matches_brute_force_on_tied_vectors():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(3, 30))
        a = rng.integers(0, 5, size=n).astype(float)
        b = rng.integers(0, 5, size=n).astype(float)
        if np.all(a == a[0]) or np.all(b == b[0]):
            continue
        assert spearman(a, b) == pytest.approx(_brute_spearman(a, b), abs=1e-9)


def test_spearman_monotone_transform_invariance():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = rng.normal(size=40)
        b = rng.normal(size=40)
        base = spearman(a, b)
        assert abs(spearman(a**3, b) - base) < 1e-12
        assert abs(spearman(np.exp(a), 2.0 * b + 1.0) - base) < 1e-12


def test_spearman_symmetric():
    rng = np.random.default_rng(8)
    a, b = rng.integers(0, 4, size=25), rng.normal(size=25)
    assert spearman(a, b) == pytest.approx(spearman(b, a), abs=1e-15)


def test_spearman_errors():
    with pytest.raises(UndefinedCorrelationError):
        spearman([1, 2, 3], [2, 2, 2])
    with pytest.raises(UsageError):
        spearman([1.0], [1.0])
    with pytest.raises(UsageError):
        spearman([1, 2, 3], [1, 2])


def test_spearman_per_instance():
    """Per-context correlations are averaged; contexts with constant gold are skipped."""

    pred = [1, 2, 3, 3, 2, 1, 5, 5]
    gold = [1, 2, 3, 1, 2, 3, 4, 4]
    groups = ["a", "a", "a", "b", "b", "b", "c", "c"]
    mean, used, skipped = spearman_per_instance(pred, gold, groups)
    assert mean == pytest.approx(0.0)
    assert (used, skipped) == (2, 1)

    with pytest.raises(UndefinedCorrelationError):
        spearman_per_instance([1, 2], [3, 3], ["a", "a"])


def test_report_serialization():
    report = EvalReport(accuracy=0.5, spearman=None, n=4, skipped=1, binning="floor")
    text = report.to_text()
    assert "accuracy=0.500000\n" in text
    assert "spearman=n/a\n" in text
    assert "skipped=1\n" in text
    data = json.loads(report.to_json())
    assert data["spearman"] is None
    assert data["n"] == 4
    assert data["binning"] == "floor"


def _gold_predictions(corpus):
    return [Prediction(i.id, i.class_label.value, i.plausibility_score) for i in corpus]


def test_predictions_file_format(tmp_path):
    path = tmp_path / "pred.tsv"
    write_predictions(path, [Prediction("1_1", 2, 4.25), Prediction("1_2", 0, 1.0000004)])
    assert path.read_text() == (
        "id\tpredicted_class\tpredicted_score\n1_1\t2\t4.250000\n1_2\t0\t1.000000\n"
    )
    assert read_predictions(path) == [Prediction("1_1", 2, 4.25), Prediction("1_2", 0, 1.0)]


def test_predictions_reject_bad_scores(tmp_path):
    """Scores must be finite and inside the 1-5 range."""

    path = tmp_path / "pred.tsv"
    path.write_text(
        "id\tpredicted_class\tpredicted_score\n"
        "1_1\t2\tnan\n1_2\t1\t9.5\n1_3\t0\tinf\n1_4\t1\t\n1_5\t0\t5.0\n"
    )
    with pytest.raises(DataValidationError) as e:
        read_predictions(path)
    assert [(issue.row, issue.field) for issue in e.value.issues] == [
        (2, "predicted_score"),
        (3, "predicted_score"),
        (4, "predicted_score"),
        (5, "predicted_score"),
    ]


def test_evaluate_gold_as_predictions(tmp_path, small_corpus, small_tsv):
    pred_path = tmp_path / "pred.tsv"
    write_predictions(pred_path, _gold_predictions(small_corpus))
    report = evaluate_predictions(pred_path, small_tsv)
    assert report.accuracy == 1.0
    assert report.spearman == pytest.approx(1.0)
    assert report.n == 6


def test_evaluate_joins_on_id(tmp_path, small_corpus, small_tsv):
    """Row order of the predictions file does not matter."""

    preds = _gold_predictions(small_corpus)
    preds[0] = Prediction(preds[0].id, 0, 2.0)
    ordered, shuffled = tmp_path / "a.tsv", tmp_path / "b.tsv"
    write_predictions(ordered, preds)
    write_predictions(shuffled, preds[::-1])
    assert evaluate_predictions(ordered, small_tsv) == evaluate_predictions(shuffled, small_tsv)


def test_evaluate_unmatched_ids(tmp_path, small_corpus, small_tsv):
    preds = _gold_predictions(small_corpus)[1:] + [Prediction("77_1", 1, 3.0)]
    pred_path = tmp_path / "pred.tsv"
    write_predictions(pred_path, preds)
    with pytest.raises(DataValidationError, match="77_1") as e:
        evaluate_predictions(pred_path, small_tsv)
    assert "1_1" in str(e.value)


def test_evaluate_constant_gold(tmp_path, small_corpus, make_instance):
    gold = Corpus([make_instance(id=f"1_{k}", score=3.0) for k in range(1, 4)])
    gold_path = tmp_path / "gold.tsv"
    write_tsv(gold, gold_path)
    pred_path = tmp_path / "pred.tsv"
    write_predictions(pred_path, [Prediction(f"1_{k}", 1, float(k)) for k in range(1, 4)])
    with pytest.raises(UndefinedCorrelationError):
        evaluate_predictions(pred_path, gold_path)


def test_evaluate_skips_unlabeled_gold(tmp_path, small_corpus, make_instance):
    gold = Corpus(list(small_corpus) + [make_instance(id="5_1", class_label=None, score=None)])
    gold_path = tmp_path / "gold.tsv"
    write_tsv(gold, gold_path)
    pred_path = tmp_path / "pred.tsv"
    write_predictions(pred_path, _gold_predictions(small_corpus) + [Prediction("5_1", 1, 3.0)])
    report = evaluate_predictions(pred_path, gold_path)
    assert (report.n, report.skipped) == (6, 1)
