import numpy as np
import pytest

from common.log import set_quiet
from dataset.tsv import write_tsv
from encoder.featurize import FeaturizerConfig
from ordinal.coral import encode_ordinal
from schemas.schemas import (
    ClozeInstance,
    Corpus,
    OrdinalLabel,
    PlausibilityClass,
    PoolingMode,
    ResolvedPattern,
)
from tinynet.model import Batch, init_model, pooled_dim


@pytest.fixture(autouse=True)
def quiet_logs():
    """Keep progress bars and info lines out of test output."""

    set_quiet(True)
    yield
    set_quiet(False)


def make_instance(
    id="1_1",
    filler="lid",
    class_label=PlausibilityClass.PLAUSIBLE,
    score=4.2,
    sentence="Put the [FILLER] on the jar.",
    previous="Fill the jar with water.",
    follow_up="Shake it well.",
):
    return ClozeInstance(
        id=id,
        resolved_pattern=ResolvedPattern.IMPLICIT_REFERENCE,
        article_title="How to Store Soup",
        section_header="Freezing",
        previous_context=previous,
        sentence=sentence,
        follow_up_context=follow_up,
        filler=filler,
        class_label=class_label,
        plausibility_score=score,
    )


@pytest.fixture(name="make_instance")
def make_instance_fixture():
    return make_instance


@pytest.fixture
def small_corpus():
    """Two contexts with three fillers each, all labeled."""

    rows = [
        ("1_1", "lid", PlausibilityClass.PLAUSIBLE, 4.6),
        ("1_2", "cap", PlausibilityClass.NEUTRAL, 3.0),
        ("1_3", "sock", PlausibilityClass.IMPLAUSIBLE, 1.4),
        ("2_1", "towel", PlausibilityClass.PLAUSIBLE, 4.0),
        ("2_2", "cloth", PlausibilityClass.NEUTRAL, 2.8),
        ("2_3", "brick", PlausibilityClass.IMPLAUSIBLE, 1.2),
    ]
    return Corpus([make_instance(id=i, filler=f, class_label=c, score=s) for i, f, c, s in rows])


@pytest.fixture
def small_tsv(tmp_path, small_corpus):
    path = tmp_path / "small.tsv"
    write_tsv(small_corpus, path)
    return path


def make_tiny_model(seed=0, dim=8, hidden=4, pooling=PoolingMode.CONCAT):
    return init_model(FeaturizerConfig(dim=dim), pooling=pooling, hidden_dim=hidden, seed=seed)


def make_batch(seed, n, in_dim):
    rng = np.random.default_rng(seed)
    class_bits = [encode_ordinal(OrdinalLabel(y, 3)).as_array() for y in rng.integers(0, 3, n)]
    score_bits = [encode_ordinal(OrdinalLabel(y, 5)).as_array() for y in rng.integers(0, 5, n)]
    return Batch(
        features=rng.normal(size=(n, in_dim)),
        class_bits=np.stack(class_bits),
        score_bits=np.stack(score_bits),
    )


@pytest.fixture
def tiny_model():
    return make_tiny_model()


@pytest.fixture
def tiny_batch(tiny_model):
    return make_batch(1, 5, pooled_dim(tiny_model.featurizer, tiny_model.pooling))
