import numpy as np
import pytest

from common.errors import UsageError
from schemas.schemas import LossWeights, PoolingMode
from tests.conftest import make_batch, make_tiny_model
from tinynet.gradcheck import grad_check, relative_error
from tinynet.model import PARAM_NAMES


@pytest.mark.parametrize("seed", range(20))
def test_gradients_match_finite_differences(seed):
    """Analytic gradients agree with central differences on seeded miniature models."""

    rng = np.random.default_rng(1000 + seed)
    pooling = PoolingMode.CONCAT if seed % 2 == 0 else PoolingMode.FILLER_ONLY
    model = make_tiny_model(seed=seed, dim=8, hidden=int(rng.integers(2, 6)), pooling=pooling)
    batch = make_batch(seed, int(rng.integers(1, 9)), model.input_dim)
    weights = LossWeights(*rng.uniform(0.1, 1.0, size=2))

    report = grad_check(model, batch, h=1e-5, tol=1e-5, weights=weights)
    assert set(report.errors) == set(PARAM_NAMES)
    assert report.passed, report.errors


def test_zero_regression_weight_reports_zero_gradient(tiny_model, tiny_batch):
    report = grad_check(tiny_model, tiny_batch, weights=LossWeights(0.5, 0.0))
    assert "score_head.weights" in report.zero_gradient
    assert "score_head.biases" in report.zero_gradient
    assert "class_head.weights" not in report.zero_gradient
    assert report.passed


def test_zero_tolerance_fails(tiny_model, tiny_batch):
    """No real check can have a max error strictly below zero."""

    assert not grad_check(tiny_model, tiny_batch, tol=0.0).passed


def test_step_must_be_positive(tiny_model, tiny_batch):
    with pytest.raises(UsageError):
        grad_check(tiny_model, tiny_batch, h=0.0)


def test_relative_error():
    assert relative_error(np.zeros(3), np.zeros(3)) == 0.0
    assert relative_error(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 0.0
    assert relative_error(np.array([1.0]), np.array([-1.0])) == pytest.approx(1.0)
