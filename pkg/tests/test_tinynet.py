import numpy as np
import pytest

from common.errors import ConfigurationError, UsageError
from ordinal.coral import encode_ordinal, ideal_logits
from schemas.schemas import LossWeights, OrdinalLabel
from tests.conftest import make_batch, make_tiny_model
from tinynet.layers import DenseLayer, dense_forward, gelu, gelu_grad
from tinynet.model import (
    PARAM_NAMES,
    Batch,
    backward,
    batch_loss,
    forward,
    loss_and_gradients,
    sample_losses,
)
from tinynet.optim import (
    LrSchedule,
    OptimizerState,
    cosine_lr,
    optimizer_step,
    total_training_steps,
)


def test_dense_forward_example():
    layer = DenseLayer(W=[[1.0, 2.0], [3.0, 4.0]], b=[0.5, -0.5])
    np.testing.assert_allclose(dense_forward(layer, [1.0, 1.0]), [3.5, 6.5])
    np.testing.assert_allclose(dense_forward(layer, [[1.0, 0.0], [0.0, 1.0]]), [[1.5, 2.5], [2.5, 3.5]])


def test_dense_layer_validation():
    """Shape mismatches and non-finite parameters are rejected."""

    with pytest.raises(ConfigurationError):
        DenseLayer(W=[[1.0, 2.0]], b=[0.0, 0.0])
    with pytest.raises(ConfigurationError):
        DenseLayer(W=[[np.nan]], b=[0.0])
    with pytest.raises(ConfigurationError):
        dense_forward(DenseLayer(W=[[1.0, 2.0]], b=[0.0]), [1.0, 2.0, 3.0])


def test_gelu_examples():
    assert gelu(0.0) == 0.0
    assert gelu(1.0) == pytest.approx(0.8413447460685429)
    assert gelu(-1.0) == pytest.approx(-0.15865525393145707)


def test_gelu_odd_part_is_identity():
    """gelu(x) - gelu(-x) == x for the exact (CDF-based) GELU."""

    x = np.random.default_rng(0).uniform(-6.0, 6.0, size=500)
    np.testing.assert_allclose(gelu(x) - gelu(-x), x, rtol=0, atol=1e-12)


def test_gelu_grad_matches_finite_difference():
    x = np.linspace(-4.0, 4.0, 41)
    h = 1e-6
    numeric = (gelu(x + h) - gelu(x - h)) / (2 * h)
    np.testing.assert_allclose(gelu_grad(x), numeric, rtol=1e-6, atol=1e-8)


def test_forward_shapes(tiny_model, tiny_batch):
    cache = forward(tiny_model, tiny_batch.features)
    assert cache.hidden.shape == (5, 4)
    assert cache.class_logits.shape == (5, 2)
    assert cache.score_logits.shape == (5, 4)
    assert sample_losses(cache, tiny_batch).shape == (5, 2)


def test_zero_lambda_gives_zero_head_gradients(tiny_model, tiny_batch):
    """A head whose loss weight is zero receives no gradient."""

    _, grads = loss_and_gradients(tiny_model, tiny_batch, LossWeights(1.0, 0.0))
    assert not np.any(grads["score_head.weights"])
    assert not np.any(grads["score_head.biases"])
    assert np.any(grads["class_head.weights"])

    _, grads = loss_and_gradients(tiny_model, tiny_batch, LossWeights(0.0, 1.0))
    assert not np.any(grads["class_head.weights"])
    assert not np.any(grads["class_head.biases"])


def test_backward_returns_every_parameter(tiny_model, tiny_batch):
    cache = forward(tiny_model, tiny_batch.features)
    grads = backward(tiny_model, cache, tiny_batch, LossWeights())
    params = tiny_model.parameters()
    assert tuple(grads) == PARAM_NAMES
    for name in PARAM_NAMES:
        assert grads[name].shape == params[name].shape


def _single_sample(model, class_label, score_label, class_biases, score_biases):
    """A one-row batch for `model` with zeroed head weights and the given head biases."""

    params = model.parameters()
    params["class_head.weights"] = np.zeros_like(params["class_head.weights"])
    params["score_head.weights"] = np.zeros_like(params["score_head.weights"])
    params["class_head.biases"] = np.asarray(class_biases, dtype=np.float64)
    params["score_head.biases"] = np.asarray(score_biases, dtype=np.float64)
    batch = Batch(
        features=np.random.default_rng(7).normal(size=(1, model.input_dim)),
        class_bits=encode_ordinal(OrdinalLabel(class_label, 3)).as_array()[None, :],
        score_bits=encode_ordinal(OrdinalLabel(score_label, 5)).as_array()[None, :],
    )
    return model.with_parameters(params), batch


def test_backward_vanishes_at_target_logits(tiny_model):
    class_bits = encode_ordinal(OrdinalLabel(1, 3))
    score_bits = encode_ordinal(OrdinalLabel(2, 5))
    model, batch = _single_sample(
        tiny_model, 1, 2, ideal_logits(class_bits), ideal_logits(score_bits)
    )
    _, grads = loss_and_gradients(model, batch, LossWeights())
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    assert total < 1e-8


def test_backward_logit_gradient_is_sigmoid_minus_target(tiny_model):
    """Logit 0 with target 1, lambda 1 and one sample: d loss / d logit = -0.5."""

    model, batch = _single_sample(tiny_model, 1, 0, [0.0, -40.0], [-40.0] * 4)
    _, grads = loss_and_gradients(model, batch, LossWeights(1.0, 0.0))
    assert grads["class_head.biases"][0] == pytest.approx(-0.5)
    assert abs(grads["class_head.biases"][1]) < 1e-15
    assert not np.any(grads["score_head.biases"])


def test_with_parameters_rejects_wrong_shapes(tiny_model):
    params = tiny_model.parameters()
    params["projection.b"] = np.zeros(7)
    with pytest.raises(ConfigurationError):
        tiny_model.with_parameters(params)


def test_adamw_first_step_is_sign_step():
    """Bias correction makes the first update lr * g / (|g| + eps)."""

    state = OptimizerState(base_lr=0.1, weight_decay=0.0)
    params = {"w": np.array([1.0, -2.0, 3.0])}
    grads = {"w": np.array([0.5, -4.0, 0.0])}
    updated = optimizer_step(state, params, grads, lr=0.1)
    np.testing.assert_allclose(updated["w"], [0.9, -1.9, 3.0], atol=1e-7)
    assert state.step == 1
    np.testing.assert_array_equal(params["w"], [1.0, -2.0, 3.0])


def test_adamw_decay_is_decoupled():
    """With zero gradients only the decay term moves parameters."""

    state = OptimizerState(base_lr=0.1, weight_decay=0.01)
    params = {"w": np.array([2.0, -4.0])}
    updated = optimizer_step(state, params, {"w": np.zeros(2)}, lr=0.1)
    np.testing.assert_allclose(updated["w"], [2.0 * (1 - 0.001), -4.0 * (1 - 0.001)])


def test_adamw_zero_lr_leaves_parameters_bitwise(tiny_model, tiny_batch):
    state = OptimizerState(base_lr=0.0, weight_decay=0.00123974)
    _, grads = loss_and_gradients(tiny_model, tiny_batch, LossWeights())
    params = tiny_model.parameters()
    updated = optimizer_step(state, params, grads, lr=0.0)
    for name in PARAM_NAMES:
        assert np.array_equal(updated[name], params[name])


def test_adamw_rejects_mismatched_gradient():
    state = OptimizerState(base_lr=0.1)
    with pytest.raises(ConfigurationError):
        optimizer_step(state, {"w": np.zeros(2)}, {"w": np.zeros(3)}, lr=0.1)


def test_cosine_schedule():
    s = LrSchedule(base_lr=2e-3, total_steps=100)
    assert cosine_lr(s, 0) == pytest.approx(2e-3)
    assert cosine_lr(s, 50) == pytest.approx(1e-3)
    assert cosine_lr(s, 100) == pytest.approx(0.0, abs=1e-18)
    values = [cosine_lr(s, t) for t in range(101)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    with pytest.raises(UsageError):
        cosine_lr(s, 101)
    with pytest.raises(UsageError):
        cosine_lr(s, -1)
    with pytest.raises(ConfigurationError):
        LrSchedule(base_lr=1e-3, total_steps=0)


def test_total_training_steps():
    assert total_training_steps(5, 1600, 16) == 500
    assert total_training_steps(1, 17, 16) == 2
    assert total_training_steps(0, 100, 8) == 0


def test_full_batch_training_reduces_loss():
    """Fifty AdamW steps on one batch lower its loss in nearly every seeded trial."""

    decreased = 0
    for trial in range(20):
        model = make_tiny_model(seed=trial)
        batch = make_batch(100 + trial, 8, model.input_dim)
        weights = LossWeights()
        state = OptimizerState(base_lr=1e-3, weight_decay=0.0)

        start = batch_loss(model, batch, weights)
        for _ in range(50):
            _, grads = loss_and_gradients(model, batch, weights)
            model = model.with_parameters(optimizer_step(state, model.parameters(), grads, 1e-3))
        if batch_loss(model, batch, weights) < start:
            decreased += 1
    assert decreased >= 19
