"""
Projection + two coral heads, with a hand-written backward pass.

    pooled x --Dense--> z --GELU--> a --+--> class head (2 units)
                                        +--> score head (4 units)

The pooled halves are unit-norm; the forward pass multiplies them by sqrt(d_e)
so the projection sees coordinates of unit mean square, the scale of an
encoder hidden state.

All arithmetic is float64. Parameters are exposed as an ordered name -> array
mapping; this order is also the checkpoint tensor order.
"""

import math
from typing import Optional

import attrs
import numpy as np
from scipy.special import expit

from common.errors import ConfigurationError
from encoder.featurize import FeaturizerConfig
from ordinal.coral import CLASS_UNITS, SCORE_UNITS, coral_forward
from ordinal.loss import combined_batch_loss, ordinal_bce_loss
from schemas.schemas import BinningMode, CoralHead, LossWeights, PoolingMode

from .layers import DenseLayer, dense_forward, gelu, gelu_grad

PARAM_NAMES = (
    "projection.W",
    "projection.b",
    "class_head.weights",
    "class_head.biases",
    "score_head.weights",
    "score_head.biases",
)

Params = dict[str, np.ndarray]


def pooled_dim(featurizer: FeaturizerConfig, pooling: PoolingMode) -> int:
    """Width of the pooled representation for a pooling mode."""

    return featurizer.dim * (2 if pooling is PoolingMode.CONCAT else 1)


@attrs.frozen(eq=False)
class ModelParams:
    """Featurizer settings plus every trainable tensor of the network."""

    featurizer: FeaturizerConfig
    pooling: PoolingMode
    binning: BinningMode
    seed: int
    projection: DenseLayer
    class_head: CoralHead
    score_head: CoralHead
    uses_embeddings: bool = False
    """True when inputs come from a precomputed embedding file instead of the featurizer."""

    def __attrs_post_init__(self):
        expected_in = pooled_dim(self.featurizer, self.pooling)
        if self.projection.in_dim != expected_in:
            raise ConfigurationError(
                f"projection expects {self.projection.in_dim} inputs but "
                f"{self.pooling.value} pooling of dim {self.featurizer.dim} gives {expected_in}"
            )
        for name, head, units in (
            ("class", self.class_head, CLASS_UNITS),
            ("score", self.score_head, SCORE_UNITS),
        ):
            if head.dim != self.projection.out_dim:
                raise ConfigurationError(
                    f"{name} head dim {head.dim} != projection output {self.projection.out_dim}"
                )
            if head.num_classes - 1 != units:
                raise ConfigurationError(
                    f"{name} head must have {units} units, got {head.num_classes - 1}"
                )

    @property
    def input_scale(self) -> float:
        return math.sqrt(self.featurizer.dim)

    @property
    def input_dim(self) -> int:
        return self.projection.in_dim

    @property
    def hidden_dim(self) -> int:
        return self.projection.out_dim

    def parameters(self) -> Params:
        return {
            "projection.W": self.projection.W,
            "projection.b": self.projection.b,
            "class_head.weights": self.class_head.weights,
            "class_head.biases": self.class_head.biases,
            "score_head.weights": self.score_head.weights,
            "score_head.biases": self.score_head.biases,
        }

    def with_parameters(self, params: Params) -> "ModelParams":
        """New model with the same settings and the given tensors."""

        missing = [name for name in PARAM_NAMES if name not in params]
        if missing:
            raise ConfigurationError(f"missing parameters: {', '.join(missing)}")
        for name in PARAM_NAMES:
            if np.shape(params[name]) != self.parameters()[name].shape:
                raise ConfigurationError(
                    f"parameter {name} has shape {np.shape(params[name])}, "
                    f"expected {self.parameters()[name].shape}"
                )
        return attrs.evolve(
            self,
            projection=DenseLayer(W=params["projection.W"], b=params["projection.b"]),
            class_head=CoralHead(
                weights=params["class_head.weights"], biases=params["class_head.biases"]
            ),
            score_head=CoralHead(
                weights=params["score_head.weights"], biases=params["score_head.biases"]
            ),
        )


def init_model(
    featurizer: FeaturizerConfig,
    pooling: PoolingMode = PoolingMode.CONCAT,
    binning: BinningMode = BinningMode.FLOOR,
    hidden_dim: Optional[int] = None,
    seed: int = 42,
    uses_embeddings: bool = False,
) -> ModelParams:
    """
    Seeded initialization. `hidden_dim` defaults to half the featurizer dim.
    """

    hidden = int(hidden_dim) if hidden_dim else max(featurizer.dim // 2, 1)
    if hidden < 1:
        raise ConfigurationError(f"hidden dim must be positive, got {hidden}")

    rng = np.random.default_rng(seed)
    in_dim = pooled_dim(featurizer, pooling)
    projection = DenseLayer.initialize(in_dim, hidden, rng)
    class_head = CoralHead.initialize(hidden, CLASS_UNITS + 1, rng)
    score_head = CoralHead.initialize(hidden, SCORE_UNITS + 1, rng)
    return ModelParams(
        featurizer=featurizer,
        pooling=pooling,
        binning=binning,
        seed=seed,
        projection=projection,
        class_head=class_head,
        score_head=score_head,
        uses_embeddings=uses_embeddings,
    )


@attrs.frozen(eq=False)
class Batch:
    """Pooled inputs with the binary targets of both heads."""

    features: np.ndarray
    class_bits: np.ndarray
    score_bits: np.ndarray

    def __attrs_post_init__(self):
        n = self.features.shape[0]
        if self.class_bits.shape != (n, CLASS_UNITS) or self.score_bits.shape != (n, SCORE_UNITS):
            raise ConfigurationError(
                f"batch targets {self.class_bits.shape}/{self.score_bits.shape} "
                f"do not match {n} inputs"
            )

    def __len__(self) -> int:
        return int(self.features.shape[0])


@attrs.frozen(eq=False)
class ForwardCache:
    """Intermediate values of a forward pass, kept for backward."""

    features: np.ndarray
    """Pooled inputs after `ModelParams.input_scale`."""

    pre_activation: np.ndarray
    hidden: np.ndarray
    class_logits: np.ndarray
    score_logits: np.ndarray


def forward(model: ModelParams, features: np.ndarray) -> ForwardCache:
    features = np.atleast_2d(np.asarray(features, dtype=np.float64)) * model.input_scale
    z = dense_forward(model.projection, features)
    a = gelu(z)
    a = np.atleast_2d(a)
    return ForwardCache(
        features=features,
        pre_activation=z,
        hidden=a,
        class_logits=coral_forward(model.class_head, a),
        score_logits=coral_forward(model.score_head, a),
    )


def sample_losses(cache: ForwardCache, batch: Batch) -> np.ndarray:
    """(n, 2) array of per-sample (l_c, l_r)."""

    l_c = ordinal_bce_loss(cache.class_logits, batch.class_bits)
    l_r = ordinal_bce_loss(cache.score_logits, batch.score_bits)
    return np.stack([np.atleast_1d(l_c), np.atleast_1d(l_r)], axis=1)


def batch_loss(model: ModelParams, batch: Batch, weights: LossWeights) -> float:
    cache = forward(model, batch.features)
    return combined_batch_loss(sample_losses(cache, batch), weights)


def backward(
    model: ModelParams, cache: ForwardCache, batch: Batch, weights: LossWeights
) -> Params:
    """
    Analytic gradients of the joint batch loss for every trainable tensor.

    For each unit, d loss / d logit = sigmoid(logit) - target, scaled by the
    head's lambda and 1/n.
    """

    n = len(batch)
    d_class = (weights.lambda_c / n) * (expit(cache.class_logits) - batch.class_bits)
    d_score = (weights.lambda_r / n) * (expit(cache.score_logits) - batch.score_bits)

    # Units share one weight vector, so their logit gradients add up.
    class_sum = d_class.sum(axis=1)
    score_sum = d_score.sum(axis=1)

    d_hidden = np.outer(class_sum, model.class_head.weights) + np.outer(
        score_sum, model.score_head.weights
    )
    d_pre = d_hidden * gelu_grad(cache.pre_activation)

    return {
        "projection.W": d_pre.T @ cache.features,
        "projection.b": d_pre.sum(axis=0),
        "class_head.weights": cache.hidden.T @ class_sum,
        "class_head.biases": d_class.sum(axis=0),
        "score_head.weights": cache.hidden.T @ score_sum,
        "score_head.biases": d_score.sum(axis=0),
    }


def loss_and_gradients(
    model: ModelParams, batch: Batch, weights: LossWeights
) -> tuple[float, Params]:
    cache = forward(model, batch.features)
    loss = combined_batch_loss(sample_losses(cache, batch), weights)
    return loss, backward(model, cache, batch, weights)


def predict_logits(model: ModelParams, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Class and score logits for a batch of pooled inputs (no targets needed)."""

    cache = forward(model, features)
    return cache.class_logits, cache.score_logits
