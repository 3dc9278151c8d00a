"""
Dense layer and exact GELU.
"""

import math

import attrs
import numpy as np
from scipy.special import ndtr

from common.errors import ConfigurationError

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _as_finite(value, ndim: int) -> np.ndarray:
    arr = np.array(value, dtype=np.float64)
    if arr.ndim != ndim:
        raise ConfigurationError(f"expected a {ndim}-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError("layer parameters contain non-finite entries")
    return arr


@attrs.frozen(eq=False)
class DenseLayer:
    """Fully connected layer ``W x + b`` with W of shape (out, in)."""

    W: np.ndarray = attrs.field(converter=lambda v: _as_finite(v, 2))
    b: np.ndarray = attrs.field(converter=lambda v: _as_finite(v, 1))

    def __attrs_post_init__(self):
        if self.W.shape[0] != self.b.shape[0]:
            raise ConfigurationError(
                f"dense layer W has {self.W.shape[0]} rows but b has {self.b.shape[0]} entries"
            )

    @property
    def in_dim(self) -> int:
        return int(self.W.shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.W.shape[0])

    @classmethod
    def initialize(cls, in_dim: int, out_dim: int, rng: np.random.Generator) -> "DenseLayer":
        """Uniform(-1/sqrt(in), 1/sqrt(in)) weights and biases."""

        bound = 1.0 / math.sqrt(in_dim)
        W = rng.uniform(-bound, bound, size=(out_dim, in_dim))
        b = rng.uniform(-bound, bound, size=out_dim)
        return cls(W=W, b=b)


def dense_forward(layer: DenseLayer, x: np.ndarray) -> np.ndarray:
    """``W x + b`` for one vector, or row-wise for a batch."""

    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != layer.in_dim:
        raise ConfigurationError(f"dense layer expects dim {layer.in_dim}, got {x.shape[-1]}")
    return x @ layer.W.T + layer.b


def gelu(x):
    """Exact GELU, ``x * Phi(x)`` with the standard normal CDF."""

    x = np.asarray(x, dtype=np.float64)
    out = x * ndtr(x)
    return float(out) if out.ndim == 0 else out


def gelu_grad(x):
    """Derivative of the exact GELU: ``Phi(x) + x * phi(x)``."""

    x = np.asarray(x, dtype=np.float64)
    return ndtr(x) + x * _INV_SQRT_2PI * np.exp(-0.5 * x * x)
