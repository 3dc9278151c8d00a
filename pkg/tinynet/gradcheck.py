"""
Central finite-difference check of the analytic gradients.
"""

import attrs
import numpy as np

from common.errors import UsageError
from schemas.schemas import LossWeights

from .model import Batch, ModelParams, batch_loss, loss_and_gradients


@attrs.frozen
class GradCheckReport:
    """Per-tensor relative errors between analytic and numeric gradients."""

    errors: dict[str, float]
    zero_gradient: tuple[str, ...]
    tol: float

    @property
    def max_error(self) -> float:
        return max(self.errors.values()) if self.errors else 0.0

    @property
    def passed(self) -> bool:
        return self.max_error < self.tol


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """``|a - n| / (|a| + |n|)`` in the L2 norm; zero when both vanish."""

    denom = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / denom)


def numeric_gradients(
    model: ModelParams, batch: Batch, weights: LossWeights, h: float
) -> dict[str, np.ndarray]:
    params = {name: value.copy() for name, value in model.parameters().items()}
    numeric: dict[str, np.ndarray] = {}
    for name, value in params.items():
        grad = np.zeros_like(value)
        flat = value.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            plus = batch_loss(model.with_parameters(params), batch, weights)
            flat[i] = original - h
            minus = batch_loss(model.with_parameters(params), batch, weights)
            flat[i] = original
            grad.reshape(-1)[i] = (plus - minus) / (2.0 * h)
        numeric[name] = grad
    return numeric


def grad_check(
    model: ModelParams,
    batch: Batch,
    h: float = 1e-5,
    tol: float = 1e-5,
    weights: LossWeights | None = None,
) -> GradCheckReport:
    weights = weights or LossWeights()
    if h <= 0.0:
        raise UsageError(f"finite-difference step must be positive, got {h}")

    _, analytic = loss_and_gradients(model, batch, weights)
    numeric = numeric_gradients(model, batch, weights, h)

    errors = {name: relative_error(analytic[name], numeric[name]) for name in analytic}
    zero = tuple(name for name, grad in analytic.items() if not np.any(grad))
    return GradCheckReport(errors=errors, zero_gradient=zero, tol=float(tol))
