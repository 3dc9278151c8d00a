"""
AdamW with decoupled weight decay, and the cosine learning-rate schedule.
"""

import math

import attrs
import numpy as np

from common.errors import ConfigurationError, UsageError

from .model import Params


def _open_unit(instance, attribute, value):
    if not 0.0 < value < 1.0:
        raise ConfigurationError(f"{attribute.name} must be in (0, 1), got {value}")


@attrs.define(eq=False)
class OptimizerState:
    """Moment accumulators and constants of AdamW."""

    base_lr: float
    weight_decay: float = 0.0
    beta1: float = attrs.field(default=0.9, validator=_open_unit)
    beta2: float = attrs.field(default=0.999, validator=_open_unit)
    eps: float = 1e-8
    step: int = 0
    m: dict[str, np.ndarray] = attrs.field(factory=dict)
    v: dict[str, np.ndarray] = attrs.field(factory=dict)


def optimizer_step(state: OptimizerState, params: Params, grads: Params, lr: float) -> Params:
    """
    One AdamW update; returns new parameter arrays and advances `state`.

        theta <- theta - lr * m_hat / (sqrt(v_hat) + eps) - lr * weight_decay * theta
    """

    if lr < 0.0:
        raise UsageError(f"learning rate must be >= 0, got {lr}")

    state.step += 1
    t = state.step
    bias_c1 = 1.0 - state.beta1**t
    bias_c2 = 1.0 - state.beta2**t

    updated: Params = {}
    for name, theta in params.items():
        grad = grads[name]
        if grad.shape != theta.shape:
            raise ConfigurationError(
                f"gradient for {name} has shape {grad.shape}, parameter has {theta.shape}"
            )
        m = state.m.get(name)
        v = state.v.get(name)
        if m is None:
            m = np.zeros_like(theta)
            v = np.zeros_like(theta)

        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        state.m[name] = m
        state.v[name] = v

        m_hat = m / bias_c1
        v_hat = v / bias_c2
        step = m_hat / (np.sqrt(v_hat) + state.eps) + state.weight_decay * theta
        updated[name] = theta - lr * step

    return updated


@attrs.frozen
class LrSchedule:
    """Cosine decay from `base_lr` at step 0 to zero at `total_steps`."""

    base_lr: float
    total_steps: int = attrs.field()

    @total_steps.validator
    def _check_total(self, attribute, value):
        if value <= 0:
            raise ConfigurationError(f"total_steps must be positive, got {value}")


def cosine_lr(s: LrSchedule, t: int) -> float:
    if not 0 <= t <= s.total_steps:
        raise UsageError(f"schedule step {t} outside 0..{s.total_steps}")
    return s.base_lr * 0.5 * (1.0 + math.cos(math.pi * t / s.total_steps))


def total_training_steps(epochs: int, n_train: int, batch_size: int) -> int:
    """One schedule step per optimizer step: epochs * ceil(n / batch_size)."""

    return int(epochs) * math.ceil(n_train / batch_size)
