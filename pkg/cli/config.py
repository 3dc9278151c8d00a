"""
Training configuration.

Values come from three layers, highest first: command-line flags, a flat
``key = value`` config file, and the defaults below. Config-file keys are
the `TrainConfig` field names.
"""

import math
import os
from pathlib import Path
from typing import Any, Mapping, Optional

import attrs

from common.errors import ConfigurationError
from schemas.schemas import BinningMode, PoolingMode

THREADS_ENV = "CORAL_CLOZE_THREADS"
SELECT_METRICS = ("spearman", "accuracy")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _to_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    key = str(value).strip().lower()
    if key in _TRUE:
        return True
    if key in _FALSE:
        return False
    raise ConfigurationError(f"expected a boolean, got {value!r}")


def _to_optional_int(value) -> Optional[int]:
    if value is None or str(value).strip().lower() in {"", "none"}:
        return None
    return int(value)


def _positive(instance, attribute, value):
    if not value > 0:
        raise ConfigurationError(f"{attribute.name} must be positive, got {value}")


def _non_negative(instance, attribute, value):
    if not (math.isfinite(value) and value >= 0):
        raise ConfigurationError(f"{attribute.name} must be >= 0, got {value}")


@attrs.frozen
class TrainConfig:
    """Hyperparameters of one training run (defaults are the published fine-tuning values)."""

    epochs: int = attrs.field(default=5, converter=int, validator=_non_negative)
    batch_size: int = attrs.field(default=16, converter=int, validator=_positive)
    base_lr: float = attrs.field(default=1.90323e-05, converter=float, validator=_non_negative)
    weight_decay: float = attrs.field(default=0.00123974, converter=float, validator=_non_negative)
    lambda_c: float = attrs.field(default=0.5, converter=float, validator=_non_negative)
    lambda_r: float = attrs.field(default=0.5, converter=float, validator=_non_negative)
    binning: BinningMode = attrs.field(default=BinningMode.FLOOR, converter=BinningMode)
    pooling: PoolingMode = attrs.field(default=PoolingMode.CONCAT, converter=PoolingMode)
    d_e: int = attrs.field(default=512, converter=int, validator=_positive)
    """Featurizer dimension (hash buckets per half of the pooled vector)."""

    h: Optional[int] = attrs.field(default=None, converter=_to_optional_int)
    """Hidden width of the projection; None means d_e // 2."""

    seed: int = attrs.field(default=42, converter=int)
    hash_seed: int = attrs.field(default=0, converter=int)
    merge_dev: bool = attrs.field(default=False, converter=_to_bool)
    select: str = attrs.field(default="spearman", converter=str)
    per_instance: bool = attrs.field(default=False, converter=_to_bool)

    @h.validator
    def _check_h(self, attribute, value):
        if value is not None and value < 1:
            raise ConfigurationError(f"h must be positive, got {value}")

    @select.validator
    def _check_select(self, attribute, value):
        if value not in SELECT_METRICS:
            raise ConfigurationError(
                f"select must be one of {', '.join(SELECT_METRICS)}, got {value!r}"
            )

    def to_lines(self) -> list[str]:
        """``key=value`` lines in field order, the same syntax the config file accepts."""

        lines = []
        for field in attrs.fields(TrainConfig):
            value = getattr(self, field.name)
            if isinstance(value, (BinningMode, PoolingMode)):
                value = value.value
            elif value is None:
                value = "none"
            elif isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{field.name}={value}")
        return lines


CONFIG_KEYS = tuple(field.name for field in attrs.fields(TrainConfig))


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are ignored."""

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found at: {path}")

    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ConfigurationError(f"{path}: config file is not valid UTF-8 ({e})") from e

    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{line_no}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{path}:{line_no}: unknown config key {key!r}")
        values[key] = value
    return values


def build_config(
    file_values: Optional[Mapping[str, Any]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> TrainConfig:
    """Defaults, then file values, then overrides (None-valued overrides are ignored)."""

    merged: dict[str, Any] = dict(file_values or {})
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"unknown config key {key!r}")
        merged[key] = value
    try:
        return TrainConfig(**merged)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"invalid configuration: {e}") from e


def threads_from_env() -> int:
    """Worker-thread cap for featurization from CORAL_CLOZE_THREADS (default 1)."""

    raw = os.getenv(THREADS_ENV)
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be >= 1, got {threads}")
    return threads
