"""
Evaluation report and its two serializations.

Text form is one ``key=value`` per line. JSON form is an object with keys
``accuracy``, ``spearman``, ``n``, ``skipped``, ``spearman_mode``,
``contexts_skipped``, ``binning``, ``pooling`` and ``split``; absent values
are ``null``.
"""

import json
from typing import Optional

import attrs

from common.errors import ConfigurationError


@attrs.frozen
class EvalReport:
    accuracy: float
    spearman: Optional[float]
    """None when the correlation is undefined (constant predictions)."""

    n: int
    skipped: int = 0
    spearman_mode: str = "global"
    contexts_skipped: int = 0
    binning: Optional[str] = None
    pooling: Optional[str] = None
    split: str = "dev"

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "spearman": self.spearman,
            "n": self.n,
            "skipped": self.skipped,
            "spearman_mode": self.spearman_mode,
            "contexts_skipped": self.contexts_skipped,
            "binning": self.binning,
            "pooling": self.pooling,
            "split": self.split,
        }

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            if value is None:
                value = "n/a"
            elif isinstance(value, float):
                value = f"{value:.6f}"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "text":
            return self.to_text()
        if fmt == "json":
            return self.to_json()
        raise ConfigurationError(f"unknown report format {fmt!r} (expected text or json)")
