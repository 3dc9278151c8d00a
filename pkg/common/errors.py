"""
Exception hierarchy shared by every package.

Each error class carries the process exit code the CLI maps it to.
"""

from typing import NamedTuple, Sequence


class CoralClozeError(Exception):
    """Base class for all errors raised by this project."""

    exit_code: int = 2


class ConfigurationError(CoralClozeError, ValueError):
    """Shape/dimension mismatch, bad config value, or incompatible checkpoint."""


class UsageError(CoralClozeError, ValueError):
    """An operation was called outside its preconditions (empty batch, bad step, ...)."""


class NumericError(CoralClozeError, ArithmeticError):
    """Non-finite values or a failed numerical check."""

    exit_code = 3


class UndefinedCorrelationError(NumericError):
    """Correlation requested for a constant vector."""


class RowIssue(NamedTuple):
    """Location and description of a single invalid value in a data file."""

    path: str
    row: int
    field: str
    message: str

    def __str__(self):
        return f"{self.path}:{self.row}: [{self.field}] {self.message}"


class DataValidationError(CoralClozeError, ValueError):
    """One or more rows of an input file failed validation."""

    max_reported = 10

    def __init__(self, issues: Sequence[RowIssue] | str):
        if isinstance(issues, str):
            issues = [RowIssue("<data>", 0, "", issues)]
        self.issues: list[RowIssue] = list(issues)

        lines = [str(issue) for issue in self.issues[: self.max_reported]]
        hidden = len(self.issues) - len(lines)
        if hidden > 0:
            lines.append(f"... and {hidden} more issue(s)")
        super().__init__("\n".join(lines))
