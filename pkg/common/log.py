"""
Tagged progress messages on the error stream.

Messages look like ``[Train] epoch 1/5 loss=0.6931`` and are written through
``tqdm.write`` so they interleave cleanly with active progress bars.
"""

import sys

from tqdm import tqdm

_QUIET = False


def set_quiet(quiet: bool) -> None:
    """Silence info messages and progress bars (warnings are still shown)."""

    global _QUIET
    _QUIET = bool(quiet)


def info(tag: str, message: str) -> None:
    if not _QUIET:
        tqdm.write(f"[{tag}] {message}", file=sys.stderr)


def warn(tag: str, message: str) -> None:
    tqdm.write(f"[{tag}] WARNING: {message}", file=sys.stderr)


def error(message: str) -> None:
    tqdm.write(f"error: {message}", file=sys.stderr)


def progress(iterable, desc: str, total: int | None = None):
    """Wrap an iterable in a tqdm bar on stderr unless quiet."""

    return tqdm(iterable, desc=desc, total=total, disable=_QUIET, file=sys.stderr, leave=False)
