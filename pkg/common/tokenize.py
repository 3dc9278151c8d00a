"""
Surrogate tokenizer used by the hashed n-gram featurizer.

Lowercases the text and splits on Unicode whitespace and punctuation
boundaries: runs of word characters become tokens and every punctuation
character is a token of its own.
"""

import re

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def tokenize_text(text: str) -> list[str]:
    """Given input text, return the lowercased token list used for word n-grams."""

    return _TOKEN_RE.findall((text or "").lower())


def word_ngrams(tokens: list[str], orders: tuple[int, ...]) -> list[str]:
    """All contiguous token n-grams for the requested orders, joined by a space."""

    grams: list[str] = []
    for n in orders:
        if n <= 0:
            continue
        for i in range(len(tokens) - n + 1):
            grams.append(" ".join(tokens[i : i + n]))
    return grams


def char_ngrams(tokens: list[str], orders: tuple[int, ...]) -> list[str]:
    """
    Character n-grams taken inside space-padded tokens.

    Padding marks token boundaries, so "skin" yields " sk", "ski", "kin", "in "
    for order 3. Tokens shorter than an order contribute their padded form once for that order.
    """

    grams: list[str] = []
    for token in tokens:
        padded = f" {token} "
        for n in orders:
            if n <= 0:
                continue
            if len(padded) <= n:
                grams.append(padded)
                continue
            for i in range(len(padded) - n + 1):
                grams.append(padded[i : i + n])
    return grams
