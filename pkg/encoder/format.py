"""
Textual input formatting: all instance features rendered as labelled lines.

    Resolved pattern: ADDED COMPOUND
    Section header: Following a Basic Routine
    Article title: How to Get Rid of Peeling Skin
    Text: <previous context> <sentence with filler> <follow-up context>
"""

import attrs

from common.errors import DataValidationError
from schemas.schemas import PLACEHOLDER, ClozeInstance, placeholder_count


@attrs.frozen
class FormattedInput:
    """Rendered input text and the character span the filler occupies in it."""

    text: str
    filler_span: tuple[int, int]

    @property
    def filler(self) -> str:
        start, end = self.filler_span
        return self.text[start:end]


def substitute_filler(sentence: str, filler: str) -> tuple[str, int]:
    """
    Put `filler` in place of the blank; returns the sentence and the filler offset.

    An empty filler removes the blank and the whitespace around it.
    """

    count = placeholder_count(sentence)
    if count != 1:
        raise DataValidationError(f"sentence must contain exactly one {PLACEHOLDER}, found {count}")

    left, right = sentence.strip().split(PLACEHOLDER)
    if filler:
        return left + filler + right, len(left)

    left, right = left.rstrip(), right.lstrip()
    if left and right:
        return f"{left} {right}", len(left) + 1
    return left + right, len(left)


def format_instance(instance: ClozeInstance, filler: str) -> FormattedInput:
    sentence, filler_offset = substitute_filler(instance.sentence, filler)

    header = (
        f"Resolved pattern: {instance.resolved_pattern.value}\n"
        f"Section header: {instance.section_header.strip()}\n"
        f"Article title: {instance.article_title.strip()}\n"
        "Text: "
    )
    previous = instance.previous_context.strip()
    follow_up = instance.follow_up_context.strip()

    text = header
    if previous:
        text += previous + " "
    start = len(text) + filler_offset
    text += sentence
    if follow_up:
        text += " " + follow_up

    return FormattedInput(text=text, filler_span=(start, start + len(filler)))
