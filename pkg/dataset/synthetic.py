"""
Synthetic cloze data with a planted lexical signal.

Every context gets five fillers, one drawn from each of five word tiers. A
filler's gold score is its tier's value plus bounded uniform noise; its class
is the score binned at 2.5 and 3.5. Any model that learns which tier a filler
word belongs to can rank and classify the data almost perfectly.
"""

import numpy as np

from schemas.schemas import PLACEHOLDER, ClozeInstance, Corpus, PlausibilityClass, ResolvedPattern

from .splits import split_by_context

TIER_SCORES = (1.2, 2.0, 3.0, 4.0, 4.8)

TIER_WORDS = (
    ("zorblat", "quiffen", "grumbek", "vashtol", "plinder", "skorvi"),
    ("maddrel", "tovinch", "brellow", "sniquet", "jorrand", "feltrum"),
    ("wimbral", "cadrosk", "yestral", "nupplin", "hogwerth", "drisset"),
    ("pellast", "orvinta", "klumber", "thessil", "gavrond", "mirtoke"),
    ("axolind", "bravent", "cuspero", "dwelkin", "ellomar", "fyndril"),
)

_VERBS = ("wash", "fold", "rinse", "check", "store", "trim", "heat", "clean", "sort", "mark")
_NOUNS = ("towel", "bowl", "shelf", "lid", "jar", "brush", "sheet", "cup", "box", "rack")
_ADJS = ("warm", "dry", "small", "clean", "old", "soft", "flat", "large", "thin", "plain")
_TOPICS = ("Kitchen", "Laundry", "Garden", "Garage", "Bathroom", "Closet")
_SECTIONS = ("Getting Started", "Following a Basic Routine", "Finishing Up", "Preparing")

SCORE_NOISE = 0.25


def _class_for_score(score: float) -> PlausibilityClass:
    if score < 2.5:
        return PlausibilityClass.IMPLAUSIBLE
    if score < 3.5:
        return PlausibilityClass.NEUTRAL
    return PlausibilityClass.PLAUSIBLE


def _pick(rng: np.random.Generator, words: tuple[str, ...]) -> str:
    return words[int(rng.integers(len(words)))]


def _sentence(rng: np.random.Generator) -> str:
    return f"{_pick(rng, _VERBS).capitalize()} the {_pick(rng, _ADJS)} {_pick(rng, _NOUNS)}."


def make_synthetic_corpus(
    n_contexts: int, seed: int = 0, noise: float = SCORE_NOISE
) -> Corpus:
    """`n_contexts` contexts with five fillers each (ids "<context>_1" .. "<context>_5")."""

    rng = np.random.default_rng(seed)
    patterns = list(ResolvedPattern)
    instances: list[ClozeInstance] = []

    for ctx in range(1, n_contexts + 1):
        pattern = patterns[int(rng.integers(len(patterns)))]
        title = f"How to Organize Your {_pick(rng, _TOPICS)}"
        section = _pick(rng, _SECTIONS)
        previous = " ".join(_sentence(rng) for _ in range(2))
        sentence = (
            f"{_pick(rng, _VERBS).capitalize()} the {PLACEHOLDER} {_pick(rng, _NOUNS)} "
            f"before you {_pick(rng, _VERBS)} it."
        )
        follow_up = _sentence(rng)

        tiers = rng.permutation(len(TIER_SCORES))
        for filler_idx, tier in enumerate(tiers, start=1):
            filler = _pick(rng, TIER_WORDS[tier])
            score = TIER_SCORES[tier] + rng.uniform(-noise, noise)
            score = float(min(max(score, 1.0), 5.0))
            instances.append(
                ClozeInstance(
                    id=f"{ctx}_{filler_idx}",
                    resolved_pattern=pattern,
                    article_title=title,
                    section_header=section,
                    previous_context=previous,
                    sentence=sentence,
                    follow_up_context=follow_up,
                    filler=filler,
                    class_label=_class_for_score(score),
                    plausibility_score=score,
                )
            )
    return Corpus(instances)


def make_synthetic_splits(
    n_instances: int = 2000, dev_fraction: float = 0.2, seed: int = 0
) -> tuple[Corpus, Corpus]:
    """Train/dev corpora with whole contexts held out for dev."""

    corpus = make_synthetic_corpus(max(n_instances // len(TIER_SCORES), 1), seed=seed)
    return split_by_context(corpus, dev_fraction, seed)
