"""Reference predictors used as baselines.

``adjacent-noun`` encodes the common heuristic that a verb's subject is the
noun phrase ending nearest before it; ``uniform-random`` draws uniformly
from the sentence's noun occurrences with a fixed seed.
"""

from __future__ import annotations

import numpy as np

from .corpus import AnnotatedSample
from .probe import PredictionRecord, VerbPrediction


def _one_hot(n: int, index: int) -> tuple[float, ...]:
    return tuple(1.0 if i == index else 0.0 for i in range(n))


def _record(sample: AnnotatedSample, picks: list[int]) -> PredictionRecord:
    verbs = tuple(
        VerbPrediction(
            probs=_one_hot(sample.n_nouns, pick),
            predicted=pick,
            gold=int(sample.subject_map[i]),
            rule=sample.verb_rules[i],
            scope=sample.verb_scopes[i],
        )
        for i, pick in enumerate(picks)
    )
    return PredictionRecord(
        sentence_id=sample.sentence_id,
        tree_id=sample.tree_id,
        depth=sample.depth,
        n_nouns=sample.n_nouns,
        verbs=verbs,
    )


def adjacent_noun_predictions(samples: list[AnnotatedSample]) -> list[PredictionRecord]:
    """Pick the noun phrase ending nearest before each verb (falling back to
    the earliest-starting noun after it, for verb-initial orders)."""
    records = []
    for s in samples:
        picks = []
        for span in s.verb_spans:
            verb_start = span[0]
            before = [
                (max(noun), j)
                for j, noun in enumerate(s.noun_spans)
                if max(noun) < verb_start
            ]
            if before:
                picks.append(max(before)[1])
            else:
                after = [(min(noun), j) for j, noun in enumerate(s.noun_spans)]
                picks.append(min(after)[1])
        records.append(_record(s, picks))
    return records


def uniform_random_predictions(
    samples: list[AnnotatedSample], seed: int = 0
) -> list[PredictionRecord]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return [
        _record(s, [int(rng.integers(s.n_nouns)) for _ in s.verb_spans])
        for s in samples
    ]
