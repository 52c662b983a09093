"""One-shot tuning protocol: a single fresh realization per derivation tree,
lexically disjoint from the evaluation set, used to adapt the probe head
with a few epochs of training before re-evaluating on the original data."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import AnnotatedSample, DatasetHeader, build_samples
from .errors import DataError
from .grammars import builtin_grammar
from .lexicon import GenerationConfig, Lexicon

DEFAULT_TUNING_EPOCHS = 5


@dataclass(frozen=True)
class OneShotProtocol:
    """What to run: train the probe head on the tuning set for a few
    epochs, then evaluate on the full original dataset."""

    grammar: str
    tuning_seed: int
    tuning_size: int
    epochs: int
    evaluation: str = "original-dataset"


def one_shot_mode(
    full_samples: list[AnnotatedSample],
    header: DatasetHeader,
    lexicon: Lexicon,
    seed2: int,
    epochs: int = DEFAULT_TUNING_EPOCHS,
) -> tuple[list[AnnotatedSample], OneShotProtocol]:
    """Build the tuning set: one realization per tree under a fresh seed.

    The evaluation set's sentences are excluded by exact string comparison
    (slot sizes permitting); a seed collision with the original dataset is
    rejected outright.
    """
    if seed2 == header.seed:
        raise DataError(
            f"one-shot seed {seed2} collides with the dataset seed; pick another"
        )
    g = builtin_grammar(header.grammar, lexicon)
    forbidden = frozenset(tuple(s.words) for s in full_samples)
    cfg = GenerationConfig(
        max_depth=header.max_depth, seed=seed2, realizations_per_tree=1
    )
    tuning = build_samples(g, lexicon, cfg, forbidden=forbidden)
    protocol = OneShotProtocol(
        grammar=header.grammar,
        tuning_seed=seed2,
        tuning_size=len(tuning),
        epochs=epochs,
    )
    return tuning, protocol
