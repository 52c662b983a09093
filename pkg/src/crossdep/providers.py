"""Synthetic embedding providers for testing and calibration.

Three providers, all emitting one subword per word (word_ids = 0..n-1):

* ``positional``: word-index one-hot plus noun/verb type bits plus a
  phrase-ordinal one-hot (the i-th noun phrase and i-th verb phrase share
  an ordinal).  Cluster pairings follow ordinal identity, so the raising
  task is decodable by construction.  Word position alone is not enough:
  at depth 4 the two clause shapes place verbs with different subjects at
  the same absolute position, which caps a position-only code below a
  usable ceiling.
* ``oracle``: each verb's words carry a basis vector; its gold subject's
  words carry the same vector.  Any dataset becomes perfectly solvable.
* ``random-fixed``: seeded Gaussian noise; establishes chance-level floors.
"""

from __future__ import annotations

import numpy as np

from .corpus import AnnotatedSample
from .embeddings import EmbeddingRecord, EmbeddingStore
from .errors import DataError

PROVIDER_NAMES = ("positional", "oracle", "random-fixed")

_MIN_DIM = 8


def positional_store(
    samples: list[AnnotatedSample], dim: int = 64, seed: int = 0
) -> EmbeddingStore:
    if dim < _MIN_DIM:
        raise DataError(f"positional provider needs dim >= {_MIN_DIM}, got {dim}")
    pos_cap = (dim - 2) // 2
    ord_cap = dim - 2 - pos_cap
    noun_bit, verb_bit = dim - 2, dim - 1
    records = []
    for s in samples:
        n = len(s.words)
        vecs = np.zeros((n, dim), dtype=np.float32)
        for t in range(n):
            vecs[t, min(t, pos_cap - 1)] = 1.0
        for ordinal, span in enumerate(s.noun_spans):
            for t in span:
                vecs[t, pos_cap + min(ordinal, ord_cap - 1)] = 1.0
                vecs[t, noun_bit] = 1.0
        for ordinal, span in enumerate(s.verb_spans):
            for t in span:
                vecs[t, pos_cap + min(ordinal, ord_cap - 1)] = 1.0
                vecs[t, verb_bit] = 1.0
        records.append(
            EmbeddingRecord(s.sentence_id, tuple(range(n)), vecs)
        )
    return EmbeddingStore(records, dim, "positional")


def oracle_store(
    samples: list[AnnotatedSample], dim: int = 64, seed: int = 0
) -> EmbeddingStore:
    records = []
    for s in samples:
        n_verbs = len(s.verb_spans)
        subjects = set(s.subject_map)
        n_free = len(s.noun_spans) - len(subjects)
        if n_verbs + n_free > dim:
            raise DataError(
                f"{s.sentence_id}: oracle provider needs dim >= "
                f"{n_verbs + n_free}, got {dim}"
            )
        n = len(s.words)
        vecs = np.zeros((n, dim), dtype=np.float32)
        for v, span in enumerate(s.verb_spans):
            for t in span:
                vecs[t, v] = 1.0
        free = n_verbs
        for j, span in enumerate(s.noun_spans):
            pairing = [v for v, g in enumerate(s.subject_map) if g == j]
            if pairing:
                # A noun serving several verbs carries all their vectors.
                for v in pairing:
                    for t in span:
                        vecs[t, v] = 1.0
            else:
                for t in span:
                    vecs[t, free] = 1.0
                free += 1
        records.append(EmbeddingRecord(s.sentence_id, tuple(range(n)), vecs))
    return EmbeddingStore(records, dim, "oracle")


def random_store(
    samples: list[AnnotatedSample], dim: int = 64, seed: int = 0
) -> EmbeddingStore:
    records = []
    for idx, s in enumerate(samples):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(idx,)))
        )
        vecs = rng.standard_normal((len(s.words), dim)).astype(np.float32)
        records.append(EmbeddingRecord(s.sentence_id, tuple(range(len(s.words))), vecs))
    return EmbeddingStore(records, dim, "random-fixed")


def synth_store(
    provider: str, samples: list[AnnotatedSample], dim: int = 64, seed: int = 0
) -> EmbeddingStore:
    if provider == "positional":
        return positional_store(samples, dim, seed)
    if provider == "oracle":
        return oracle_store(samples, dim, seed)
    if provider == "random-fixed":
        return random_store(samples, dim, seed)
    raise DataError(f"unknown synthetic provider {provider!r}")
