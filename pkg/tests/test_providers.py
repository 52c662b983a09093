"""Synthetic providers and the embedding file format."""

import numpy as np
import pytest

from crossdep.corpus import build_samples
from crossdep.embeddings import read_embeddings, write_embeddings
from crossdep.errors import DataError
from crossdep.lexicon import GenerationConfig
from crossdep.providers import oracle_store, positional_store, random_store, synth_store


@pytest.fixture(scope="module")
def samples(raising, lexicon):
    return build_samples(
        raising, lexicon, GenerationConfig(max_depth=4, seed=9, realizations_per_tree=2)
    )


class TestProviders:
    def test_one_subword_per_word(self, samples):
        store = positional_store(samples, dim=32)
        for s in samples:
            rec = store.get(s.sentence_id)
            assert rec.word_ids == tuple(range(len(s.words)))
            rec.check(n_words=len(s.words))

    def test_positional_encodes_ordinals(self, samples):
        store = positional_store(samples, dim=32)
        s = samples[0]
        rec = store.get(s.sentence_id)
        pos_cap = (32 - 2) // 2
        # i-th noun span and i-th verb span share one ordinal slot
        for ordinal, span in enumerate(s.noun_spans):
            for t in span:
                assert rec.vectors[t, pos_cap + ordinal] == 1.0
                assert rec.vectors[t, 30] == 1.0  # noun bit
        for ordinal, span in enumerate(s.verb_spans):
            for t in span:
                assert rec.vectors[t, pos_cap + ordinal] == 1.0
                assert rec.vectors[t, 31] == 1.0  # verb bit

    def test_oracle_pairs_verbs_with_gold_nouns(self, samples):
        store = oracle_store(samples, dim=32)
        for s in samples:
            rec = store.get(s.sentence_id)
            for v, span in enumerate(s.verb_spans):
                verb_vec = rec.vectors[span[0]]
                gold_span = s.noun_spans[s.subject_map[v]]
                noun_vec = rec.vectors[gold_span[0]]
                assert float(verb_vec @ noun_vec) >= 1.0
                for j, other in enumerate(s.noun_spans):
                    if j != s.subject_map[v]:
                        assert float(verb_vec @ rec.vectors[other[0]]) == 0.0

    def test_random_store_is_seeded(self, samples):
        a = random_store(samples, dim=16, seed=5)
        b = random_store(samples, dim=16, seed=5)
        c = random_store(samples, dim=16, seed=6)
        sid = samples[0].sentence_id
        assert np.array_equal(a.get(sid).vectors, b.get(sid).vectors)
        assert not np.array_equal(a.get(sid).vectors, c.get(sid).vectors)

    def test_unknown_provider_rejected(self, samples):
        with pytest.raises(DataError, match="unknown synthetic provider"):
            synth_store("magic", samples)


class TestEmbeddingFile:
    def test_bit_exact_round_trip(self, tmp_path, samples):
        store = random_store(samples, dim=24, seed=1)
        path = tmp_path / "emb.jsonl"
        write_embeddings(path, store)
        back = read_embeddings(path)
        assert back.dim == 24
        assert back.provider_name == "random-fixed"
        for s in samples:
            a = store.get(s.sentence_id)
            b = back.get(s.sentence_id)
            assert a.word_ids == b.word_ids
            assert a.vectors.dtype == b.vectors.dtype == np.float32
            assert np.array_equal(a.vectors, b.vectors)

    def test_missing_record_lookup_fails(self, samples):
        store = random_store(samples, dim=8, seed=0)
        with pytest.raises(DataError, match="no embedding record"):
            store.get("nonexistent")

    def test_corrupt_payload_reports_line(self, tmp_path, samples):
        store = random_store(samples[:2], dim=8, seed=0)
        path = tmp_path / "emb.jsonl"
        write_embeddings(path, store)
        lines = path.read_text().splitlines()
        lines[1] = lines[1].replace('"n_subwords": ', '"n_subwords": 1')
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DataError, match="line 2"):
            read_embeddings(path)
