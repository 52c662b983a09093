"""Accuracy, grouped breakdowns, consistency, baselines, reports."""

import itertools
import math

import numpy as np
import pytest

from crossdep.corpus import build_samples
from crossdep.errors import DataError
from crossdep.lexicon import GenerationConfig
from crossdep.metrics import (
    accuracy,
    rule_aggregation,
    build_report,
    consistency,
    grouped_accuracy,
    random_baseline,
    read_predictions,
    render_text,
    report_to_json,
    write_predictions,
)
from crossdep.predictors import adjacent_noun_predictions, uniform_random_predictions
from crossdep.probe import PredictionRecord, VerbPrediction


def make_pred(tree_id, verb_idx_values, n_nouns=3, depth=2, rule="A1", scope="none",
              sid=None, golds=None):
    verbs = tuple(
        VerbPrediction(
            probs=tuple(1.0 if i == v else 0.0 for i in range(n_nouns)),
            predicted=v,
            gold=(golds[j] if golds else 0),
            rule=rule,
            scope=scope,
        )
        for j, v in enumerate(verb_idx_values)
    )
    return PredictionRecord(
        sentence_id=sid or f"t{tree_id}",
        tree_id=tree_id,
        depth=depth,
        n_nouns=n_nouns,
        verbs=verbs,
    )


class TestAccuracy:
    def test_all_correct(self):
        preds = [make_pred(0, [0, 0], golds=[0, 0])]
        assert accuracy(preds) == 1.0

    def test_three_of_four(self):
        preds = [
            make_pred(0, [0, 1], golds=[0, 0]),
            make_pred(1, [0, 0], golds=[0, 0]),
        ]
        assert accuracy(preds) == 0.75

    def test_empty_is_absent(self):
        assert accuracy([]) is None


class TestGrouped:
    def test_depth_partition(self):
        preds = [
            make_pred(0, [0], golds=[0], depth=2),
            make_pred(1, [1], golds=[0], depth=3),
        ]
        stats = grouped_accuracy(preds, "depth")
        assert stats[2].accuracy == 1.0
        assert stats[3].accuracy == 0.0

    def test_rule_aggregation_folds_variants(self):
        mapping = rule_aggregation(["A1", "A1m", "A1i", "A2m", "A4", "B3"])
        assert mapping["A1"] == mapping["A1m"] == mapping["A1i"] == "A1^X"
        assert mapping["A2m"] == "A2^X"
        assert mapping["A4"] == "A4"
        assert mapping["B3"] == "B3"
        preds = [
            make_pred(0, [0], golds=[0], rule="A1"),
            make_pred(1, [0], golds=[0], rule="A1m"),
            make_pred(2, [1], golds=[0], rule="A1i"),
        ]
        stats = grouped_accuracy(preds, "rule", aggregate_variants=True)
        assert set(stats) == {"A1^X"}
        assert stats["A1^X"].total == 3
        assert stats["A1^X"].correct == 2

    def test_unknown_key_rejected(self):
        with pytest.raises(DataError, match="unknown grouping key"):
            grouped_accuracy([], "flavor")

    def test_missing_metadata_is_a_data_error(self):
        preds = [make_pred(0, [0], golds=[0], rule="")]
        with pytest.raises(DataError, match="lacks rule metadata"):
            grouped_accuracy(preds, "rule")
        preds = [make_pred(0, [0], golds=[0], scope="")]
        with pytest.raises(DataError, match="lacks scope metadata"):
            grouped_accuracy(preds, "scope")

    def test_overall_equals_weighted_mean_of_any_partition(self, control, lexicon):
        samples = build_samples(
            control, lexicon, GenerationConfig(max_depth=3, seed=2, realizations_per_tree=2)
        )
        preds = uniform_random_predictions(samples, seed=5)
        overall = accuracy(preds)
        for key in ("n_nouns", "depth", "rule", "scope"):
            stats = grouped_accuracy(preds, key)
            weighted = sum(s.correct for s in stats.values()) / sum(
                s.total for s in stats.values()
            )
            assert abs(overall - weighted) < 1e-12


class TestConsistency:
    def test_deterministic_predictor_is_perfectly_consistent(self, raising, lexicon):
        samples = build_samples(
            raising, lexicon, GenerationConfig(max_depth=5, seed=3, realizations_per_tree=10)
        )
        preds = adjacent_noun_predictions(samples)
        assert consistency(preds) == 1.0

    def test_modal_frequency(self):
        picks = [1, 1, 1, 2, 3, 1, 1, 1, 2, 1]
        preds = [
            make_pred(0, [p], n_nouns=4, sid=f"t0-r{i}") for i, p in enumerate(picks)
        ]
        assert consistency(preds) == pytest.approx(0.7)

    def test_uniform_random_matches_enumeration_oracle(self):
        # Exact expectation of the modal frequency of 10 uniform draws over
        # 4 candidates, by full enumeration of count vectors.
        n, k = 10, 4
        total = 0.0
        for counts in itertools.product(range(n + 1), repeat=k - 1):
            if sum(counts) > n:
                continue
            full = counts + (n - sum(counts),)
            coeff = math.factorial(n)
            for c in full:
                coeff //= math.factorial(c)
            total += coeff * (1 / k) ** n * max(full) / n
        expected = total
        assert 0.25 <= expected < 1.0

        rng = np.random.default_rng(0)
        preds = []
        for ctx in range(10_000):
            for r in range(n):
                preds.append(
                    make_pred(ctx, [int(rng.integers(k))], n_nouns=k, sid=f"c{ctx}-r{r}")
                )
        got = consistency(preds)
        assert got == pytest.approx(expected, abs=0.005)

    def test_empty_is_absent(self):
        assert consistency([]) is None


class TestRandomBaseline:
    def test_two_noun_sentences(self):
        preds = [make_pred(0, [0], n_nouns=2), make_pred(1, [0], n_nouns=2)]
        from crossdep.metrics import random_baseline_from_predictions

        assert random_baseline_from_predictions(preds) == 0.5

    def test_mixed_dataset(self):
        from crossdep.metrics import random_baseline_from_predictions

        preds = [make_pred(0, [0], n_nouns=2), make_pred(1, [0], n_nouns=4)]
        assert random_baseline_from_predictions(preds) == 0.375

    def test_invariant_under_lexical_resampling(self, raising, lexicon):
        cfg_a = GenerationConfig(max_depth=5, seed=1, realizations_per_tree=3)
        cfg_b = GenerationConfig(max_depth=5, seed=99, realizations_per_tree=3)
        a = random_baseline(build_samples(raising, lexicon, cfg_a))
        b = random_baseline(build_samples(raising, lexicon, cfg_b))
        assert a == b

    def test_empirical_agreement(self, control, lexicon):
        samples = build_samples(
            control, lexicon, GenerationConfig(max_depth=3, seed=4, realizations_per_tree=10)
        )
        preds = uniform_random_predictions(samples, seed=11)
        emp = accuracy(preds)
        assert emp == pytest.approx(random_baseline(samples), abs=0.02)


class TestReport:
    def test_report_json_is_stable(self, raising, lexicon):
        samples = build_samples(
            raising, lexicon, GenerationConfig(max_depth=4, seed=6, realizations_per_tree=2)
        )
        preds = adjacent_noun_predictions(samples)
        a = report_to_json(build_report(preds))
        b = report_to_json(build_report(preds))
        assert a == b

    def test_text_report_renders_required_groups(self, control, raising, lexicon):
        c_samples = build_samples(
            control, lexicon, GenerationConfig(max_depth=4, seed=6, realizations_per_tree=1)
        )
        r_samples = build_samples(
            raising, lexicon, GenerationConfig(max_depth=6, seed=6, realizations_per_tree=1)
        )
        c_text = render_text(build_report(adjacent_noun_predictions(c_samples)))
        r_text = render_text(build_report(adjacent_noun_predictions(r_samples)))
        for group in ("A1^X", "A2^X", "A3", "A4", "A5", "A6"):
            assert group in c_text
        for group in ("B2", "B3", "B4"):
            assert group in r_text
        for depth in ("2", "3", "4"):
            assert depth in c_text
        for noun_count in ("2", "3", "4", "5"):
            assert noun_count in c_text

    def test_predictions_round_trip(self, tmp_path, raising, lexicon):
        samples = build_samples(
            raising, lexicon, GenerationConfig(max_depth=3, seed=6, realizations_per_tree=2)
        )
        preds = adjacent_noun_predictions(samples)
        path = tmp_path / "preds.jsonl"
        write_predictions(path, preds, provider_name="heuristic")
        assert read_predictions(path) == preds
