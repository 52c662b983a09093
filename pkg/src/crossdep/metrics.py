"""Accuracy breakdowns, consistency, baselines, and report rendering.

Predictions are grouped by the number of classification targets, the depth
of the underlying derivation, the introducing rule (optionally aggregating
adverb variants with their base rule), and the control scope.  Consistency
measures how stable predictions are across lexical realizations of the
same derivation: per context (tree, verb position), the frequency of the
modal predicted noun index, averaged unweighted over contexts.
"""

from __future__ import annotations

import json
import re
from collections import Counter, defaultdict
from dataclasses import dataclass

from .corpus import AnnotatedSample
from .errors import DataError
from .probe import PredictionRecord

GROUP_KEYS = ("n_nouns", "depth", "rule", "scope")

_VARIANT_RE = re.compile(r"^([A-Za-z]+\d+)[a-z]$")


def rule_aggregation(labels) -> dict[str, str]:
    """Group adverb-variant labels with their base rule: whenever a base
    occurs alongside suffixed variants (A1, A1m, A1i), all of them map to
    the combined group (A1^X); lone labels stay as they are."""
    labels = set(labels)
    bases = {m.group(1) for label in labels if (m := _VARIANT_RE.match(label))}
    mapping = {}
    for label in labels:
        m = _VARIANT_RE.match(label)
        if m:
            mapping[label] = f"{m.group(1)}^X"
        elif label in bases:
            mapping[label] = f"{label}^X"
        else:
            mapping[label] = label
    return mapping


def iter_verbs(preds: list[PredictionRecord]):
    for rec in preds:
        for vi, verb in enumerate(rec.verbs):
            yield rec, vi, verb


def accuracy(preds: list[PredictionRecord]) -> float | None:
    """Correct verb predictions over total verb predictions; None when empty."""
    total = correct = 0
    for _, _, verb in iter_verbs(preds):
        total += 1
        correct += verb.predicted == verb.gold
    return correct / total if total else None


@dataclass(frozen=True)
class GroupStat:
    correct: int
    total: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.total


def grouped_accuracy(
    preds: list[PredictionRecord],
    key: str,
    aggregate_variants: bool = False,
) -> dict:
    """Per-group correct/total counts for one grouping key.

    With ``aggregate_variants`` the rule grouping folds suffixed labels
    into a combined group (A1, A1m, A1i -> "A1^X").
    """
    if key not in GROUP_KEYS:
        raise DataError(f"unknown grouping key {key!r} (expected one of {GROUP_KEYS})")
    aggregation = {}
    if key == "rule" and aggregate_variants:
        aggregation = rule_aggregation(
            verb.rule for _, _, verb in iter_verbs(preds) if verb.rule
        )
    counts: dict = defaultdict(lambda: [0, 0])
    for rec, _, verb in iter_verbs(preds):
        if key == "n_nouns":
            group = rec.n_nouns
        elif key == "depth":
            group = rec.depth
        elif key == "rule":
            group = verb.rule
            if group is None or group == "":
                raise DataError(f"{rec.sentence_id}: prediction lacks rule metadata")
            group = aggregation.get(group, group)
        else:
            group = verb.scope
            if group is None or group == "":
                raise DataError(f"{rec.sentence_id}: prediction lacks scope metadata")
        entry = counts[group]
        entry[0] += verb.predicted == verb.gold
        entry[1] += 1
    # groups are homogeneous per key (ints for n_nouns/depth, strings
    # otherwise), so plain ordering sorts counts numerically
    return {g: GroupStat(c, t) for g, (c, t) in sorted(counts.items())}


def consistency(preds: list[PredictionRecord]) -> float | None:
    """Average modal-prediction frequency per (tree, verb position) context.

    Predictions are compared positionally (noun occurrence index), since
    realizations of one tree differ lexically but share span structure.
    """
    contexts: dict[tuple[int, int], Counter] = defaultdict(Counter)
    for rec, vi, verb in iter_verbs(preds):
        contexts[(rec.tree_id, vi)][verb.predicted] += 1
    if not contexts:
        return None
    per_context = [
        counter.most_common(1)[0][1] / sum(counter.values())
        for counter in contexts.values()
    ]
    return sum(per_context) / len(per_context)


def random_baseline(samples: list[AnnotatedSample]) -> float:
    """Expected accuracy of uniform guessing: the mean over verb
    occurrences of one over the sentence's classification targets."""
    values = [1.0 / s.n_nouns for s in samples for _ in s.verb_spans]
    if not values:
        raise DataError("random baseline undefined on an empty dataset")
    return sum(values) / len(values)


def random_baseline_from_predictions(preds: list[PredictionRecord]) -> float | None:
    values = [1.0 / rec.n_nouns for rec, _, _ in iter_verbs(preds)]
    return sum(values) / len(values) if values else None


@dataclass(frozen=True)
class MetricsReport:
    n_sentences: int
    n_verbs: int
    overall: float | None
    by_n_nouns: dict
    by_depth: dict
    by_rule: dict
    by_scope: dict
    consistency: float | None
    random_baseline: float | None

    def group_table(self, key: str) -> dict:
        return {
            "n_nouns": self.by_n_nouns,
            "depth": self.by_depth,
            "rule": self.by_rule,
            "scope": self.by_scope,
        }[key]


def build_report(
    preds: list[PredictionRecord], aggregate_variants: bool = True
) -> MetricsReport:
    return MetricsReport(
        n_sentences=len(preds),
        n_verbs=sum(len(rec.verbs) for rec in preds),
        overall=accuracy(preds),
        by_n_nouns=grouped_accuracy(preds, "n_nouns"),
        by_depth=grouped_accuracy(preds, "depth"),
        by_rule=grouped_accuracy(preds, "rule", aggregate_variants=aggregate_variants),
        by_scope=grouped_accuracy(preds, "scope"),
        consistency=consistency(preds),
        random_baseline=random_baseline_from_predictions(preds),
    )


def _fmt(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.4f}"


def render_text(report: MetricsReport, title: str = "predictions") -> str:
    """Plain-text tables: accuracy by targets, depth, rule, and scope,
    plus consistency and the random baseline."""
    lines = [
        f"report: {title}",
        f"sentences: {report.n_sentences}   verb predictions: {report.n_verbs}",
        f"overall accuracy: {_fmt(report.overall)}   "
        f"random baseline: {_fmt(report.random_baseline)}   "
        f"consistency: {_fmt(report.consistency)}",
    ]

    def table(header: str, stats: dict) -> list[str]:
        if not stats:
            return []
        keys = list(stats)
        head = ["group   "] + [f"{k!s:>8}" for k in keys]
        accs = ["accuracy"] + [f"{stats[k].accuracy:>8.4f}" for k in keys]
        cnts = ["count   "] + [f"{stats[k].total:>8d}" for k in keys]
        return ["", header, " ".join(head), " ".join(accs), " ".join(cnts)]

    lines += table("-- by number of classification targets (nouns)", report.by_n_nouns)
    lines += table("-- by derivation depth", report.by_depth)
    lines += table("-- by introducing rule", report.by_rule)
    lines += table("-- by control scope", report.by_scope)
    return "\n".join(lines) + "\n"


def report_to_json(report: MetricsReport) -> str:
    """Stable machine-readable rendering: same inputs, same bytes."""

    def groups(stats: dict) -> dict:
        return {
            str(k): {
                "accuracy": round(v.accuracy, 10),
                "correct": v.correct,
                "total": v.total,
            }
            for k, v in stats.items()
        }

    obj = {
        "n_sentences": report.n_sentences,
        "n_verbs": report.n_verbs,
        "overall_accuracy": None if report.overall is None else round(report.overall, 10),
        "random_baseline": None
        if report.random_baseline is None
        else round(report.random_baseline, 10),
        "consistency": None if report.consistency is None else round(report.consistency, 10),
        "by_n_nouns": groups(report.by_n_nouns),
        "by_depth": groups(report.by_depth),
        "by_rule": groups(report.by_rule),
        "by_scope": groups(report.by_scope),
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Prediction file round-trip


PREDICTIONS_FORMAT = "verb-predictions"


def write_predictions(path, preds: list[PredictionRecord], provider_name: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = {"format": PREDICTIONS_FORMAT, "provider": provider_name}
        fh.write(json.dumps(header, separators=(", ", ": ")) + "\n")
        for rec in preds:
            obj = {
                "sentence_id": rec.sentence_id,
                "tree_id": rec.tree_id,
                "depth": rec.depth,
                "n_nouns": rec.n_nouns,
                "verbs": [
                    {
                        "probs": list(v.probs),
                        "predicted": v.predicted,
                        "gold": v.gold,
                        "rule": v.rule,
                        "scope": v.scope,
                    }
                    for v in rec.verbs
                ],
            }
            fh.write(json.dumps(obj, separators=(", ", ": ")) + "\n")


def read_predictions(path) -> list[PredictionRecord]:
    from .probe import VerbPrediction  # local to avoid cycle at import time

    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty predictions file")
    header = json.loads(lines[0])
    if header.get("format") != PREDICTIONS_FORMAT:
        raise DataError(f"{path}: not a {PREDICTIONS_FORMAT} file")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            verbs = tuple(
                VerbPrediction(
                    probs=tuple(float(p) for p in v["probs"]),
                    predicted=int(v["predicted"]),
                    gold=int(v["gold"]),
                    rule=v["rule"],
                    scope=v["scope"],
                )
                for v in obj["verbs"]
            )
            rec = PredictionRecord(
                sentence_id=obj["sentence_id"],
                tree_id=int(obj["tree_id"]),
                depth=int(obj["depth"]),
                n_nouns=int(obj["n_nouns"]),
                verbs=verbs,
            )
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"line {lineno}: malformed prediction record ({exc})") from exc
        for v in rec.verbs:
            v.check()
        out.append(rec)
    return out
