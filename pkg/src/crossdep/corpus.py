"""Annotated sample assembly and the line-oriented dataset format.

A dataset file starts with a JSON header object (generation parameters,
lexicon hash, content hash) followed by one JSON object per sample.  Field
order is fixed, so identical inputs serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import __version__
from .errors import DataError
from .grammar import Grammar, split_ident
from .grammars import builtin_grammar
from .lexicon import GenerationConfig, Lexicon, check_coverage, postprocess, sample_realizations
from .trees import Tree, enumerate_trees, linearize, tree_depth, tree_repr

FORMAT_NAME = "annotated-samples"
FORMAT_VERSION = 1

# Metadata flag for trees using an object-selecting infinitival control verb
# under the causative complement rule, where no object NP is available and
# the causee is propagated instead.
FLAG_CAUSATIVE_OBJ_INF = "causative-object-infinitive"


@dataclass(frozen=True)
class AnnotatedSample:
    """One generated sentence with spans, verb-subject map, and provenance."""

    sentence_id: str
    sentence: str
    words: tuple[str, ...]
    char_offsets: tuple[tuple[int, int], ...]
    noun_spans: tuple[tuple[int, ...], ...]
    verb_spans: tuple[tuple[int, ...], ...]
    subject_map: tuple[int, ...]
    verb_rules: tuple[str, ...]
    verb_scopes: tuple[str, ...]
    grammar_id: str
    tree_id: int
    tree: str
    depth: int
    realization: int
    seed: int
    flags: tuple[str, ...] = ()

    @property
    def n_nouns(self) -> int:
        return len(self.noun_spans)

    def check(self) -> None:
        """Raise :class:`DataError` on any internal inconsistency."""
        if len(self.words) != len(self.char_offsets):
            raise DataError(f"{self.sentence_id}: words/offsets length mismatch")
        for word, (start, end) in zip(self.words, self.char_offsets):
            if self.sentence[start:end] != word:
                raise DataError(
                    f"{self.sentence_id}: offset ({start},{end}) does not "
                    f"reconstruct {word!r}"
                )
        n_words = len(self.words)
        for span in self.noun_spans + self.verb_spans:
            if not span or any(not 0 <= i < n_words for i in span):
                raise DataError(f"{self.sentence_id}: bad span {span}")
        if len(self.subject_map) != len(self.verb_spans):
            raise DataError(f"{self.sentence_id}: subject map is not total")
        if any(not 0 <= n < len(self.noun_spans) for n in self.subject_map):
            raise DataError(f"{self.sentence_id}: subject map target out of range")
        if not (len(self.verb_rules) == len(self.verb_scopes) == len(self.verb_spans)):
            raise DataError(f"{self.sentence_id}: per-verb metadata length mismatch")


def _tree_flags(g: Grammar, t: Tree) -> tuple[str, ...]:
    flags: set[str] = set()

    def walk(node: Tree):
        if not hasattr(node, "children"):
            return
        if node.rule == "A6":
            for child in node.children:
                cat = child.cat if hasattr(child, "cat") else g.rule(child.rule).lhs
                if split_ident(cat) == ("INF_c", "obj"):
                    flags.add(FLAG_CAUSATIVE_OBJ_INF)
        for child in node.children:
            walk(child)

    walk(t)
    return tuple(sorted(flags))


def sentence_id(grammar_id: str, tree_id: int, realization: int) -> str:
    return f"{grammar_id}-t{tree_id:04d}-r{realization:02d}"


def build_samples(
    g: Grammar,
    lex: Lexicon,
    cfg: GenerationConfig,
    forbidden: frozenset[tuple[str, ...]] = frozenset(),
) -> list[AnnotatedSample]:
    """Generate the full corpus: every derivation tree up to the depth bound,
    ``cfg.realizations_per_tree`` realizations each, in deterministic order."""
    check_coverage(lex, g)
    samples: list[AnnotatedSample] = []
    for tree_id, tree in enumerate(enumerate_trees(g, cfg.max_depth)):
        flags = _tree_flags(g, tree)
        assignments = sample_realizations(
            g, tree, lex, cfg, tree_index=tree_id, forbidden=forbidden
        )
        for r, assignment in enumerate(assignments):
            y = linearize(g, tree, assignment)
            sentence, offsets = postprocess(y.words, cfg)
            words = tuple(sentence[s:e] for s, e in offsets)
            sample = AnnotatedSample(
                sentence_id=sentence_id(g.grammar_id, tree_id, r),
                sentence=sentence,
                words=words,
                char_offsets=offsets,
                noun_spans=y.noun_spans,
                verb_spans=y.verb_spans,
                subject_map=y.subject_map,
                verb_rules=y.verb_rules,
                verb_scopes=y.verb_scopes,
                grammar_id=g.grammar_id,
                tree_id=tree_id,
                tree=tree_repr(tree),
                depth=tree_depth(tree),
                realization=r,
                seed=cfg.seed,
                flags=flags,
            )
            sample.check()
            samples.append(sample)
    return samples


# ---------------------------------------------------------------------------
# Serialization


def _sample_to_obj(s: AnnotatedSample) -> dict:
    return {
        "sentence_id": s.sentence_id,
        "sentence": s.sentence,
        "words": list(s.words),
        "char_offsets": [list(o) for o in s.char_offsets],
        "noun_spans": [list(sp) for sp in s.noun_spans],
        "verb_spans": [list(sp) for sp in s.verb_spans],
        "subject_map": list(s.subject_map),
        "verb_rules": list(s.verb_rules),
        "verb_scopes": list(s.verb_scopes),
        "meta": {
            "grammar": s.grammar_id,
            "tree_id": s.tree_id,
            "tree": s.tree,
            "depth": s.depth,
            "n_nouns": s.n_nouns,
            "realization": s.realization,
            "seed": s.seed,
            "flags": list(s.flags),
        },
    }


def _sample_from_obj(obj: dict, lineno: int) -> AnnotatedSample:
    try:
        meta = obj["meta"]
        sample = AnnotatedSample(
            sentence_id=obj["sentence_id"],
            sentence=obj["sentence"],
            words=tuple(obj["words"]),
            char_offsets=tuple((int(a), int(b)) for a, b in obj["char_offsets"]),
            noun_spans=tuple(tuple(int(i) for i in sp) for sp in obj["noun_spans"]),
            verb_spans=tuple(tuple(int(i) for i in sp) for sp in obj["verb_spans"]),
            subject_map=tuple(int(i) for i in obj["subject_map"]),
            verb_rules=tuple(obj["verb_rules"]),
            verb_scopes=tuple(obj["verb_scopes"]),
            grammar_id=meta["grammar"],
            tree_id=int(meta["tree_id"]),
            tree=meta["tree"],
            depth=int(meta["depth"]),
            realization=int(meta["realization"]),
            seed=int(meta["seed"]),
            flags=tuple(meta.get("flags", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"line {lineno}: malformed sample record ({exc})") from exc
    if int(meta.get("n_nouns", sample.n_nouns)) != sample.n_nouns:
        raise DataError(f"line {lineno}: n_nouns disagrees with noun_spans")
    try:
        sample.check()
    except DataError as exc:
        raise DataError(f"line {lineno}: {exc}") from exc
    return sample


def _dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def serialize_dataset(
    samples: list[AnnotatedSample],
    grammar_id: str,
    cfg: GenerationConfig,
    lexicon_sha256: str,
) -> str:
    body = [_dumps(_sample_to_obj(s)) for s in samples]
    content_hash = hashlib.sha256(("\n".join(body) + "\n").encode("utf-8")).hexdigest()
    header = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "grammar": grammar_id,
        "max_depth": cfg.max_depth,
        "per_tree": cfg.realizations_per_tree,
        "seed": cfg.seed,
        "lexicon_sha256": lexicon_sha256,
        "n_samples": len(samples),
        "content_sha256": content_hash,
    }
    return "\n".join([_dumps(header)] + body) + "\n"


def write_dataset(path, samples, grammar_id, cfg, lexicon_sha256) -> None:
    text = serialize_dataset(samples, grammar_id, cfg, lexicon_sha256)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


@dataclass(frozen=True)
class DatasetHeader:
    grammar: str
    max_depth: int
    per_tree: int
    seed: int
    lexicon_sha256: str
    n_samples: int
    content_sha256: str
    tool_version: str = __version__

    def config(self) -> GenerationConfig:
        return GenerationConfig(
            max_depth=self.max_depth, seed=self.seed, realizations_per_tree=self.per_tree
        )


def read_dataset(path) -> tuple[DatasetHeader, list[AnnotatedSample]]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty dataset file")
    try:
        head_obj = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DataError(f"line 1: malformed header ({exc})") from exc
    if head_obj.get("format") != FORMAT_NAME:
        raise DataError(f"line 1: not a {FORMAT_NAME} file")
    if head_obj.get("format_version") != FORMAT_VERSION:
        raise DataError(f"line 1: unsupported format version {head_obj.get('format_version')}")
    header = DatasetHeader(
        grammar=head_obj["grammar"],
        max_depth=int(head_obj["max_depth"]),
        per_tree=int(head_obj["per_tree"]),
        seed=int(head_obj["seed"]),
        lexicon_sha256=head_obj["lexicon_sha256"],
        n_samples=int(head_obj["n_samples"]),
        content_sha256=head_obj["content_sha256"],
        tool_version=head_obj.get("tool_version", ""),
    )
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: malformed JSON ({exc})") from exc
        samples.append(_sample_from_obj(obj, lineno))
    if len(samples) != header.n_samples:
        raise DataError(
            f"{path}: header announces {header.n_samples} samples, found {len(samples)}"
        )
    return header, samples


def verify_dataset(path, lexicon: Lexicon) -> list[str]:
    """Re-derive a dataset from its header and hash-check it.

    Returns a list of problems (empty means the file is intact and
    reproducible with the given lexicon).
    """
    problems: list[str] = []
    try:
        header, _ = read_dataset(path)
    except DataError as exc:
        return [f"unreadable dataset: {exc}"]
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body = "\n".join(lines[1:]) + "\n"
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if actual != header.content_sha256:
        problems.append(
            f"content hash mismatch: header {header.content_sha256[:12]}..., "
            f"file body {actual[:12]}..."
        )
    if lexicon.sha256 != header.lexicon_sha256:
        problems.append(
            f"lexicon hash mismatch: header {header.lexicon_sha256[:12]}..., "
            f"current lexicon {lexicon.sha256[:12]}..."
        )
    g = builtin_grammar(header.grammar, lexicon)
    regenerated = build_samples(g, lexicon, header.config())
    text = serialize_dataset(regenerated, header.grammar, header.config(), lexicon.sha256)
    regen_hash = hashlib.sha256(
        ("\n".join(text.splitlines()[1:]) + "\n").encode("utf-8")
    ).hexdigest()
    if regen_hash != header.content_sha256:
        problems.append(
            f"regeneration mismatch: regenerated body hashes to {regen_hash[:12]}..., "
            f"header says {header.content_sha256[:12]}..."
        )
    return problems
