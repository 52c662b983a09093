"""Lexicon handling, controlled seeded sampling, and sentence post-processing.

Randomness is drawn from numpy's PCG64 generator, seeded through
``SeedSequence(seed, spawn_key=(tree_index,))`` so every tree owns an
independent, platform-stable stream.  Changing this scheme changes every
generated dataset and requires a dataset version bump.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import GenerationError, LexiconError
from .grammar import Const, Grammar, base_name
from .trees import Tree, leaf_list, yield_words


@dataclass(frozen=True)
class Lexicon:
    """Ordered constant pools per category identifier (``NP``, ``TV.su``)."""

    slots: dict[str, tuple[Const, ...]]
    sha256: str = ""

    def slot(self, ident: str) -> tuple[Const, ...]:
        if ident not in self.slots:
            raise LexiconError(f"lexicon has no slot {ident!r}")
        return self.slots[ident]

    def words(self, ident: str) -> list[str]:
        """Flat single-coordinate view of a slot, for convenience in tests."""
        return [" ".join(c) for c in self.slot(ident)]


def parse_lexicon(text: str, sha256: str = "") -> Lexicon:
    """Parse the line-oriented slot format.

    ``slot <NT>[.<subtype>] : entry1 ; entry2 ; ...`` with ``#`` comments.
    Repeated lines for one slot append; duplicate entries are an error.
    """
    slots: dict[str, list[Const]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("slot "):
            raise LexiconError(f"line {lineno}: expected 'slot ...', got {line!r}")
        head, _, body = line[len("slot "):].partition(":")
        ident = head.strip()
        if not ident or not body.strip():
            raise LexiconError(f"line {lineno}: malformed slot declaration")
        entries = slots.setdefault(ident, [])
        for chunk in body.split(";"):
            entry = chunk.strip()
            if not entry:
                raise LexiconError(f"line {lineno}: empty entry in slot {ident}")
            const: Const = tuple(part.strip() for part in entry.split(","))
            if any(not p for p in const):
                raise LexiconError(f"line {lineno}: empty coordinate in {entry!r}")
            if const in entries:
                raise LexiconError(
                    f"line {lineno}: duplicate entry {entry!r} in slot {ident}"
                )
            entries.append(const)
    return Lexicon({k: tuple(v) for k, v in slots.items()}, sha256=sha256)


def load_lexicon(path) -> Lexicon:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_lexicon(data.decode("utf-8"), sha256=hashlib.sha256(data).hexdigest())


def default_lexicon() -> Lexicon:
    data = resources.files("crossdep.data").joinpath("lexicon.txt").read_bytes()
    return parse_lexicon(data.decode("utf-8"), sha256=hashlib.sha256(data).hexdigest())


def check_coverage(lex: Lexicon, g: Grammar) -> None:
    """Raise unless every lexical category of the grammar has a non-empty slot."""
    missing = []
    for nt in g.nonterminals:
        if g.constants_of(nt.ident) and not lex.slots.get(nt.ident):
            missing.append(nt.ident)
    if missing:
        raise LexiconError(f"lexicon is missing slots for: {', '.join(sorted(missing))}")


@dataclass(frozen=True)
class GenerationConfig:
    max_depth: int
    seed: int
    realizations_per_tree: int = 10
    capitalize: bool = True
    punctuate: bool = True

    def __post_init__(self):
        if self.realizations_per_tree < 1:
            raise GenerationError("realizations_per_tree must be >= 1")


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(tree_index,)))
    )


def sample_realizations(
    g: Grammar,
    tree: Tree,
    lex: Lexicon,
    cfg: GenerationConfig,
    tree_index: int = 0,
    forbidden: frozenset[tuple[str, ...]] = frozenset(),
) -> list[list[Const]]:
    """Draw ``cfg.realizations_per_tree`` leaf assignments for one tree.

    Within one assignment, distinct noun-marked leaves receive distinct
    entries.  Realized word sequences are pairwise distinct (and disjoint
    from ``forbidden``), enforced by rejection.  Fully deterministic given
    (seed, tree_index).
    """
    rng = tree_rng(cfg.seed, tree_index)
    leaves = leaf_list(tree)
    noun_positions = [
        i for i, (_, leaf) in enumerate(leaves) if base_name(leaf.cat) in g.noun_marked
    ]
    slots: list[tuple[Const, ...]] = []
    for _, leaf in leaves:
        pool = lex.slots.get(leaf.cat, ())
        if not pool:
            raise GenerationError(f"lexicon slot {leaf.cat!r} is missing or empty")
        slots.append(pool)
    if noun_positions:
        noun_pool = slots[noun_positions[0]]
        if len(noun_pool) < len(noun_positions):
            raise GenerationError(
                f"slot {leaves[noun_positions[0]][1].cat!r} has "
                f"{len(noun_pool)} entries but the tree needs "
                f"{len(noun_positions)} distinct nouns"
            )

    assignments: list[list[Const]] = []
    seen: set[tuple[str, ...]] = set()
    attempts = 0
    max_attempts = 200 + 100 * cfg.realizations_per_tree
    while len(assignments) < cfg.realizations_per_tree:
        attempts += 1
        if attempts > max_attempts:
            raise GenerationError(
                f"could not draw {cfg.realizations_per_tree} distinct realizations "
                f"for tree {tree_index} within {max_attempts} attempts; "
                "lexicon slots are too small"
            )
        assignment: list[Const | None] = [None] * len(leaves)
        if noun_positions:
            picks = rng.choice(
                len(slots[noun_positions[0]]), size=len(noun_positions), replace=False
            )
            for pos, pick in zip(noun_positions, picks):
                assignment[pos] = slots[pos][int(pick)]
        for i, pool in enumerate(slots):
            if assignment[i] is None:
                assignment[i] = pool[int(rng.integers(len(pool)))]
        words = tuple(yield_words(g, tree, assignment))
        if words in seen or words in forbidden:
            continue
        seen.add(words)
        assignments.append(list(assignment))
    return assignments


def postprocess(
    words: list[str] | tuple[str, ...], cfg: GenerationConfig | None = None
) -> tuple[str, tuple[tuple[int, int], ...]]:
    """Render words as a sentence: capitalize the first character, ensure a
    single terminal period, single spaces elsewhere.

    Returns the sentence plus per-word (start, end) character offsets into
    it; the terminal period belongs to no word.  Idempotent: re-processing
    the split of a processed sentence reproduces it byte for byte.
    """
    if not words:
        raise GenerationError("cannot post-process an empty word list")
    capitalize = cfg.capitalize if cfg is not None else True
    punctuate = cfg.punctuate if cfg is not None else True
    parts = list(words)
    if capitalize and parts[0]:
        parts[0] = parts[0][0].upper() + parts[0][1:]
    offsets: list[tuple[int, int]] = []
    pos = 0
    for i, word in enumerate(parts):
        if i:
            pos += 1  # separating space
        offsets.append((pos, pos + len(word)))
        pos += len(word)
    sentence = " ".join(parts)
    if punctuate and not sentence.endswith("."):
        sentence += "."
    return sentence, tuple(offsets)
