"""Derivation trees: bounded enumeration, linearization with span tracing,
and verb-subject resolution via inheritance schemes.

A derivation is a tree of rule applications over leaf categories.  Depth
counts rule-application nodes on the longest root-to-leaf path, so a single
application over leaves has depth 1 and a bare leaf has depth 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import AssignmentError, GrammarError, ResolutionError
from .grammar import Const, Grammar, base_name, split_ident

Path = tuple[int, ...]


@dataclass(frozen=True)
class Leaf:
    """A pre-lexical leaf: a category that possesses constants."""

    cat: str  # full identifier, e.g. "TV.su"


@dataclass(frozen=True)
class Apply:
    """Application of the rule with the given label to child derivations."""

    rule: str
    children: tuple["Tree", ...]


Tree = Union[Leaf, Apply]


def produces(g: Grammar, t: Tree) -> str:
    """Identifier of the non-terminal this node derives."""
    return t.cat if isinstance(t, Leaf) else g.rule(t.rule).lhs


def tree_depth(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max(tree_depth(c) for c in t.children)


def tree_repr(t: Tree) -> str:
    """Canonical s-expression; also the deterministic ordering key."""
    if isinstance(t, Leaf):
        return t.cat
    return f"{t.rule}({','.join(tree_repr(c) for c in t.children)})"


def leaf_list(t: Tree) -> list[tuple[Path, Leaf]]:
    """Leaves with their paths, in preorder."""
    out: list[tuple[Path, Leaf]] = []

    def walk(node: Tree, path: Path):
        if isinstance(node, Leaf):
            out.append((path, node))
        else:
            for i, c in enumerate(node.children):
                walk(c, path + (i,))

    walk(t, ())
    return out


def check_tree(g: Grammar, t: Tree) -> None:
    """Raise :class:`GrammarError` unless ``t`` is a well-formed derivation
    rooted at the start symbol."""
    if base_name(produces(g, t)) != base_name(g.start):
        raise GrammarError(
            f"tree produces {produces(g, t)}, expected start symbol {g.start}"
        )
    _check_node(g, t)


def _check_node(g: Grammar, t: Tree) -> None:
    if isinstance(t, Leaf):
        g.nonterminal(t.cat)
        if not g.constants_of(t.cat):
            raise GrammarError(f"leaf category {t.cat} has no constants")
        return
    rule = g.rule(t.rule)
    if len(t.children) != len(rule.rhs):
        raise GrammarError(
            f"rule {rule.label} expects {len(rule.rhs)} children, got {len(t.children)}"
        )
    for want, child in zip(rule.rhs, t.children):
        got = produces(g, child)
        if base_name(got) != base_name(want):
            raise GrammarError(
                f"rule {rule.label}: child produces {got}, expected {want}"
            )
        _check_node(g, child)


def enumerate_trees(g: Grammar, max_depth: int) -> list[Tree]:
    """All distinct derivations of the start symbol with depth <= max_depth.

    Leaves of a subtyped base category expand to one leaf per subtype, so
    trees differing only in subtype are distinct.  Output order is
    deterministic: lexicographic on the canonical tree representation.
    """
    rules_by_lhs: dict[str, list] = {}
    for rule in g.rules:
        rules_by_lhs.setdefault(base_name(rule.lhs), []).append(rule)
    for rules in rules_by_lhs.values():
        rules.sort(key=lambda r: r.label)

    memo: dict[tuple[str, int], tuple[Tree, ...]] = {}

    def trees_for(cat: str, budget: int) -> tuple[Tree, ...]:
        key = (cat, budget)
        if key in memo:
            return memo[key]
        out: list[Tree] = []
        for nt in g.variants(cat):
            if g.constants_of(nt.ident):
                out.append(Leaf(nt.ident))
        if budget >= 1:
            for rule in rules_by_lhs.get(base_name(cat), ()):
                child_sets = [trees_for(r, budget - 1) for r in rule.rhs]
                if all(child_sets):
                    combos: list[tuple[Tree, ...]] = [()]
                    for cs in child_sets:
                        combos = [prefix + (c,) for prefix in combos for c in cs]
                    out.extend(Apply(rule.label, combo) for combo in combos)
        memo[key] = tuple(out)
        return memo[key]

    trees = [t for t in trees_for(g.start, max_depth)]
    return sorted(trees, key=tree_repr)


def depth_counts(trees: Iterable[Tree]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for t in trees:
        d = tree_depth(t)
        counts[d] = counts.get(d, 0) + 1
    return dict(sorted(counts.items()))


# ---------------------------------------------------------------------------
# Linearization

# Occurrence keys: ("n", path) marks a whole-node phrase; ("svn"/"svv", path)
# the embedded noun/verb parts of a subject-verb-pair leaf constant.
OccKey = tuple[str, Path]


@dataclass(frozen=True)
class AnnotatedYield:
    """A linearized derivation with one span per marked occurrence.

    Spans are sets of word indices, ordered left-to-right by first index
    (ties broken shorter-first).  ``subject_map[i]`` is the noun occurrence
    index serving as subject of verb occurrence ``i``; ``verb_rules`` and
    ``verb_scopes`` carry, per verb occurrence, the label of the dominating
    rule and the control scope under which its subject was selected.
    """

    words: tuple[str, ...]
    noun_spans: tuple[tuple[int, ...], ...]
    verb_spans: tuple[tuple[int, ...], ...]
    subject_map: tuple[int, ...]
    verb_rules: tuple[str, ...]
    verb_scopes: tuple[str, ...]

    @property
    def n_nouns(self) -> int:
        return len(self.noun_spans)


def normalize_assignment(
    g: Grammar, t: Tree, assignment: Sequence[Const | str]
) -> list[Const]:
    """Validate a preorder leaf assignment and normalize entries to tuples."""
    leaves = leaf_list(t)
    if len(assignment) < len(leaves):
        path, leaf = leaves[len(assignment)]
        raise AssignmentError(
            f"missing assignment for leaf {len(assignment)} ({leaf.cat} at path {path})"
        )
    if len(assignment) > len(leaves):
        raise AssignmentError(
            f"{len(assignment)} assignments for {len(leaves)} leaves"
        )
    consts: list[Const] = []
    for i, ((path, leaf), value) in enumerate(zip(leaves, assignment)):
        const = (value,) if isinstance(value, str) else tuple(value)
        arity = g.nonterminal(leaf.cat).arity
        if len(const) != arity:
            raise AssignmentError(
                f"leaf {i} ({leaf.cat} at path {path}): constant {const!r} has "
                f"{len(const)} coordinates, expected {arity}"
            )
        if any(not part or part != " ".join(part.split()) for part in const):
            raise AssignmentError(
                f"leaf {i} ({leaf.cat} at path {path}): constant {const!r} has an "
                "empty or badly spaced coordinate"
            )
        consts.append(const)
    return consts


def _evaluate(
    g: Grammar, t: Tree, consts_by_leaf: dict[Path, Const]
) -> tuple[list[tuple[Path, int, int]], ...]:
    """Evaluate a tree to token lists per coordinate.

    Tokens are (leaf path, coordinate, word index within coordinate); they
    let spans be traced back to the leaf that produced each word.
    """

    def walk(node: Tree, path: Path):
        if isinstance(node, Leaf):
            const = consts_by_leaf[path]
            return tuple(
                [(path, c, i) for i in range(len(part.split(" ")))]
                for c, part in enumerate(const)
            )
        rule = g.rule(node.rule)
        child_vals = [walk(c, path + (i,)) for i, c in enumerate(node.children)]
        return tuple(
            [tok for ref in refs for tok in child_vals[ref.pos - 1][ref.coord - 1]]
            for refs in rule.recipe
        )

    return walk(t, ())


def _subtree_leaves(t: Tree) -> dict[Path, frozenset[Path]]:
    """Leaf-path set under every node, keyed by node path."""
    out: dict[Path, frozenset[Path]] = {}

    def walk(node: Tree, path: Path) -> frozenset[Path]:
        if isinstance(node, Leaf):
            out[path] = frozenset((path,))
        else:
            acc: set[Path] = set()
            for i, c in enumerate(node.children):
                acc |= walk(c, path + (i,))
            out[path] = frozenset(acc)
        return out[path]

    walk(t, ())
    return out


def _marked_occurrences(g: Grammar, t: Tree) -> tuple[list[OccKey], list[OccKey]]:
    """Noun and verb occurrence keys, in preorder."""
    nouns: list[OccKey] = []
    verbs: list[OccKey] = []

    def walk(node: Tree, path: Path):
        cat = produces(g, node)
        if g.is_noun(cat):
            nouns.append(("n", path))
        if g.is_verb(cat):
            verbs.append(("n", path))
        if isinstance(node, Leaf):
            if g.is_sv_pair(cat):
                nouns.append(("svn", path))
                verbs.append(("svv", path))
            return
        for i, c in enumerate(node.children):
            walk(c, path + (i,))

    walk(t, ())
    return nouns, verbs


def _resolve_nodes(g: Grammar, t: Tree) -> dict[OccKey, tuple[OccKey, str]]:
    """Map each verb occurrence key to (subject noun key, scope label).

    Scope is "none" for subjects bound directly at the verb's own rule and
    the propagation's control tag for inherited subjects.
    """
    out: dict[OccKey, tuple[OccKey, str]] = {}

    def walk(node: Tree, path: Path, incoming: tuple[OccKey, str] | None):
        if isinstance(node, Leaf):
            if g.is_sv_pair(node.cat):
                out[("svv", path)] = (("svn", path), "none")
            return
        rule = g.rule(node.rule)
        subtypes = [split_ident(produces(g, c))[1] for c in node.children]
        scheme = rule.scheme_for(subtypes)
        for pos, src in scheme.verb_subjects:
            if src.kind == "np":
                bound: tuple[OccKey, str] = (("n", path + (src.np_pos - 1,)), "none")
            else:
                if incoming is None:
                    raise ResolutionError(
                        f"rule {rule.label}: verb at position {pos} expects a "
                        "propagated subject, but nothing was propagated"
                    )
                bound = incoming
            out[("n", path + (pos - 1,))] = bound
        child_incoming: dict[int, tuple[OccKey, str]] = {}
        for pos, prop in scheme.propagations:
            if prop.source.kind == "np":
                value = ("n", path + (prop.source.np_pos - 1,))
            else:
                if incoming is None:
                    raise ResolutionError(
                        f"rule {rule.label}: propagation into position {pos} "
                        "expects an incoming subject, but nothing was propagated"
                    )
                value = incoming[0]
            child_incoming[pos - 1] = (value, prop.scope)
        for i, c in enumerate(node.children):
            walk(c, path + (i,), child_incoming.get(i))

    walk(t, (), None)
    return out


def _dominating_rule(t: Tree, path: Path) -> str:
    """Label of the rule application immediately dominating the node."""
    if not path:
        return "-"
    node = t
    for step in path[:-1]:
        node = node.children[step]
    assert isinstance(node, Apply)
    return node.rule


def linearize(g: Grammar, t: Tree, assignment: Sequence[Const | str]) -> AnnotatedYield:
    """Evaluate a derivation under a leaf assignment into an annotated yield.

    The assignment lists one constant per leaf, in preorder.  One span is
    produced per marked occurrence; spans may be discontinuous but are never
    empty.  Verb occurrences lacking a subject binding raise
    :class:`ResolutionError`.
    """
    root_arity = g.variants(produces(g, t))[0].arity
    if root_arity != 1:
        raise GrammarError(
            f"cannot linearize: root category {produces(g, t)} has arity {root_arity}"
        )
    return _annotate(g, t, assignment, flatten_root=False)


def _annotate(
    g: Grammar, t: Tree, assignment: Sequence[Const | str], flatten_root: bool
) -> AnnotatedYield:
    _check_node(g, t)
    consts = normalize_assignment(g, t, assignment)
    leaves = leaf_list(t)
    consts_by_leaf = {path: const for (path, _), const in zip(leaves, consts)}

    coords = _evaluate(g, t, consts_by_leaf)
    tokens = [tok for coord in coords for tok in coord] if flatten_root else coords[0]
    leaf_words = {
        path: [w for part in const for w in part.split(" ")]
        for path, const in consts_by_leaf.items()
    }
    words = tuple(
        leaf_words[path][_flat_index(consts_by_leaf[path], coord, widx)]
        for path, coord, widx in tokens
    )

    subtree = _subtree_leaves(t)
    positions_by_leaf: dict[Path, list[int]] = {}
    for i, (path, _, _) in enumerate(tokens):
        positions_by_leaf.setdefault(path, []).append(i)

    def span_of(key: OccKey) -> tuple[int, ...]:
        kind, path = key
        if kind == "n":
            pos = sorted(
                i for leaf in subtree[path] for i in positions_by_leaf.get(leaf, ())
            )
        else:
            # Embedded parts of a subject-verb-pair constant: all words but
            # the last form the noun, the last word is the verb.
            n_words = len(leaf_words[path])
            wanted = range(n_words - 1) if kind == "svn" else range(n_words - 1, n_words)
            member = set(wanted)
            pos = sorted(
                i
                for i, (p, c, w) in enumerate(tokens)
                if p == path and _flat_index(consts_by_leaf[path], c, w) in member
            )
        if not pos:
            raise GrammarError(f"occurrence {key} has an empty span")
        return tuple(pos)

    noun_keys, verb_keys = _marked_occurrences(g, t)
    noun_spans = {key: span_of(key) for key in noun_keys}
    verb_spans = {key: span_of(key) for key in verb_keys}

    def order(spans: dict[OccKey, tuple[int, ...]]) -> list[OccKey]:
        return sorted(spans, key=lambda k: (spans[k][0], len(spans[k])))

    nouns_ordered = order(noun_spans)
    verbs_ordered = order(verb_spans)
    noun_index = {key: i for i, key in enumerate(nouns_ordered)}

    resolution = _resolve_nodes(g, t)
    subject_map: list[int] = []
    scopes: list[str] = []
    rules: list[str] = []
    for key in verbs_ordered:
        if key not in resolution:
            raise ResolutionError(
                f"verb occurrence {key} has no subject binding in the rule schemes"
            )
        subj_key, scope = resolution[key]
        if subj_key not in noun_index:
            raise ResolutionError(
                f"verb occurrence {key} is bound to {subj_key}, which is not a "
                "noun occurrence of this yield"
            )
        subject_map.append(noun_index[subj_key])
        scopes.append(scope)
        rules.append(_dominating_rule(t, key[1]))

    return AnnotatedYield(
        words=words,
        noun_spans=tuple(noun_spans[k] for k in nouns_ordered),
        verb_spans=tuple(verb_spans[k] for k in verbs_ordered),
        subject_map=tuple(subject_map),
        verb_rules=tuple(rules),
        verb_scopes=tuple(scopes),
    )


def _flat_index(const: Const, coord: int, widx: int) -> int:
    """Index of a (coordinate, word) position within the flattened constant."""
    offset = sum(len(part.split(" ")) for part in const[:coord])
    return offset + widx


def yield_words(g: Grammar, t: Tree, assignment: Sequence[Const | str]) -> tuple[str, ...]:
    """Just the word sequence of a linearization, without span tracing."""
    consts = normalize_assignment(g, t, assignment)
    leaves = leaf_list(t)
    consts_by_leaf = {path: const for (path, _), const in zip(leaves, consts)}
    tokens = _evaluate(g, t, consts_by_leaf)[0]
    return tuple(
        consts_by_leaf[path][coord].split(" ")[widx] for path, coord, widx in tokens
    )


def canonical_assignment(g: Grammar, t: Tree) -> list[Const]:
    """First constant of each leaf category, in preorder."""
    out: list[Const] = []
    for _, leaf in leaf_list(t):
        consts = g.constants_of(leaf.cat)
        if not consts:
            raise AssignmentError(f"leaf category {leaf.cat} has no constants")
        out.append(consts[0])
    return out


def resolve_subjects(g: Grammar, t: Tree) -> tuple[tuple[int, ...], tuple[str, ...]]:
    """Subject map and scope labels by occurrence index.

    Occurrence indexing follows span order, which is determined by the tree
    structure alone (constant lengths never reorder spans), so any
    assignment yields the same map; a canonical one is used internally.
    Tuple-valued roots are ordered by concatenating their coordinates.
    """
    y = _annotate(g, t, canonical_assignment(g, t), flatten_root=True)
    return y.subject_map, y.verb_scopes


# ---------------------------------------------------------------------------
# Brute-force recognition (test oracle, not a parser)


def _segments(g: Grammar, t: Tree) -> list[tuple[Path, int]]:
    """The (leaf, coordinate) segments of the yield, in surface order."""

    def walk(node: Tree, path: Path):
        if isinstance(node, Leaf):
            arity = g.nonterminal(node.cat).arity
            return tuple([(path, c)] for c in range(arity))
        rule = g.rule(node.rule)
        child_vals = [walk(c, path + (i,)) for i, c in enumerate(node.children)]
        return tuple(
            [seg for ref in refs for seg in child_vals[ref.pos - 1][ref.coord - 1]]
            for refs in rule.recipe
        )

    return walk(t, ())[0]


def recognize_bruteforce(g: Grammar, words: Sequence[str], max_depth: int) -> bool:
    """True iff some derivation of depth <= max_depth linearizes exactly to
    ``words``.  Works by enumerating trees and matching leaf constants
    against word segments; intended for small depths only."""
    target = tuple(words)

    # Memoized constant lookup: (category, coordinate, word tuple) -> consts.
    by_coord: dict[tuple[str, int], dict[tuple[str, ...], list[Const]]] = {}
    lengths: dict[tuple[str, int], set[int]] = {}
    for ident, consts in g.constants.items():
        for const in consts:
            for c, part in enumerate(const):
                cw = tuple(part.split(" "))
                by_coord.setdefault((ident, c), {}).setdefault(cw, []).append(const)
                lengths.setdefault((ident, c), set()).add(len(cw))

    for t in enumerate_trees(g, max_depth):
        segs = _segments(g, t)
        cats = {path: leaf.cat for path, leaf in leaf_list(t)}

        def match(seg_i: int, wpos: int, chosen: dict[Path, Const]) -> bool:
            if seg_i == len(segs):
                return wpos == len(target)
            path, coord = segs[seg_i]
            cat = cats[path]
            if path in chosen:
                cw = tuple(chosen[path][coord].split(" "))
                if target[wpos : wpos + len(cw)] != cw:
                    return False
                return match(seg_i + 1, wpos + len(cw), chosen)
            for length in sorted(lengths.get((cat, coord), ())):
                piece = target[wpos : wpos + length]
                if len(piece) < length:
                    continue
                for const in by_coord.get((cat, coord), {}).get(piece, ()):
                    chosen[path] = const
                    if match(seg_i + 1, wpos + length, chosen):
                        return True
                    del chosen[path]
            return False

        if match(0, 0, {}):
            return True
    return False
