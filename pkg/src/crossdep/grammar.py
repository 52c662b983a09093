"""Core representation of string-tuple rewriting grammars.

A grammar derives, for each non-terminal, tuples of word strings of a fixed
arity.  Rules combine the coordinates of their right-hand sides into a new
tuple by pure rearrangement: every right-hand-side coordinate is used exactly
once, so no material is copied or deleted.  All terminal material enters
through leaf constants; rules themselves never introduce words.

Grammar values are immutable after construction and safe to share between
workers.  Validation never raises: :func:`validate_grammar` returns a report.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import GrammarError, GrammarFormatError

# A constant is one string per coordinate; words inside a coordinate are
# separated by single spaces ("de student" is two words).
Const = tuple[str, ...]

SCOPE_SUBJECT = "subject"
SCOPE_OBJECT = "object"
SCOPE_NONE = "none"


def make_ident(name: str, subtype: str | None) -> str:
    return name if subtype is None else f"{name}.{subtype}"


def split_ident(ident: str) -> tuple[str, str | None]:
    if "." in ident:
        name, subtype = ident.split(".", 1)
        return name, subtype
    return ident, None


def base_name(ident: str) -> str:
    return ident.split(".", 1)[0]


@dataclass(frozen=True)
class NonTerminal:
    """A category deriving string tuples of the given arity.

    ``subtype`` distinguishes lexical variants of one base category that
    share rules but differ in lexicon slots and inheritance behaviour.
    """

    name: str
    arity: int
    subtype: str | None = None

    @property
    def ident(self) -> str:
        return make_ident(self.name, self.subtype)


@dataclass(frozen=True)
class CoordRef:
    """Reference to coordinate ``coord`` of the RHS non-terminal at
    position ``pos`` (both 1-based)."""

    pos: int
    coord: int


@dataclass(frozen=True)
class SubjectSource:
    """Where a verb's subject (or a propagated value) comes from:
    an NP sibling at the given RHS position, or the value handed down
    from the parent rule."""

    kind: str  # "np" | "incoming"
    np_pos: int | None = None

    @staticmethod
    def np(pos: int) -> "SubjectSource":
        return SubjectSource("np", pos)

    @staticmethod
    def incoming() -> "SubjectSource":
        return SubjectSource("incoming")


@dataclass(frozen=True)
class Propagation:
    """Value handed down into a clause-valued RHS child, tagged with the
    control scope of the decision that selected it."""

    source: SubjectSource
    scope: str  # "subject" | "object"


@dataclass(frozen=True)
class SchemeClause:
    """One inheritance scheme, optionally guarded on the subtypes of
    specific RHS positions.

    ``verb_subjects`` binds each verbal RHS position to its subject source;
    ``propagations`` states what flows down into clause-valued children.
    """

    guard: tuple[tuple[int, str], ...] = ()
    verb_subjects: tuple[tuple[int, SubjectSource], ...] = ()
    propagations: tuple[tuple[int, Propagation], ...] = ()

    def matches(self, subtypes: list[str | None]) -> bool:
        return all(
            1 <= pos <= len(subtypes) and subtypes[pos - 1] == want
            for pos, want in self.guard
        )


_EMPTY_SCHEME = SchemeClause()


@dataclass(frozen=True)
class RuleRecipe:
    """A rewrite rule: ``lhs(recipe) <- rhs...``.

    ``recipe`` holds, for each LHS coordinate, the ordered coordinate
    references whose contents are concatenated (with a word boundary)
    to form it.
    """

    label: str
    lhs: str
    rhs: tuple[str, ...]
    recipe: tuple[tuple[CoordRef, ...], ...]
    schemes: tuple[SchemeClause, ...] = ()

    def rhs_arities(self) -> dict[int, int]:
        """Expected arity per RHS position, as implied by the recipe."""
        counts: dict[int, int] = {i + 1: 0 for i in range(len(self.rhs))}
        for coord_refs in self.recipe:
            for ref in coord_refs:
                counts[ref.pos] = max(counts.get(ref.pos, 0), ref.coord)
        return counts

    def scheme_for(self, subtypes: list[str | None]) -> SchemeClause:
        """Select the inheritance scheme matching the children's subtypes."""
        matching = [s for s in self.schemes if s.matches(subtypes)]
        if not self.schemes:
            return _EMPTY_SCHEME
        if len(matching) != 1:
            raise GrammarError(
                f"rule {self.label}: {len(matching)} inheritance schemes match "
                f"subtypes {subtypes} (need exactly one)"
            )
        return matching[0]


@dataclass(frozen=True)
class Grammar:
    """An m-multiple string-tuple grammar with verb/noun marking.

    ``constants`` maps category identifiers (``NP``, ``TV.su``) to their
    ordered constant tuples.  ``verb_marked``/``noun_marked`` hold base
    names whose occurrences contribute verb/noun phrase spans.  Categories
    in ``sv_pair`` carry constants that embed their own subject-verb pair:
    all words but the last form a noun occurrence, the last word a verb
    occurrence, directly paired.
    """

    grammar_id: str
    start: str
    nonterminals: tuple[NonTerminal, ...]
    constants: dict[str, tuple[Const, ...]]
    rules: tuple[RuleRecipe, ...]
    verb_marked: frozenset[str]
    noun_marked: frozenset[str]
    sv_pair: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "_by_ident", {nt.ident: nt for nt in self.nonterminals})
        variants: dict[str, list[NonTerminal]] = {}
        for nt in self.nonterminals:
            variants.setdefault(nt.name, []).append(nt)
        object.__setattr__(self, "_variants", variants)
        object.__setattr__(self, "_rules_by_label", {r.label: r for r in self.rules})

    # Derived lookups -----------------------------------------------------

    def nonterminal(self, ident: str) -> NonTerminal:
        nt = self._by_ident.get(ident)
        if nt is None:
            raise GrammarError(f"unknown non-terminal: {ident!r}")
        return nt

    def variants(self, name: str) -> tuple[NonTerminal, ...]:
        """All subtyped variants of a base name (or the single concrete
        non-terminal when ``name`` is already a full identifier)."""
        if name in self._by_ident:
            return (self._by_ident[name],)
        if name in self._variants:
            return tuple(sorted(self._variants[name], key=lambda nt: nt.ident))
        raise GrammarError(f"unknown non-terminal: {name!r}")

    def rule(self, label: str) -> RuleRecipe:
        r = self._rules_by_label.get(label)
        if r is None:
            raise GrammarError(f"unknown rule label: {label!r}")
        return r

    def constants_of(self, ident: str) -> tuple[Const, ...]:
        return self.constants.get(ident, ())

    def multiplicity(self) -> int:
        """Maximal arity over all non-terminals."""
        return max(nt.arity for nt in self.nonterminals)

    def is_verb(self, ident: str) -> bool:
        return base_name(ident) in self.verb_marked

    def is_noun(self, ident: str) -> bool:
        return base_name(ident) in self.noun_marked

    def is_sv_pair(self, ident: str) -> bool:
        return base_name(ident) in self.sv_pair


def arity_of(g: Grammar, name: str) -> int:
    """Arity of a non-terminal, addressed by base name or full identifier.

    All subtyped variants of one base share an arity (enforced by
    validation), so the base name is unambiguous.
    """
    return g.variants(name)[0].arity


def apply_rule(rule: RuleRecipe, args: list[Const | str]) -> Const:
    """Execute one rewrite step on concrete string tuples.

    Each argument may be given as a bare string for arity-1 categories.
    Coordinates referenced by the recipe are concatenated in order with a
    word-boundary separator.  Raises :class:`GrammarError` with a positional
    diagnostic on arity mismatch.
    """
    if len(args) != len(rule.rhs):
        raise GrammarError(
            f"rule {rule.label}: expected {len(rule.rhs)} arguments, got {len(args)}"
        )
    tuples: list[Const] = [(a,) if isinstance(a, str) else tuple(a) for a in args]
    expected = rule.rhs_arities()
    for i, t in enumerate(tuples, start=1):
        if len(t) != expected[i]:
            raise GrammarError(
                f"rule {rule.label}: argument {i} ({rule.rhs[i - 1]}) must have "
                f"arity {expected[i]}, got {len(t)}"
            )
        for c, part in enumerate(t, start=1):
            if not part:
                raise GrammarError(
                    f"rule {rule.label}: argument {i} coordinate {c} is empty; "
                    "empty coordinates are not supported"
                )
    return tuple(
        " ".join(tuples[ref.pos - 1][ref.coord - 1] for ref in coord_refs)
        for coord_refs in rule.recipe
    )


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _clean_words(text: str) -> bool:
    """True when a coordinate is a clean single-spaced word sequence."""
    return bool(text) and text == " ".join(text.split()) and not text.startswith(" ")


def validate_grammar(g: Grammar) -> ValidationReport:
    """Check every structural invariant; diagnostics are returned, never raised."""
    bad: list[str] = []
    warn: list[str] = []

    seen: set[str] = set()
    for nt in g.nonterminals:
        if nt.arity < 1:
            bad.append(f"non-terminal {nt.ident}: arity must be >= 1, got {nt.arity}")
        if nt.ident in seen:
            bad.append(f"duplicate non-terminal identifier: {nt.ident}")
        seen.add(nt.ident)
    by_name: dict[str, set[int]] = {}
    for nt in g.nonterminals:
        by_name.setdefault(nt.name, set()).add(nt.arity)
    for name, arities in by_name.items():
        if len(arities) > 1:
            bad.append(f"variants of {name} disagree on arity: {sorted(arities)}")

    def known(name: str) -> bool:
        return name in seen or name in by_name

    if not known(g.start):
        bad.append(f"start symbol {g.start!r} is not a declared non-terminal")
    elif next(iter(by_name[base_name(g.start)])) != 1:
        bad.append(f"start symbol {g.start} must have arity 1")

    for ident, consts in g.constants.items():
        if not known(ident):
            bad.append(f"constants declared for unknown non-terminal {ident!r}")
            continue
        arity = next(iter(by_name[base_name(ident)]))
        seen_consts: set[Const] = set()
        for const in consts:
            if len(const) != arity:
                bad.append(
                    f"constant {const!r} for {ident} has {len(const)} coordinates, "
                    f"expected {arity}"
                )
            if const in seen_consts:
                bad.append(f"duplicate constant {const!r} for {ident}")
            seen_consts.add(const)
            for part in const:
                if not _clean_words(part):
                    bad.append(f"constant coordinate {part!r} for {ident} is not a "
                               "clean single-spaced word sequence")

    overlap = g.verb_marked & g.noun_marked
    if overlap:
        bad.append(f"verb and noun markings overlap: {sorted(overlap)}")
    for name in sorted(g.verb_marked | g.noun_marked | g.sv_pair):
        if name not in by_name:
            bad.append(f"marked non-terminal {name!r} is not declared")
    for name in sorted(g.sv_pair):
        for nt in g.nonterminals:
            if nt.name != name:
                continue
            for const in g.constants.get(nt.ident, ()):
                words = [w for part in const for w in part.split(" ")]
                if len(words) < 2:
                    bad.append(
                        f"subject-verb constant {const!r} for {nt.ident} needs at "
                        "least two words (noun part plus verb)"
                    )

    labels: set[str] = set()
    clause_targets: set[str] = set()  # base names that receive propagated subjects
    for rule in g.rules:
        if rule.label in labels:
            bad.append(f"duplicate rule label: {rule.label}")
        labels.add(rule.label)
        for name in (rule.lhs, *rule.rhs):
            if not known(name):
                bad.append(f"rule {rule.label}: unknown non-terminal {name!r}")
        if not all(known(name) for name in (rule.lhs, *rule.rhs)):
            continue
        lhs_arity = next(iter(by_name[base_name(rule.lhs)]))
        if len(rule.recipe) != lhs_arity:
            bad.append(
                f"rule {rule.label}: recipe has {len(rule.recipe)} coordinates, "
                f"LHS {rule.lhs} has arity {lhs_arity}"
            )
        required = {
            (pos, coord)
            for pos, name in enumerate(rule.rhs, start=1)
            for coord in range(1, next(iter(by_name[base_name(name)])) + 1)
        }
        used: list[tuple[int, int]] = [
            (ref.pos, ref.coord) for refs in rule.recipe for ref in refs
        ]
        for pos, coord in used:
            if (pos, coord) not in required:
                bad.append(
                    f"rule {rule.label}: coordinate reference x{pos}.{coord} "
                    "is out of range"
                )
        for pos, coord in sorted(required - set(used)):
            bad.append(
                f"rule {rule.label}: coordinate x{pos}.{coord} is never used "
                "(deletion violates linearity)"
            )
        counts: dict[tuple[int, int], int] = {}
        for key in used:
            counts[key] = counts.get(key, 0) + 1
        for (pos, coord), n in sorted(counts.items()):
            if n > 1:
                bad.append(
                    f"rule {rule.label}: coordinate x{pos}.{coord} is used {n} "
                    "times (duplication violates linearity)"
                )
        bad.extend(_check_schemes(g, rule, by_name))
        for pos, _ in _scheme_propagation_positions(rule):
            if 1 <= pos <= len(rule.rhs):
                clause_targets.add(base_name(rule.rhs[pos - 1]))

    for rule in g.rules:
        for clause in rule.schemes:
            uses_incoming = any(
                src.kind == "incoming" for _, src in clause.verb_subjects
            ) or any(p.source.kind == "incoming" for _, p in clause.propagations)
            if uses_incoming and base_name(rule.lhs) not in clause_targets:
                bad.append(
                    f"rule {rule.label}: scheme consumes an incoming subject but "
                    f"{rule.lhs} is never a propagation target"
                )

    # Reachability from the start symbol (over base names).
    edges: dict[str, set[str]] = {}
    for rule in g.rules:
        edges.setdefault(base_name(rule.lhs), set()).update(
            base_name(r) for r in rule.rhs
        )
    reachable = {base_name(g.start)}
    frontier = [base_name(g.start)]
    while frontier:
        for nxt in edges.get(frontier.pop(), ()):
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    for name in sorted(by_name):
        if name not in reachable:
            warn.append(f"non-terminal {name} is unreachable from {g.start}")

    produced = {base_name(r.lhs) for r in g.rules}
    for nt in g.nonterminals:
        if not g.constants.get(nt.ident) and nt.name not in produced:
            warn.append(
                f"non-terminal {nt.ident} is non-productive: no constants and "
                "no producing rule"
            )

    return ValidationReport(tuple(bad), tuple(warn))


def _scheme_propagation_positions(rule: RuleRecipe):
    for clause in rule.schemes:
        for pos, prop in clause.propagations:
            yield pos, prop


def _check_schemes(g: Grammar, rule: RuleRecipe, by_name: dict[str, set[int]]) -> list[str]:
    bad: list[str] = []
    for clause in rule.schemes:
        for pos, want in clause.guard:
            if not 1 <= pos <= len(rule.rhs):
                bad.append(f"rule {rule.label}: scheme guard position {pos} out of range")
                continue
            idents = {nt.ident for nt in g.nonterminals if nt.name == base_name(rule.rhs[pos - 1])}
            if make_ident(base_name(rule.rhs[pos - 1]), want) not in idents:
                bad.append(
                    f"rule {rule.label}: guard {pos}={want} names an unknown "
                    f"subtype of {rule.rhs[pos - 1]}"
                )
        for pos, src in clause.verb_subjects:
            if not 1 <= pos <= len(rule.rhs):
                bad.append(f"rule {rule.label}: scheme verb position {pos} out of range")
                continue
            if base_name(rule.rhs[pos - 1]) not in g.verb_marked:
                bad.append(
                    f"rule {rule.label}: scheme binds position {pos} "
                    f"({rule.rhs[pos - 1]}) which is not verb-marked"
                )
            bad.extend(_check_source(g, rule, src))
        for pos, prop in clause.propagations:
            if not 1 <= pos <= len(rule.rhs):
                bad.append(f"rule {rule.label}: propagation position {pos} out of range")
                continue
            if prop.scope not in (SCOPE_SUBJECT, SCOPE_OBJECT):
                bad.append(f"rule {rule.label}: propagation scope {prop.scope!r} invalid")
            bad.extend(_check_source(g, rule, prop.source))
    return bad


def _check_source(g: Grammar, rule: RuleRecipe, src: SubjectSource) -> list[str]:
    if src.kind == "np":
        if src.np_pos is None or not 1 <= src.np_pos <= len(rule.rhs):
            return [f"rule {rule.label}: np source position {src.np_pos} out of range"]
        if base_name(rule.rhs[src.np_pos - 1]) not in g.noun_marked:
            return [
                f"rule {rule.label}: np source position {src.np_pos} "
                f"({rule.rhs[src.np_pos - 1]}) is not noun-marked"
            ]
    elif src.kind != "incoming":
        return [f"rule {rule.label}: unknown subject source kind {src.kind!r}"]
    return []


# ---------------------------------------------------------------------------
# Text format
#
# One declaration per line; '#' starts a comment.  See docs/grammar-format.md
# for the exact grammar of this format.

_NT_RE = re.compile(
    r"^nt\s+(?P<name>\S+)\s+arity=(?P<arity>\d+)(?P<flags>(\s+\S+)*)$"
)
_CONST_RE = re.compile(r'^const\s+(?P<ident>\S+)\s*=\s*(?P<body>.+)$')
_RULE_RE = re.compile(
    r"^rule\s+(?P<label>\S+)\s*:\s*(?P<lhs>[^\s(]+)\((?P<recipe>[^)]*)\)\s*<-\s*(?P<rhs>.*)$"
)
_INHERIT_RE = re.compile(
    r"^inherit\s+(?P<label>\S+)(\s*\[(?P<guard>[^\]]*)\])?\s*:\s*(?P<body>.*)$"
)


def parse_grammar(text: str, grammar_id: str | None = None) -> Grammar:
    """Parse the declarative grammar format. Raises
    :class:`GrammarFormatError` with a line number on malformed input."""
    nonterminals: list[NonTerminal] = []
    constants: dict[str, list[Const]] = {}
    rules: dict[str, dict] = {}
    rule_order: list[str] = []
    verb_marked: set[str] = set()
    noun_marked: set[str] = set()
    sv_pair: set[str] = set()
    start: str | None = None
    parsed_id: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        def fail(msg: str):
            raise GrammarFormatError(f"line {lineno}: {msg}")

        if line.startswith("grammar "):
            parsed_id = line.split(None, 1)[1].strip()
        elif line.startswith("start "):
            start = line.split(None, 1)[1].strip()
        elif line.startswith("nt "):
            m = _NT_RE.match(line)
            if not m:
                fail(f"bad nt declaration: {line!r}")
            ident = m.group("name")
            name, subtype = split_ident(ident)
            nonterminals.append(NonTerminal(name, int(m.group("arity")), subtype))
            for flag in m.group("flags").split():
                if flag == "verb":
                    verb_marked.add(name)
                elif flag == "noun":
                    noun_marked.add(name)
                elif flag == "svpair":
                    sv_pair.add(name)
                else:
                    fail(f"unknown nt flag {flag!r}")
        elif line.startswith("const "):
            m = _CONST_RE.match(line)
            if not m:
                fail(f"bad const declaration: {line!r}")
            ident = m.group("ident")
            entries = constants.setdefault(ident, [])
            for chunk in m.group("body").split("|"):
                chunk = chunk.strip()
                if not (len(chunk) >= 2 and chunk[0] == '"' and chunk[-1] == '"'):
                    fail(f"constant entry must be double-quoted: {chunk!r}")
                entries.append(tuple(part.strip() for part in chunk[1:-1].split(",")))
        elif line.startswith("rule "):
            m = _RULE_RE.match(line)
            if not m:
                fail(f"bad rule declaration: {line!r}")
            label = m.group("label")
            if label in rules:
                fail(f"duplicate rule label {label!r}")
            recipe: list[tuple[CoordRef, ...]] = []
            for coord_src in m.group("recipe").split(","):
                refs = []
                for token in coord_src.split():
                    rm = re.fullmatch(r"x(\d+)\.(\d+)", token)
                    if not rm:
                        fail(f"bad coordinate reference {token!r} (expected xP.C)")
                    refs.append(CoordRef(int(rm.group(1)), int(rm.group(2))))
                recipe.append(tuple(refs))
            rules[label] = {
                "lhs": m.group("lhs"),
                "rhs": tuple(m.group("rhs").split()),
                "recipe": tuple(recipe),
                "schemes": [],
            }
            rule_order.append(label)
        elif line.startswith("inherit "):
            m = _INHERIT_RE.match(line)
            if not m:
                fail(f"bad inherit declaration: {line!r}")
            label = m.group("label")
            if label not in rules:
                fail(f"inherit before rule (or unknown rule) {label!r}")
            guard: list[tuple[int, str]] = []
            if m.group("guard"):
                for cond in m.group("guard").split():
                    gm = re.fullmatch(r"(\d+)=(\S+)", cond)
                    if not gm:
                        fail(f"bad guard condition {cond!r}")
                    guard.append((int(gm.group(1)), gm.group(2)))
            verbs: list[tuple[int, SubjectSource]] = []
            props: list[tuple[int, Propagation]] = []
            body = m.group("body").strip()
            for item in filter(None, (s.strip() for s in body.split(";"))):
                vm = re.fullmatch(r"verb\s+(\d+)\s*=\s*(np\s+(\d+)|incoming)", item)
                pm = re.fullmatch(
                    r"clause\s+(\d+)\s*<-\s*(np\s+(\d+)|incoming)\s+scope\s+(subject|object)",
                    item,
                )
                if vm:
                    src = (
                        SubjectSource.incoming()
                        if vm.group(2) == "incoming"
                        else SubjectSource.np(int(vm.group(3)))
                    )
                    verbs.append((int(vm.group(1)), src))
                elif pm:
                    src = (
                        SubjectSource.incoming()
                        if pm.group(2) == "incoming"
                        else SubjectSource.np(int(pm.group(3)))
                    )
                    props.append((int(pm.group(1)), Propagation(src, pm.group(4))))
                else:
                    fail(f"bad inherit item {item!r}")
            rules[label]["schemes"].append(
                SchemeClause(tuple(guard), tuple(verbs), tuple(props))
            )
        else:
            fail(f"unknown declaration: {line!r}")

    if start is None:
        raise GrammarFormatError("missing 'start' declaration")
    return Grammar(
        grammar_id=grammar_id or parsed_id or "grammar",
        start=start,
        nonterminals=tuple(nonterminals),
        constants={k: tuple(v) for k, v in constants.items()},
        rules=tuple(
            RuleRecipe(
                label=label,
                lhs=rules[label]["lhs"],
                rhs=rules[label]["rhs"],
                recipe=rules[label]["recipe"],
                schemes=tuple(rules[label]["schemes"]),
            )
            for label in rule_order
        ),
        verb_marked=frozenset(verb_marked),
        noun_marked=frozenset(noun_marked),
        sv_pair=frozenset(sv_pair),
    )


def load_grammar(path, grammar_id: str | None = None) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read(), grammar_id=grammar_id)


def _dump_source(src: SubjectSource) -> str:
    return "incoming" if src.kind == "incoming" else f"np {src.np_pos}"


def dump_grammar(g: Grammar) -> str:
    """Serialize a grammar to the text format; parse(dump(g)) == g."""
    out: list[str] = [f"grammar {g.grammar_id}", f"start {g.start}"]
    for nt in g.nonterminals:
        flags = ""
        if nt.name in g.verb_marked:
            flags += " verb"
        if nt.name in g.noun_marked:
            flags += " noun"
        if nt.name in g.sv_pair:
            flags += " svpair"
        out.append(f"nt {nt.ident} arity={nt.arity}{flags}")
    for nt in g.nonterminals:
        consts = g.constants.get(nt.ident)
        if consts:
            body = " | ".join('"' + ",".join(c) + '"' for c in consts)
            out.append(f"const {nt.ident} = {body}")
    for rule in g.rules:
        recipe = ", ".join(
            " ".join(f"x{r.pos}.{r.coord}" for r in refs) for refs in rule.recipe
        )
        out.append(f"rule {rule.label}: {rule.lhs}({recipe}) <- {' '.join(rule.rhs)}")
        for clause in rule.schemes:
            guard = ""
            if clause.guard:
                guard = " [" + " ".join(f"{p}={s}" for p, s in clause.guard) + "]"
            items = [f"verb {p} = {_dump_source(src)}" for p, src in clause.verb_subjects]
            items += [
                f"clause {p} <- {_dump_source(prop.source)} scope {prop.scope}"
                for p, prop in clause.propagations
            ]
            out.append(f"inherit {rule.label}{guard}: " + " ; ".join(items))
    return "\n".join(out) + "\n"
