"""The two built-in grammars: control-verb nesting and verb raising.

Both are 2-multiple tuple grammars.  Verbal complements are arity-2
non-terminals whose coordinates interleave with the matrix clause, which is
what produces crossing verb-subject dependencies in the surface string.

Constants are drawn from the default lexicon (or one supplied by the
caller), so recognition and generation share one vocabulary.  Each grammar
also ships as a text file in the declarative format; constructors and files
round-trip identically.
"""

from __future__ import annotations

from importlib import resources

from .errors import GrammarError
from .grammar import (
    CoordRef,
    Grammar,
    NonTerminal,
    Propagation,
    RuleRecipe,
    SchemeClause,
    SubjectSource,
    parse_grammar,
)
from .lexicon import Lexicon, default_lexicon

BUILTIN_IDS = ("control", "raising")


def _refs(shorthand: str) -> tuple[tuple[CoordRef, ...], ...]:
    """Recipe shorthand: "1.1 2.1, 3.1" -> coordinates split on commas."""
    return tuple(
        tuple(CoordRef(*map(int, token.split("."))) for token in part.split())
        for part in shorthand.split(",")
    )


def _np(pos: int) -> SubjectSource:
    return SubjectSource.np(pos)


_IN = SubjectSource.incoming()


def control_grammar(lexicon: Lexicon | None = None) -> Grammar:
    """Grammar for control-verb nesting (rules A1-A6 plus adverb variants).

    A finite control verb combines two noun phrases with a verbal
    complement, optionally under a causative and its object.  Complements
    recurse through infinitival control verbs.  The adverb variants insert
    a modifier after the last object (m) or front it with verb-subject
    inversion (i).
    """
    lex = lexicon or default_lexicon()
    nts = (
        NonTerminal("S", 1),
        NonTerminal("NP", 1),
        NonTerminal("TV", 1, "su"),
        NonTerminal("TV", 1, "obj"),
        NonTerminal("CV", 1),
        NonTerminal("VC", 2),
        NonTerminal("TE", 1),
        NonTerminal("INF_iv", 1),
        NonTerminal("INF_tv", 1),
        NonTerminal("INF_c", 1, "su"),
        NonTerminal("INF_c", 1, "obj"),
        NonTerminal("ADV", 1),
    )
    constants = {
        ident: lex.slot(ident)
        for ident in (
            "NP", "TV.su", "TV.obj", "CV", "TE",
            "INF_iv", "INF_tv", "INF_c.su", "INF_c.obj", "ADV",
        )
    }

    # Sentence rules: the finite verb takes its subject directly; the
    # complement's understood subject is the matrix subject (su) or
    # object (obj).  Under a causative, the causative verb receives the
    # controlled value and hands its own object down.
    def s_schemes(cv_pos: int | None, vc_pos: int) -> tuple[SchemeClause, ...]:
        def clause(subtype: str, controlled: SubjectSource, scope: str) -> SchemeClause:
            verbs = [(2, _np(1))]
            if cv_pos is not None:
                verbs.append((cv_pos, controlled))
                prop = Propagation(_np(4), "object")  # causee flows down
            else:
                prop = Propagation(controlled, scope)
            return SchemeClause(((2, subtype),), tuple(verbs), ((vc_pos, prop),))

        return (
            clause("su", _np(1), "subject"),
            clause("obj", _np(3), "object"),
        )

    rules = (
        RuleRecipe("A1", "S", ("NP", "TV", "NP", "VC"),
                   _refs("1.1 2.1 3.1 4.1 4.2"), s_schemes(None, 4)),
        RuleRecipe("A1i", "S", ("NP", "TV", "NP", "VC", "ADV"),
                   _refs("5.1 2.1 1.1 3.1 4.1 4.2"), s_schemes(None, 4)),
        RuleRecipe("A1m", "S", ("NP", "TV", "NP", "VC", "ADV"),
                   _refs("1.1 2.1 3.1 5.1 4.1 4.2"), s_schemes(None, 4)),
        RuleRecipe("A2", "S", ("NP", "TV", "NP", "NP", "CV", "VC"),
                   _refs("1.1 2.1 3.1 4.1 6.1 5.1 6.2"), s_schemes(5, 6)),
        RuleRecipe("A2i", "S", ("NP", "TV", "NP", "NP", "CV", "VC", "ADV"),
                   _refs("7.1 2.1 1.1 3.1 4.1 6.1 5.1 6.2"), s_schemes(5, 6)),
        RuleRecipe("A2m", "S", ("NP", "TV", "NP", "NP", "CV", "VC", "ADV"),
                   _refs("1.1 2.1 3.1 4.1 7.1 6.1 5.1 6.2"), s_schemes(5, 6)),
        # Complement base cases: the infinitive inherits the understood subject.
        RuleRecipe("A3", "VC", ("TE", "INF_iv"),
                   _refs("1.1, 2.1"),
                   (SchemeClause(verb_subjects=((2, _IN),)),)),
        RuleRecipe("A4", "VC", ("TE", "INF_tv", "NP"),
                   _refs("3.1 1.1, 2.1"),
                   (SchemeClause(verb_subjects=((2, _IN),)),)),
        # Recursive cases: an infinitival control verb inherits the incoming
        # subject and controls the embedded complement per its subtype.
        RuleRecipe("A5", "VC", ("NP", "TE", "INF_c", "VC"),
                   _refs("1.1 2.1, 3.1 4.1 4.2"),
                   (
                       SchemeClause(((3, "su"),), ((3, _IN),),
                                    ((4, Propagation(_IN, "subject")),)),
                       SchemeClause(((3, "obj"),), ((3, _IN),),
                                    ((4, Propagation(_np(1), "object")),)),
                   )),
        # With a causative the rule's NP is the causee: it becomes the
        # infinitive's subject and the embedded complement's understood
        # subject, while the causative verb inherits the incoming value.
        RuleRecipe("A6", "VC", ("NP", "TE", "INF_c", "CV", "VC"),
                   _refs("1.1 2.1 4.1, 3.1 5.1 5.2"),
                   (
                       SchemeClause(((3, "su"),), ((3, _np(1)), (4, _IN)),
                                    ((5, Propagation(_np(1), "subject")),)),
                       SchemeClause(((3, "obj"),), ((3, _np(1)), (4, _IN)),
                                    ((5, Propagation(_np(1), "object")),)),
                   )),
    )
    return Grammar(
        grammar_id="control",
        start="S",
        nonterminals=nts,
        constants=constants,
        rules=rules,
        verb_marked=frozenset({"TV", "CV", "INF_iv", "INF_tv", "INF_c"}),
        noun_marked=frozenset({"NP"}),
    )


def raising_grammar(lexicon: Lexicon | None = None) -> Grammar:
    """Grammar for verb raising (rules B1-B4).

    Subordinate clauses are arity-2: noun phrases accumulate in the first
    coordinate while their verbs cluster in the second, so the i-th noun is
    the subject of the i-th cluster verb.  Every rule binds its verb's
    subject directly; no inheritance is needed.  The matrix clause is a
    fixed prefix whose constant embeds its own subject-verb pair.
    """
    lex = lexicon or default_lexicon()
    nts = (
        NonTerminal("S", 1),
        NonTerminal("PREF", 1),
        NonTerminal("SUB", 2),
        NonTerminal("NP", 1),
        NonTerminal("INF_iv", 1),
        NonTerminal("INF_tv", 1),
        NonTerminal("RV", 1),
    )
    constants = {
        ident: lex.slot(ident) for ident in ("NP", "INF_iv", "INF_tv", "RV")
    }
    # Generation samples PREF from the lexicon slot (the fixed prefix);
    # the extra constant widens recognition to matrix clauses with an
    # overt noun-phrase subject.
    constants["PREF"] = tuple(lex.slot("PREF")) + (("de docent ziet",),)

    rules = (
        RuleRecipe("B1", "S", ("PREF", "SUB"), _refs("1.1 2.1 2.2")),
        RuleRecipe("B2", "SUB", ("NP", "INF_iv"), _refs("1.1, 2.1"),
                   (SchemeClause(verb_subjects=((2, _np(1)),)),)),
        RuleRecipe("B3", "SUB", ("NP", "NP", "INF_tv"), _refs("1.1 2.1, 3.1"),
                   (SchemeClause(verb_subjects=((3, _np(1)),)),)),
        RuleRecipe("B4", "SUB", ("NP", "RV", "SUB"), _refs("1.1 3.1, 2.1 3.2"),
                   (SchemeClause(verb_subjects=((2, _np(1)),)),)),
    )
    return Grammar(
        grammar_id="raising",
        start="S",
        nonterminals=nts,
        constants=constants,
        rules=rules,
        verb_marked=frozenset({"INF_iv", "INF_tv", "RV"}),
        noun_marked=frozenset({"NP"}),
        sv_pair=frozenset({"PREF"}),
    )


def builtin_grammar(grammar_id: str, lexicon: Lexicon | None = None) -> Grammar:
    if grammar_id == "control":
        return control_grammar(lexicon)
    if grammar_id == "raising":
        return raising_grammar(lexicon)
    raise GrammarError(f"unknown built-in grammar {grammar_id!r}")


def packaged_grammar_text(grammar_id: str) -> str:
    """The shipped text-format file for a built-in grammar."""
    if grammar_id not in BUILTIN_IDS:
        raise GrammarError(f"unknown built-in grammar {grammar_id!r}")
    return (
        resources.files("crossdep.data").joinpath(f"{grammar_id}.grammar").read_text("utf-8")
    )


def packaged_grammar(grammar_id: str) -> Grammar:
    return parse_grammar(packaged_grammar_text(grammar_id), grammar_id=grammar_id)
