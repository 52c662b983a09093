"""Walk through the grammar engine by hand: build a derivation, linearize
it, and inspect spans and verb-subject pairings."""

from crossdep import control_grammar, linearize, recognize_bruteforce, validate_grammar
from crossdep.trees import Apply, Leaf, resolve_subjects, tree_depth


def show(y):
    print("  sentence:", " ".join(y.words))
    for label, spans in (("nouns", y.noun_spans), ("verbs", y.verb_spans)):
        rendered = [
            "{" + ",".join(map(str, span)) + "} " + " ".join(y.words[i] for i in span)
            for span in spans
        ]
        print(f"  {label}:", " | ".join(rendered))
    for v, n in enumerate(y.subject_map):
        verb = " ".join(y.words[i] for i in y.verb_spans[v])
        noun = " ".join(y.words[i] for i in y.noun_spans[n])
        print(f"  subject of {verb!r} -> {noun!r}"
              f"  (rule {y.verb_rules[v]}, scope {y.verb_scopes[v]})")


def main():
    g = control_grammar()
    print("validation:", validate_grammar(g).ok)

    # A causative under an object-selecting finite verb: the object of the
    # main clause does the letting, its causee does the doing.
    tree = Apply("A2", (
        Leaf("NP"), Leaf("TV.obj"), Leaf("NP"), Leaf("NP"), Leaf("CV"),
        Apply("A4", (Leaf("TE"), Leaf("INF_tv"), Leaf("NP"))),
    ))
    words = ["de docent", "vraagt", "de hond", "de student", "laten",
             "te", "doen", "de oefeningen"]
    print(f"\nderivation depth {tree_depth(tree)}:")
    y = linearize(g, tree, words)
    show(y)

    print("\nsubject map from the tree alone:", resolve_subjects(g, tree))

    print("\nmembership checks (brute-force oracle):")
    print("  original:", recognize_bruteforce(g, y.words, 2))
    broken = tuple(w for w in y.words if w != "te")
    print("  without 'te':", recognize_bruteforce(g, broken, 2))


if __name__ == "__main__":
    main()
