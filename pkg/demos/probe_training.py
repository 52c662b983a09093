"""Train the span-selection probe on synthetic embeddings and read the
grouped report.

The positional provider makes the raising task decodable by construction,
so the probe should approach a perfect score; the random provider floors
at the random baseline.
"""

from crossdep import (
    GenerationConfig,
    Hyperparams,
    build_report,
    build_samples,
    default_lexicon,
    raising_grammar,
    train_probe,
)
from crossdep.metrics import render_text
from crossdep.probe import predict_all
from crossdep.providers import positional_store, random_store


def main():
    lex = default_lexicon()
    g = raising_grammar(lex)
    samples = build_samples(
        g, lex, GenerationConfig(max_depth=4, seed=7, realizations_per_tree=50)
    )
    print(f"{len(samples)} sentences, depth <= 4")

    for maker in (positional_store, random_store):
        store = maker(samples, dim=64, seed=1)
        params, history = train_probe(
            samples, store, Hyperparams(epochs=30, seed=3)
        )
        best = max(h.val_accuracy for h in history)
        preds = predict_all(params, samples, store)
        print(f"\n=== provider: {store.provider_name} (best val {best:.3f})")
        print(render_text(build_report(preds), title=store.provider_name))


if __name__ == "__main__":
    main()
