"""crossdep: string-tuple grammar engine, annotated corpus generator, and
span-selection probe for crossing verb-subject dependencies."""

__version__ = "0.1.0"

from .grammar import (
    Grammar,
    NonTerminal,
    RuleRecipe,
    apply_rule,
    arity_of,
    dump_grammar,
    load_grammar,
    parse_grammar,
    validate_grammar,
)
from .grammars import builtin_grammar, control_grammar, raising_grammar
from .lexicon import (
    GenerationConfig,
    Lexicon,
    default_lexicon,
    load_lexicon,
    postprocess,
    sample_realizations,
)
from .trees import (
    AnnotatedYield,
    Apply,
    Leaf,
    enumerate_trees,
    linearize,
    recognize_bruteforce,
    resolve_subjects,
    tree_depth,
)
from .corpus import AnnotatedSample, build_samples, read_dataset, write_dataset
from .embeddings import EmbeddingRecord, EmbeddingStore, read_embeddings, write_embeddings
from .metrics import (
    MetricsReport,
    accuracy,
    build_report,
    consistency,
    grouped_accuracy,
    random_baseline,
)
from .probe import (
    Hyperparams,
    PredictionRecord,
    ProbeParams,
    grad_check,
    init_probe_params,
    pool_spans,
    predict,
    score_pairs,
    train_probe,
)
from .providers import oracle_store, positional_store, random_store, synth_store

__all__ = [
    "__version__",
    "Grammar",
    "NonTerminal",
    "RuleRecipe",
    "apply_rule",
    "arity_of",
    "dump_grammar",
    "load_grammar",
    "parse_grammar",
    "validate_grammar",
    "builtin_grammar",
    "control_grammar",
    "raising_grammar",
    "GenerationConfig",
    "Lexicon",
    "default_lexicon",
    "load_lexicon",
    "postprocess",
    "sample_realizations",
    "AnnotatedYield",
    "Apply",
    "Leaf",
    "enumerate_trees",
    "linearize",
    "recognize_bruteforce",
    "resolve_subjects",
    "tree_depth",
    "AnnotatedSample",
    "build_samples",
    "read_dataset",
    "write_dataset",
    "EmbeddingRecord",
    "EmbeddingStore",
    "read_embeddings",
    "write_embeddings",
    "MetricsReport",
    "accuracy",
    "build_report",
    "consistency",
    "grouped_accuracy",
    "random_baseline",
    "Hyperparams",
    "PredictionRecord",
    "ProbeParams",
    "grad_check",
    "init_probe_params",
    "pool_spans",
    "predict",
    "score_pairs",
    "train_probe",
    "oracle_store",
    "positional_store",
    "random_store",
    "synth_store",
]
