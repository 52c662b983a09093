"""Exception types shared across the package."""


class CrossdepError(Exception):
    """Base class for all errors raised by this package."""


class GrammarError(CrossdepError):
    """Invalid grammar value, rule application, or lookup."""


class GrammarFormatError(GrammarError):
    """Malformed grammar file; message carries the offending line number."""


class LexiconError(CrossdepError):
    """Malformed or incomplete lexicon file."""


class AssignmentError(CrossdepError):
    """A derivation leaf is missing an assignment or was assigned a
    constant of the wrong shape."""


class ResolutionError(CrossdepError):
    """Subject resolution failed (e.g. a rule expects a propagated subject
    at the tree root, or a verb occurrence has no binding)."""


class GenerationError(CrossdepError):
    """Controlled sampling could not satisfy its distinctness contracts."""


class DataError(CrossdepError):
    """Invalid or inconsistent data file (datasets, embeddings, predictions)."""


class AlignmentError(DataError):
    """A word span has no aligned subwords in an embedding record."""


class TrainingError(CrossdepError):
    """Probe training aborted (non-finite loss or inconsistent inputs)."""
