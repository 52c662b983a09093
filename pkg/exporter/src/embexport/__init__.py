"""embexport: run pretrained language models over annotated datasets and
write per-sentence subword embeddings with word alignment."""

__version__ = "0.1.0"

from .export import ExportConfig, export_dataset
from .formats import DatasetSample, read_dataset_file, write_embedding_file

__all__ = [
    "__version__",
    "ExportConfig",
    "export_dataset",
    "DatasetSample",
    "read_dataset_file",
    "write_embedding_file",
]
