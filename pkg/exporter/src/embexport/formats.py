"""Wire formats shared with the corpus/probe toolkit.

This package talks to it through files only: it reads the annotated-samples
dataset format and writes the embedding format (JSON header line, then one
JSON object per sentence with base64-encoded little-endian float32 vectors,
row-major).  See the toolkit's docs/file-formats.md for the full contract.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

import numpy as np

SENTINEL_WORD_ID = -1
EMBEDDING_FORMAT_VERSION = 1
DATASET_FORMAT = "annotated-samples"


class ExportError(Exception):
    pass


@dataclass(frozen=True)
class DatasetSample:
    sentence_id: str
    sentence: str
    words: tuple[str, ...]
    char_offsets: tuple[tuple[int, int], ...]


def read_dataset_file(path) -> list[DatasetSample]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ExportError(f"{path}: empty dataset file")
    header = json.loads(lines[0])
    if header.get("format") != DATASET_FORMAT:
        raise ExportError(f"{path}: not an {DATASET_FORMAT} file")
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            sample = DatasetSample(
                sentence_id=obj["sentence_id"],
                sentence=obj["sentence"],
                words=tuple(obj["words"]),
                char_offsets=tuple((int(a), int(b)) for a, b in obj["char_offsets"]),
            )
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ExportError(f"line {lineno}: malformed sample ({exc})") from exc
        for word, (start, end) in zip(sample.words, sample.char_offsets):
            if sample.sentence[start:end] != word:
                raise ExportError(
                    f"line {lineno}: offsets do not reconstruct {word!r}"
                )
        samples.append(sample)
    return samples


def write_embedding_file(path, records, dim: int, provider_name: str) -> None:
    """``records``: iterable of (sentence_id, word_ids, vectors) with
    vectors a (T, dim) float32 array."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = {
            "format_version": EMBEDDING_FORMAT_VERSION,
            "dim": dim,
            "provider_name": provider_name,
        }
        fh.write(json.dumps(header, separators=(", ", ": ")) + "\n")
        for sentence_id, word_ids, vectors in records:
            arr = np.ascontiguousarray(vectors, dtype="<f4")
            if arr.ndim != 2 or arr.shape != (len(word_ids), dim):
                raise ExportError(
                    f"{sentence_id}: vector block {arr.shape} does not match "
                    f"({len(word_ids)}, {dim})"
                )
            obj = {
                "sentence_id": sentence_id,
                "n_subwords": len(word_ids),
                "word_ids": list(word_ids),
                "emb_b64": base64.b64encode(arr.tobytes()).decode("ascii"),
            }
            fh.write(json.dumps(obj, separators=(", ", ": ")) + "\n")
