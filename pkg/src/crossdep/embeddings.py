"""Embedding file format and in-memory store.

One JSON header line (``format_version``, ``dim``, ``provider_name``), then
one JSON object per sentence: subword-to-word alignment plus the subword
vectors as base64 of little-endian float32 values, row-major.  The binary
encoding round-trips bit-exactly.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError

FORMAT_VERSION = 1
SENTINEL_WORD_ID = -1  # special subwords (delimiters) align to no word


@dataclass
class EmbeddingRecord:
    """Per-sentence subword vectors plus subword-to-word alignment."""

    sentence_id: str
    word_ids: tuple[int, ...]
    vectors: np.ndarray  # (T, D) float32

    @property
    def n_subwords(self) -> int:
        return len(self.word_ids)

    def check(self, n_words: int | None = None) -> None:
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.word_ids):
            raise DataError(
                f"{self.sentence_id}: vectors shape {self.vectors.shape} does not "
                f"match {len(self.word_ids)} subwords"
            )
        real = [w for w in self.word_ids if w != SENTINEL_WORD_ID]
        if any(w < 0 for w in real):
            raise DataError(f"{self.sentence_id}: negative word id")
        if any(b < a for a, b in zip(real, real[1:])):
            raise DataError(f"{self.sentence_id}: word ids are not non-decreasing")
        if n_words is not None:
            covered = set(real)
            missing = set(range(n_words)) - covered
            if missing:
                raise DataError(
                    f"{self.sentence_id}: words {sorted(missing)} have no subwords"
                )
            if covered - set(range(n_words)):
                raise DataError(f"{self.sentence_id}: word id out of range")


class EmbeddingStore:
    """Sentence-id keyed access to embedding records of one provider."""

    def __init__(self, records: list[EmbeddingRecord], dim: int, provider_name: str):
        self.dim = dim
        self.provider_name = provider_name
        self._records = {r.sentence_id: r for r in records}
        for r in records:
            if r.vectors.shape[1] != dim:
                raise DataError(
                    f"{r.sentence_id}: dimension {r.vectors.shape[1]} != store dim {dim}"
                )

    def __contains__(self, sentence_id: str) -> bool:
        return sentence_id in self._records

    def __len__(self) -> int:
        return len(self._records)

    def get(self, sentence_id: str) -> EmbeddingRecord:
        rec = self._records.get(sentence_id)
        if rec is None:
            raise DataError(f"no embedding record for sentence {sentence_id!r}")
        return rec

    def records(self) -> list[EmbeddingRecord]:
        return list(self._records.values())


def encode_vectors(vectors: np.ndarray) -> str:
    return base64.b64encode(
        np.ascontiguousarray(vectors, dtype="<f4").tobytes()
    ).decode("ascii")


def decode_vectors(data: str, n_subwords: int, dim: int) -> np.ndarray:
    raw = base64.b64decode(data.encode("ascii"))
    if len(raw) != 4 * n_subwords * dim:
        raise DataError(
            f"embedding payload has {len(raw)} bytes, expected {4 * n_subwords * dim}"
        )
    return np.frombuffer(raw, dtype="<f4").reshape(n_subwords, dim).copy()


def write_embeddings(path, store: EmbeddingStore) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            json.dumps(
                {
                    "format_version": FORMAT_VERSION,
                    "dim": store.dim,
                    "provider_name": store.provider_name,
                },
                separators=(", ", ": "),
            )
            + "\n"
        )
        for rec in store.records():
            obj = {
                "sentence_id": rec.sentence_id,
                "n_subwords": rec.n_subwords,
                "word_ids": list(rec.word_ids),
                "emb_b64": encode_vectors(rec.vectors),
            }
            fh.write(json.dumps(obj, separators=(", ", ": ")) + "\n")


def read_embeddings(path) -> EmbeddingStore:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty embedding file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DataError(f"line 1: malformed embedding header ({exc})") from exc
    if header.get("format_version") != FORMAT_VERSION:
        raise DataError(f"unsupported embedding format version {header.get('format_version')}")
    dim = int(header["dim"])
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rec = EmbeddingRecord(
                sentence_id=obj["sentence_id"],
                word_ids=tuple(int(w) for w in obj["word_ids"]),
                vectors=decode_vectors(obj["emb_b64"], int(obj["n_subwords"]), dim),
            )
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from exc
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"line {lineno}: malformed embedding record ({exc})") from exc
        rec.check()
        records.append(rec)
    return EmbeddingStore(records, dim, header.get("provider_name", ""))
