"""Batch inference over a dataset and subword-to-word alignment.

Alignment matches the tokenizer's character offsets against the dataset's
per-word offsets: a subword must fall inside exactly one word (sentence
delimiters and free-standing punctuation align to no word and get the
sentinel id).  A subword straddling a word boundary, or a word left without
subwords, aborts the export naming the sentence and word.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formats import SENTINEL_WORD_ID, DatasetSample, ExportError, read_dataset_file, write_embedding_file


@dataclass(frozen=True)
class ExportConfig:
    model: str
    layer: int = -1  # index into hidden states; -1 = final hidden layer
    batch_size: int = 16
    device: str = "cpu"


def align_word_ids(
    sample: DatasetSample, offsets: list[tuple[int, int]], specials: list[bool]
) -> tuple[int, ...]:
    """Map each subword offset to a word index via containment."""
    word_ids: list[int] = []
    for (start, end), special in zip(offsets, specials):
        if special or start == end:
            word_ids.append(SENTINEL_WORD_ID)
            continue
        # Some tokenizers include leading/trailing whitespace in offsets.
        while start < end and sample.sentence[start].isspace():
            start += 1
        while end > start and sample.sentence[end - 1].isspace():
            end -= 1
        if start == end:
            word_ids.append(SENTINEL_WORD_ID)
            continue
        containing = [
            w
            for w, (ws, we) in enumerate(sample.char_offsets)
            if ws <= start and end <= we
        ]
        if len(containing) == 1:
            word_ids.append(containing[0])
            continue
        overlapping = [
            w
            for w, (ws, we) in enumerate(sample.char_offsets)
            if max(ws, start) < min(we, end)
        ]
        if not overlapping:
            word_ids.append(SENTINEL_WORD_ID)  # punctuation between words
            continue
        word = sample.words[overlapping[0]]
        raise ExportError(
            f"{sample.sentence_id}: subword at ({start},{end}) "
            f"{sample.sentence[start:end]!r} straddles word {word!r}"
        )
    for w, word in enumerate(sample.words):
        if w not in word_ids:
            raise ExportError(
                f"{sample.sentence_id}: word {word!r} (index {w}) has no subwords"
            )
    return tuple(word_ids)


def load_model(cfg: ExportConfig):
    import torch
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(cfg.model, use_fast=True)
    model = AutoModel.from_pretrained(cfg.model)
    model.eval()
    model.to(cfg.device)
    n_layers = model.config.num_hidden_layers
    # hidden_states has n_layers + 1 entries (embeddings first)
    if not -(n_layers + 1) <= cfg.layer <= n_layers:
        raise ExportError(
            f"layer {cfg.layer} outside model depth ({n_layers} layers)"
        )
    return tokenizer, model


def iter_embedding_records(samples: list[DatasetSample], cfg: ExportConfig, tokenizer, model):
    import torch

    for start in range(0, len(samples), cfg.batch_size):
        batch = samples[start : start + cfg.batch_size]
        encoded = tokenizer(
            [s.sentence for s in batch],
            return_offsets_mapping=True,
            return_special_tokens_mask=True,
            padding=True,
            return_tensors="pt",
        )
        offsets = encoded.pop("offset_mapping").tolist()
        specials = encoded.pop("special_tokens_mask").tolist()
        lengths = encoded["attention_mask"].sum(dim=1).tolist()
        inputs = {k: v.to(cfg.device) for k, v in encoded.items()}
        with torch.no_grad():
            out = model(**inputs, output_hidden_states=True)
        hidden = out.hidden_states[cfg.layer]
        for i, sample in enumerate(batch):
            n = int(lengths[i])
            word_ids = align_word_ids(
                sample,
                [tuple(o) for o in offsets[i][:n]],
                [bool(s) for s in specials[i][:n]],
            )
            vectors = hidden[i, :n].cpu().numpy().astype(np.float32)
            yield sample.sentence_id, word_ids, vectors


def export_dataset(data_path, out_path, cfg: ExportConfig) -> int:
    """Run the model over every sentence and write the embedding file.
    Returns the number of records written."""
    samples = read_dataset_file(data_path)
    tokenizer, model = load_model(cfg)
    dim = int(model.config.hidden_size)
    records = iter_embedding_records(samples, cfg, tokenizer, model)
    write_embedding_file(out_path, records, dim=dim, provider_name=cfg.model)
    return len(samples)
