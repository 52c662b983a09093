import json

import pytest

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "de", "docent", "ziet", "hond", "iemand", "eend", "kat", "student",
    "oefeningen", "stud", "##eren", "leren", "helpen", "eten", "te",
    "laten", "doen", "vraagt", "belooft", "zingen", "gaan", ".",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    torch = pytest.importorskip("torch")
    pytest.importorskip("transformers")
    from tokenizers import Tokenizer
    from tokenizers.models import WordPiece
    from tokenizers.normalizers import BertNormalizer
    from tokenizers.pre_tokenizers import BertPreTokenizer
    from tokenizers.processors import TemplateProcessing
    from transformers import BertConfig, BertModel, BertTokenizerFast

    backend = Tokenizer(WordPiece({t: i for i, t in enumerate(VOCAB)}, unk_token="[UNK]"))
    backend.normalizer = BertNormalizer(lowercase=True)
    backend.pre_tokenizer = BertPreTokenizer()
    backend.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", VOCAB.index("[CLS]")), ("[SEP]", VOCAB.index("[SEP]"))],
    )
    tokenizer = BertTokenizerFast(
        tokenizer_object=backend,
        unk_token="[UNK]", pad_token="[PAD]", cls_token="[CLS]",
        sep_token="[SEP]", mask_token="[MASK]",
    )
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(0)
    model = BertModel(config)
    out = tmp_path_factory.mktemp("tiny-bert")
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    return out


def offsets_for(words: list[str]) -> list[tuple[int, int]]:
    out, pos = [], 0
    for i, word in enumerate(words):
        if i:
            pos += 1
        out.append((pos, pos + len(word)))
        pos += len(word)
    return out


def make_dataset_file(path, word_lists: list[list[str]]):
    """Minimal annotated-samples file with just the fields the exporter reads."""
    lines = [
        json.dumps({"format": "annotated-samples", "format_version": 1,
                    "n_samples": len(word_lists)})
    ]
    for i, words in enumerate(word_lists):
        sentence = " ".join(words) + "."
        lines.append(
            json.dumps(
                {
                    "sentence_id": f"s{i:03d}",
                    "sentence": sentence,
                    "words": words,
                    "char_offsets": [list(o) for o in offsets_for(words)],
                }
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
