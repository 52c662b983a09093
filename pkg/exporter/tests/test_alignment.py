"""Subword-to-word alignment against dataset character offsets."""

import pytest

from embexport.export import align_word_ids
from embexport.formats import SENTINEL_WORD_ID, DatasetSample, ExportError

from conftest import offsets_for


def sample(words):
    sentence = " ".join(words) + "."
    return DatasetSample(
        sentence_id="s0",
        sentence=sentence,
        words=tuple(words),
        char_offsets=tuple(offsets_for(words)),
    )


class TestAlign:
    def test_whole_word_tokens(self):
        s = sample(["De", "hond", "ziet"])
        # [CLS] de hond ziet . [SEP]
        offsets = [(0, 0), (0, 2), (3, 7), (8, 12), (12, 13), (0, 0)]
        specials = [True, False, False, False, False, True]
        ids = align_word_ids(s, offsets, specials)
        assert ids == (SENTINEL_WORD_ID, 0, 1, 2, SENTINEL_WORD_ID, SENTINEL_WORD_ID)

    def test_multi_subword_word(self):
        s = sample(["de", "student"])
        offsets = [(0, 0), (0, 2), (3, 7), (7, 10), (10, 11), (0, 0)]
        specials = [True, False, False, False, False, True]
        ids = align_word_ids(s, offsets, specials)
        assert ids == (SENTINEL_WORD_ID, 0, 1, 1, SENTINEL_WORD_ID, SENTINEL_WORD_ID)

    def test_leading_space_in_offsets_is_tolerated(self):
        s = sample(["de", "kat"])
        offsets = [(0, 2), (2, 6)]  # second token covers " kat"
        ids = align_word_ids(s, offsets, [False, False])
        assert ids == (0, 1)

    def test_straddling_subword_is_an_error(self):
        s = sample(["de", "kat"])
        with pytest.raises(ExportError, match="straddles word 'de'"):
            align_word_ids(s, [(0, 4), (4, 6)], [False, False])

    def test_uncovered_word_is_an_error(self):
        s = sample(["de", "kat"])
        with pytest.raises(ExportError, match="word 'kat'.*no subwords"):
            align_word_ids(s, [(0, 2)], [False])

    def test_every_word_needs_real_subwords(self):
        s = sample(["de", "kat"])
        # the kat token exists but is flagged special: coverage fails
        with pytest.raises(ExportError, match="no subwords"):
            align_word_ids(s, [(0, 2), (3, 6)], [False, True])
