"""Corpus loading, validation, preprocessing, and n-gram profiles."""

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genmetrics.corpus import (
    Corpus,
    NGramProfile,
    PreprocessConfig,
    build_profile,
    load_corpus,
    preprocess,
    write_corpus,
)
from genmetrics.util import DataError, EmptyCorpusError

from conftest import make_corpus, random_sentences


def test_load_corpus_splits_whitespace(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("a b\n\na  c\n", encoding="utf-8")
    corpus = load_corpus(str(path))
    assert corpus.sentences == (("a", "b"), ("a", "c"))
    assert corpus.vocab == Counter({"a": 2, "b": 1, "c": 1})
    assert corpus.source_path == str(path)


def test_load_corpus_single_line(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("x\n", encoding="utf-8")
    assert load_corpus(str(path)).sentences == (("x",),)


def test_load_corpus_crlf_and_tabs(tmp_path):
    path = tmp_path / "c.txt"
    path.write_bytes(b"a\tb\r\nc d\r\n")
    assert load_corpus(str(path)).sentences == (("a", "b"), ("c", "d"))


def test_load_corpus_unicode_whitespace(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("a b c\n", encoding="utf-8")
    assert load_corpus(str(path)).sentences == (("a", "b", "c"),)


def test_load_corpus_blank_only_is_empty(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("\n  \n\t\n", encoding="utf-8")
    with pytest.raises(EmptyCorpusError):
        load_corpus(str(path))


def test_load_corpus_missing_file(tmp_path):
    with pytest.raises(DataError, match="nope.txt"):
        load_corpus(str(tmp_path / "nope.txt"))


def test_load_corpus_rejects_non_utf8(tmp_path):
    path = tmp_path / "c.txt"
    path.write_bytes(b"ok line\n\xff\xfe broken\n")
    with pytest.raises(DataError, match="UTF-8"):
        load_corpus(str(path))


def test_write_then_load_round_trip(tmp_path):
    corpus = make_corpus([("a", "b"), ("c",), ("d", "e", "f")])
    path = tmp_path / "out.txt"
    write_corpus(corpus, str(path))
    assert load_corpus(str(path)).sentences == corpus.sentences


def test_corpus_rejects_empty_sentence():
    with pytest.raises(DataError):
        Corpus(sentences=(("a",), ()))


def test_corpus_rejects_no_sentences():
    with pytest.raises(EmptyCorpusError):
        Corpus(sentences=())


def test_vocab_counts_exact():
    corpus = make_corpus([("a", "b", "a"), ("b",)])
    assert corpus.vocab == Counter({"a": 2, "b": 2})


@given(
    st.lists(
        st.lists(st.sampled_from("abcde"), min_size=1, max_size=8),
        min_size=1,
        max_size=15,
    )
)
def test_tokenization_idempotent(sentences):
    corpus = make_corpus(sentences)
    rejoined = [tuple(" ".join(s).split()) for s in corpus.sentences]
    assert tuple(rejoined) == corpus.sentences


class TestPreprocess:
    def test_length_filter_drops_short(self):
        corpus = make_corpus([("a", "b", "c", "d"), ("a",) * 6])
        cfg = PreprocessConfig(min_len=5, max_len=25)
        assert preprocess(corpus, cfg).sentences == (("a",) * 6,)

    def test_rare_word_becomes_unk(self):
        # one token at frequency 49 under a threshold of 50
        sentences = [("rare", "common") for _ in range(49)]
        sentences += [("common", "common") for _ in range(10)]
        corpus = make_corpus(sentences)
        cfg = PreprocessConfig(min_word_freq=50, max_unks=4)
        out = preprocess(corpus, cfg)
        assert out.sentences[0] == ("UNK", "common")
        assert "rare" not in out.vocab

    def test_boundary_frequency_kept(self):
        sentences = [("word", "pad") for _ in range(50)]
        corpus = make_corpus(sentences)
        out = preprocess(corpus, PreprocessConfig(min_word_freq=50, max_unks=4))
        assert out.sentences[0] == ("word", "pad")

    def test_identity_config_is_noop(self):
        corpus = make_corpus([("a", "b"), ("c",)])
        cfg = PreprocessConfig(min_len=1, max_len=10**9, min_word_freq=0)
        assert preprocess(corpus, cfg).sentences == corpus.sentences

    def test_too_many_unks_dropped(self):
        sentences = [("r1", "r2", "r3", "keep"), ("keep", "keep")]
        corpus = make_corpus(sentences)
        cfg = PreprocessConfig(min_word_freq=2, max_unks=2)
        out = preprocess(corpus, cfg)
        # first sentence gets 3 unks > 2 allowed; second survives untouched
        assert out.sentences == (("keep", "keep"),)

    def test_unk_limit_inactive_without_replacement(self):
        # max_unks only applies when replacement ran; literal UNKs pass through
        corpus = make_corpus([("UNK",) * 9])
        out = preprocess(corpus, PreprocessConfig(min_word_freq=0, max_unks=0))
        assert out.sentences == (("UNK",) * 9,)

    def test_all_dropped_raises(self):
        corpus = make_corpus([("a", "b")])
        with pytest.raises(EmptyCorpusError):
            preprocess(corpus, PreprocessConfig(min_len=5, max_len=10))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PreprocessConfig(min_len=0)
        with pytest.raises(ValueError):
            PreprocessConfig(min_len=5, max_len=4)
        with pytest.raises(ValueError):
            PreprocessConfig(min_word_freq=-1)
        with pytest.raises(ValueError):
            PreprocessConfig(max_unks=-1)
        with pytest.raises(ValueError):
            PreprocessConfig(unk_token="")

    @given(
        st.lists(
            st.lists(st.sampled_from("abcdef"), min_size=1, max_size=10),
            min_size=1,
            max_size=20,
        ),
        st.integers(min_value=1, max_value=5),
        st.integers(min_value=5, max_value=12),
    )
    def test_never_grows_and_respects_bounds(self, sentences, min_len, max_len):
        corpus = make_corpus(sentences)
        cfg = PreprocessConfig(min_len=min_len, max_len=max_len, min_word_freq=2)
        try:
            out = preprocess(corpus, cfg)
        except EmptyCorpusError:
            return
        assert len(out) <= len(corpus)
        assert all(min_len <= len(s) <= max_len for s in out.sentences)


class TestBuildProfile:
    def test_unigram_counts(self):
        profile = build_profile(make_corpus([("a", "b"), ("a", "c")]), 1)
        assert profile.counts == {("a",): 2, ("b",): 1, ("c",): 1}
        assert profile.num_sentences == 2

    def test_bigram_counts(self):
        profile = build_profile(make_corpus([("a", "b"), ("a", "c")]), 2)
        assert profile.counts == {("a", "b"): 1, ("a", "c"): 1}

    def test_short_sentence_contributes_nothing(self):
        profile = build_profile(make_corpus([("a",), ("b", "c")]), 3)
        assert profile.counts == {}
        assert profile.total_grams() == 0

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            build_profile(make_corpus([("a",)]), 0)

    def test_normalized_counts(self):
        profile = build_profile(make_corpus([("a", "b"), ("a", "c")]), 1)
        assert profile.normalized(("a",)) == 1.0
        assert profile.normalized(("b",)) == 0.5
        assert profile.normalized(("zzz",)) == 0.0

    def test_total_mass_random(self):
        rng = random.Random(11)
        for _ in range(50):
            sentences = random_sentences(rng, max_sentences=12, vocab_size=6)
            corpus = make_corpus(sentences)
            for n in range(1, 5):
                profile = build_profile(corpus, n)
                expected = sum(max(len(s) - n + 1, 0) for s in sentences)
                assert profile.total_grams() == expected

    def test_duplication_preserves_normalization(self):
        sentences = [("a", "b", "a"), ("c", "b")]
        single = build_profile(make_corpus(sentences), 1)
        doubled = build_profile(make_corpus(sentences * 2), 1)
        assert doubled.num_sentences == 2 * single.num_sentences
        for gram, count in single.counts.items():
            assert doubled.counts[gram] == 2 * count
            assert doubled.normalized(gram) == single.normalized(gram)

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            NGramProfile(n=0, counts={}, num_sentences=1)
        with pytest.raises(ValueError):
            NGramProfile(n=1, counts={}, num_sentences=0)
        with pytest.raises(ValueError):
            NGramProfile(n=1, counts={("a",): 0}, num_sentences=1)
