"""Corpus loading, preprocessing, and n-gram profile construction.

Corpus files are UTF-8 text with one sentence per line and tokens separated
by whitespace. Corpora are assumed to be pre-tokenized: splitting on runs of
unicode whitespace is the only tokenization applied, with no lowercasing and
no punctuation handling.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .util import DataError, EmptyCorpusError

Sentence = tuple[str, ...]
Gram = tuple[str, ...]


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of tokenized sentences.

    Immutable after construction and safe to share across threads. Iteration
    order is the source file's line order.
    """

    sentences: tuple[Sentence, ...]
    source_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(tuple(s) for s in self.sentences))
        if not self.sentences:
            raise EmptyCorpusError("corpus has no sentences", path=self.source_path)
        for i, sent in enumerate(self.sentences):
            if not sent:
                raise DataError(f"sentence {i + 1} has no tokens", path=self.source_path)

    @cached_property
    def vocab(self) -> Counter:
        """Exact token frequencies over all sentences."""
        return Counter(tok for sent in self.sentences for tok in sent)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


@dataclass(frozen=True)
class PreprocessConfig:
    """Filtering and rare-token replacement parameters.

    ``min_word_freq`` is the threshold below which tokens are replaced by
    ``unk_token`` (0 disables replacement and the unk-count filter).
    ``max_unks`` is the largest number of unk tokens a kept sentence may
    contain.
    """

    min_len: int = 1
    max_len: int = 1_000_000_000
    min_word_freq: int = 0
    max_unks: int = 4
    unk_token: str = "UNK"

    def __post_init__(self):
        if self.min_len < 1:
            raise ValueError(f"min_len must be >= 1, got {self.min_len}")
        if self.max_len < self.min_len:
            raise ValueError(f"max_len ({self.max_len}) must be >= min_len ({self.min_len})")
        if self.min_word_freq < 0:
            raise ValueError(f"min_word_freq must be >= 0, got {self.min_word_freq}")
        if self.max_unks < 0:
            raise ValueError(f"max_unks must be >= 0, got {self.max_unks}")
        if not self.unk_token:
            raise ValueError("unk_token must be nonempty")


@dataclass(frozen=True)
class NGramProfile:
    """Per-order multiset of n-gram frequencies for one sentence set.

    ``counts`` holds exact integer occurrence counts; the per-sentence
    normalized frequency of a gram is ``counts[g] / num_sentences`` and is
    only ever materialized in floating point at metric time, which keeps
    profiles exact and mergeable.
    """

    n: int
    counts: dict[Gram, int]
    num_sentences: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"gram order must be >= 1, got {self.n}")
        if self.num_sentences < 1:
            raise ValueError(f"num_sentences must be >= 1, got {self.num_sentences}")
        for g, c in self.counts.items():
            if c < 1:
                raise ValueError(f"stored count for {g!r} must be >= 1, got {c}")

    def normalized(self, gram: Gram) -> float:
        """Average per-sentence frequency of ``gram``."""
        return self.counts.get(gram, 0) / self.num_sentences

    def total_grams(self) -> int:
        return sum(self.counts.values())


def load_corpus(path: str | Path) -> Corpus:
    """Read a corpus file: one sentence per line, whitespace-separated tokens.

    Blank (whitespace-only) lines are skipped. LF and CRLF endings are both
    accepted. Raises DataError for unreadable or non-UTF-8 files and
    EmptyCorpusError when no nonblank line exists.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise DataError(f"not valid UTF-8 ({exc.reason} at byte {exc.start})", path=path) from exc
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror or exc}", path=path) from exc

    sentences = []
    for line in text.splitlines():
        tokens = tuple(line.split())
        if tokens:
            sentences.append(tokens)
    if not sentences:
        raise EmptyCorpusError("no nonblank lines", path=path)
    return Corpus(tuple(sentences), source_path=path)


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus in the corpus file format (tokens joined by spaces)."""
    path = str(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for sent in corpus.sentences:
                fh.write(" ".join(sent))
                fh.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write file: {exc.strerror or exc}", path=path) from exc


def preprocess(corpus: Corpus, cfg: PreprocessConfig) -> Corpus:
    """Replace rare tokens and drop out-of-spec sentences.

    Steps, in order:
      1. if ``min_word_freq > 0``, replace every token whose frequency in
         ``corpus`` is below the threshold with ``cfg.unk_token`` (frequencies
         come from the input corpus itself, not an external vocabulary);
      2. drop sentences whose token count is outside [min_len, max_len];
      3. drop sentences containing more than ``max_unks`` unk tokens (skipped
         when replacement is disabled).

    The unk count in step 3 includes pre-existing literal occurrences of
    ``unk_token``. Raises EmptyCorpusError when nothing survives.
    """
    if cfg.min_word_freq > 0:
        freq = corpus.vocab
        sentences = [
            tuple(tok if freq[tok] >= cfg.min_word_freq else cfg.unk_token for tok in sent)
            for sent in corpus.sentences
        ]
    else:
        sentences = list(corpus.sentences)

    kept = [s for s in sentences if cfg.min_len <= len(s) <= cfg.max_len]
    if cfg.min_word_freq > 0:
        kept = [s for s in kept if s.count(cfg.unk_token) <= cfg.max_unks]

    if not kept:
        raise EmptyCorpusError("preprocessing dropped every sentence", path=corpus.source_path)
    return Corpus(tuple(kept), source_path=corpus.source_path)


def build_profile(corpus: Corpus, n: int) -> NGramProfile:
    """Count all n-gram occurrences across the corpus.

    A sentence of length L contributes max(L - n + 1, 0) grams, so sentences
    shorter than ``n`` contribute nothing and the profile may be empty.
    """
    if n < 1:
        raise ValueError(f"gram order must be >= 1, got {n}")
    counts: Counter = Counter()
    for sent in corpus.sentences:
        for i in range(len(sent) - n + 1):
            counts[sent[i : i + n]] += 1
    return NGramProfile(n=n, counts=dict(counts), num_sentences=len(corpus.sentences))
