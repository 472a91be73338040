"""N-gram multiset similarity and BLEU-style metrics over tokenized corpora.

All scores live in [0, 1]. Reference statistics are precomputed once into an
immutable index so per-sentence scoring cost does not grow with reference
size, and corpus-level means use a fixed reduction order so results never
depend on worker count.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, Gram, NGramProfile, Sentence, build_profile
from .util import pairwise_sum, parallel_map


@dataclass(frozen=True)
class MsJaccardResult:
    """Per-order multiset-Jaccard scores and their geometric mean."""

    per_n_scores: tuple[float, ...]
    aggregate: float
    max_n: int


@dataclass(frozen=True)
class BleuConfig:
    """BLEU parameters: gram order, precision weights, optional smoothing.

    ``weights`` defaults to uniform 1/max_n. ``smoothing_epsilon`` of None
    means no smoothing (any zero precision zeroes the score); a float value
    replaces zero precisions with that value before the log combination.
    """

    max_n: int = 4
    weights: tuple[float, ...] | None = None
    smoothing_epsilon: float | None = None

    def __post_init__(self):
        if self.max_n < 1:
            raise ValueError(f"max_n must be >= 1, got {self.max_n}")
        if self.weights is None:
            object.__setattr__(self, "weights", tuple([1.0 / self.max_n] * self.max_n))
        else:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != self.max_n:
            raise ValueError(f"need {self.max_n} weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(self.weights) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {math.fsum(self.weights)!r}")
        if self.smoothing_epsilon is not None and not 0.0 < self.smoothing_epsilon:
            raise ValueError(f"smoothing epsilon must be positive, got {self.smoothing_epsilon}")


def ms_jaccard_score_n(a: NGramProfile, b: NGramProfile) -> float:
    """Multiset-Jaccard similarity of two same-order n-gram profiles.

    sum over the gram union of min(Ca, Cb) divided by the matching sum of
    max(Ca, Cb), where C is the per-sentence normalized count. Two empty
    profiles are identical, hence 1.0; one empty profile yields 0.0.
    """
    if a.n != b.n:
        raise ValueError(f"mismatched gram order: {a.n} vs {b.n}")
    union = set(a.counts) | set(b.counts)
    if not union:
        return 1.0
    na, nb = a.num_sentences, b.num_sentences
    mins = []
    maxs = []
    # canonical gram ordering makes the summation exactly symmetric in (a, b)
    for gram in sorted(union):
        ca = a.counts.get(gram, 0) / na
        cb = b.counts.get(gram, 0) / nb
        if ca <= cb:
            mins.append(ca)
            maxs.append(cb)
        else:
            mins.append(cb)
            maxs.append(ca)
    return math.fsum(mins) / math.fsum(maxs)


def ms_jaccard(
    generated: Corpus, reference: Corpus, max_n: int, threads: int | None = None
) -> MsJaccardResult:
    """Per-order multiset-Jaccard scores for n = 1..max_n and their geometric mean.

    Symmetric in its two corpus arguments. The geometric mean of any zero
    score is exactly 0 (no smoothing), matching the limit.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")

    def score(n: int) -> float:
        return ms_jaccard_score_n(build_profile(generated, n), build_profile(reference, n))

    per_n = parallel_map(score, range(1, max_n + 1), threads=threads)
    if any(s == 0.0 for s in per_n):
        aggregate = 0.0
    else:
        aggregate = math.exp(math.fsum(math.log(s) for s in per_n) / max_n)
    return MsJaccardResult(per_n_scores=tuple(per_n), aggregate=aggregate, max_n=max_n)


@dataclass(frozen=True)
class ReferenceIndex:
    """Clipping caps and reference lengths, precomputed once per reference set.

    ``max_counts[n-1]`` maps an n-gram to the largest count of that gram in
    any single reference sentence (the bound used by modified precision), so
    scoring a candidate costs one lookup per candidate gram regardless of
    reference size. Immutable and shareable across threads.
    """

    max_n: int
    max_counts: tuple[dict[Gram, int], ...]
    lengths: tuple[int, ...]  # sorted ascending

    @classmethod
    def build(cls, reference: Corpus, max_n: int) -> "ReferenceIndex":
        if max_n < 1:
            raise ValueError(f"max_n must be >= 1, got {max_n}")
        maxes: tuple[dict[Gram, int], ...] = tuple({} for _ in range(max_n))
        for sent in reference.sentences:
            for n in range(1, max_n + 1):
                if len(sent) - n + 1 <= 0:
                    break
                d = maxes[n - 1]
                for gram, cnt in _gram_counts(sent, n).items():
                    if cnt > d.get(gram, 0):
                        d[gram] = cnt
        lengths = tuple(sorted(len(s) for s in reference.sentences))
        return cls(max_n=max_n, max_counts=maxes, lengths=lengths)

    def closest_length(self, c: int) -> int:
        """Reference length closest to ``c``; ties resolve to the smaller length."""
        return _closest(self.lengths, c)


def _gram_counts(sent: Sentence, n: int) -> Counter:
    return Counter(sent[i : i + n] for i in range(len(sent) - n + 1))


def _closest(sorted_lengths: tuple[int, ...], c: int) -> int:
    pos = bisect_left(sorted_lengths, c)
    cands = []
    if pos < len(sorted_lengths):
        cands.append(sorted_lengths[pos])
    if pos > 0:
        cands.append(sorted_lengths[pos - 1])
    return min(cands, key=lambda length: (abs(length - c), length))


def _combine(precisions: list[float], c: int, r: int, cfg: BleuConfig) -> float:
    """Weighted log-combination of precisions times the brevity penalty."""
    logs = []
    for w, p in zip(cfg.weights, precisions):
        if p == 0.0:
            if cfg.smoothing_epsilon is None:
                return 0.0
            p = cfg.smoothing_epsilon
        logs.append(w * math.log(p))
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return bp * math.exp(math.fsum(logs))


def bleu_sentence(candidate: Sentence, index: ReferenceIndex, cfg: BleuConfig) -> float:
    """Sentence-level BLEU of ``candidate`` against an indexed reference set.

    Modified n-gram precision clips each candidate gram count at the largest
    count of that gram in any single reference sentence. Orders with no
    candidate grams (candidate shorter than n) count as zero precision. The
    brevity penalty is 1 when the candidate is longer than the closest
    reference length r, else exp(1 - r/c).
    """
    cand = tuple(candidate)
    if not cand:
        raise ValueError("empty candidate")
    if cfg.max_n != index.max_n:
        raise ValueError(f"config max_n {cfg.max_n} does not match index max_n {index.max_n}")
    c = len(cand)
    precisions = []
    for n in range(1, cfg.max_n + 1):
        denom = c - n + 1
        if denom <= 0:
            precisions.append(0.0)
            continue
        caps = index.max_counts[n - 1]
        clipped = 0
        for gram, cnt in _gram_counts(cand, n).items():
            cap = caps.get(gram, 0)
            clipped += cnt if cnt < cap else cap
        precisions.append(clipped / denom)
    return _combine(precisions, c, index.closest_length(c), cfg)


def bleu_corpus(
    generated: Corpus, reference: Corpus, cfg: BleuConfig, threads: int | None = None
) -> float:
    """Mean sentence BLEU of ``generated`` against the whole reference corpus.

    The reference index is built once; per-sentence scores are averaged by
    pairwise summation in corpus order, so the result is independent of the
    number of worker threads.
    """
    index = ReferenceIndex.build(reference, cfg.max_n)
    scores = parallel_map(
        lambda sent: bleu_sentence(sent, index, cfg), generated.sentences, threads=threads
    )
    return pairwise_sum(scores) / len(scores)


@dataclass(frozen=True)
class _LeaveOneOutIndex:
    """Top-two per-sentence gram counts, enabling exact leave-one-out lookups.

    For each gram we keep (top count, how many sentences attain it, second
    distinct count). Excluding the candidate's own copy then resolves without
    mutating anything: if the candidate holds the top count alone, the cap
    falls to the second count, otherwise the top count stands. This matches a
    full index rebuild over "corpus minus this sentence" exactly while the
    index stays immutable and shareable.
    """

    max_n: int
    stats: tuple[dict[Gram, tuple[int, int, int]], ...]
    lengths: tuple[int, ...]  # sorted ascending
    length_counts: dict[int, int] = field(repr=False, default_factory=dict)

    @classmethod
    def build(cls, corpus: Corpus, max_n: int) -> "_LeaveOneOutIndex":
        stats: tuple[dict[Gram, tuple[int, int, int]], ...] = tuple({} for _ in range(max_n))
        for sent in corpus.sentences:
            for n in range(1, max_n + 1):
                if len(sent) - n + 1 <= 0:
                    break
                d = stats[n - 1]
                for gram, cnt in _gram_counts(sent, n).items():
                    entry = d.get(gram)
                    if entry is None:
                        d[gram] = (cnt, 1, 0)
                        continue
                    top, mult, second = entry
                    if cnt > top:
                        d[gram] = (cnt, 1, top)
                    elif cnt == top:
                        d[gram] = (top, mult + 1, second)
                    elif cnt > second:
                        d[gram] = (top, mult, cnt)
        lengths = sorted(len(s) for s in corpus.sentences)
        counts = Counter(lengths)
        return cls(
            max_n=max_n, stats=stats, lengths=tuple(lengths), length_counts=dict(counts)
        )

    def closest_length_excluding_self(self, c: int) -> int:
        """Closest reference length with one copy of the candidate's own length removed."""
        if self.length_counts.get(c, 0) >= 2:
            return c
        pos = bisect_left(self.lengths, c)  # lengths[pos] is the candidate's own entry
        cands = []
        if pos + 1 < len(self.lengths):
            cands.append(self.lengths[pos + 1])
        if pos > 0:
            cands.append(self.lengths[pos - 1])
        return min(cands, key=lambda length: (abs(length - c), length))


def _self_bleu_sentence(cand: Sentence, index: _LeaveOneOutIndex, cfg: BleuConfig) -> float:
    c = len(cand)
    precisions = []
    for n in range(1, cfg.max_n + 1):
        denom = c - n + 1
        if denom <= 0:
            precisions.append(0.0)
            continue
        stats = index.stats[n - 1]
        clipped = 0
        for gram, cnt in _gram_counts(cand, n).items():
            top, mult, second = stats[gram]
            cap = top if (cnt < top or mult > 1) else second
            clipped += cnt if cnt < cap else cap
        precisions.append(clipped / denom)
    return _combine(precisions, c, index.closest_length_excluding_self(c), cfg)


def self_bleu(generated: Corpus, cfg: BleuConfig, threads: int | None = None) -> float:
    """Mean BLEU of every sentence against all the others, leave-one-out exact.

    The candidate's own copy is excluded from its reference set; duplicate
    sentences elsewhere in the corpus remain legitimate references. High
    values mean low diversity.
    """
    if len(generated.sentences) < 2:
        raise ValueError(f"self-BLEU needs at least 2 sentences, got {len(generated.sentences)}")
    index = _LeaveOneOutIndex.build(generated, cfg.max_n)
    scores = parallel_map(
        lambda sent: _self_bleu_sentence(sent, index, cfg), generated.sentences, threads=threads
    )
    return pairwise_sum(scores) / len(scores)
