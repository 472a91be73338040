"""Time the indexed Self-BLEU against a naive O(n^2) pairwise scan.

The naive baseline still precomputes per-sentence gram counters once (a fair
baseline); its quadratic cost is the per-candidate max over every other
sentence. Run with --naive to include it (minutes at the default size).
"""

import argparse
import math
import random
import time
from collections import Counter

from genmetrics.corpus import Corpus
from genmetrics.ngram_metrics import BleuConfig, self_bleu


def naive_self_bleu(sentences, max_n):
    counters = [
        [Counter(tuple(s[i : i + n]) for i in range(len(s) - n + 1)) for n in range(1, max_n + 1)]
        for s in sentences
    ]
    lens = [len(s) for s in sentences]
    total = 0.0
    for i, cand in enumerate(sentences):
        c = len(cand)
        log_terms = []
        score = None
        for n in range(1, max_n + 1):
            denom = c - n + 1
            if denom <= 0:
                score = 0.0
                break
            clipped = 0
            for g, cnt in counters[i][n - 1].items():
                cap = 0
                for j, other in enumerate(counters):
                    if j != i:
                        k = other[n - 1].get(g, 0)
                        if k > cap:
                            cap = k
                clipped += min(cnt, cap)
            p = clipped / denom
            if p == 0.0:
                score = 0.0
                break
            log_terms.append(math.log(p) / max_n)
        if score is None:
            r = min(
                (length for j, length in enumerate(lens) if j != i),
                key=lambda length: (abs(length - c), length),
            )
            bp = 1.0 if c > r else math.exp(1.0 - r / c)
            score = bp * math.exp(sum(log_terms))
        total += score
    return total / len(sentences)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=5000)
    parser.add_argument("--vocab-size", type=int, default=5000)
    parser.add_argument("--min-len", type=int, default=20)
    parser.add_argument("--max-len", type=int, default=40)
    parser.add_argument("--max-n", type=int, default=4)
    parser.add_argument("--seed", type=int, default=505)
    parser.add_argument("--naive", action="store_true", help="also run the quadratic baseline")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    vocab = [f"v{i}" for i in range(args.vocab_size)]
    sentences = tuple(
        tuple(rng.choice(vocab) for _ in range(rng.randint(args.min_len, args.max_len)))
        for _ in range(args.sentences)
    )
    corpus = Corpus(sentences=sentences)

    start = time.perf_counter()
    fast = self_bleu(corpus, BleuConfig(max_n=args.max_n))
    fast_seconds = time.perf_counter() - start
    print(f"indexed self_bleu{args.max_n} = {fast:.6f}  in {fast_seconds:.2f}s")

    if args.naive:
        start = time.perf_counter()
        naive = naive_self_bleu(sentences, args.max_n)
        naive_seconds = time.perf_counter() - start
        print(f"naive   self_bleu{args.max_n} = {naive:.6f}  in {naive_seconds:.2f}s")
        print(f"speedup: {naive_seconds / fast_seconds:.1f}x")


if __name__ == "__main__":
    main()
