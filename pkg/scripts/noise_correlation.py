"""Correlate 1-MS-Jaccard-4 with FBD across increasing corpus corruption.

Generates corpora from a pool of template sentences, corrupts a fraction of
tokens per level, scores each level against a clean reference, and prints
the Pearson correlation of the two direction-normalized metrics. Features
come from a deterministic hash-seeded token-projection encoder, so no model
download is involved.
"""

import argparse
import hashlib
import random

import numpy as np

from genmetrics.corpus import Corpus
from genmetrics.feature_metrics import FeatureMatrix, fbd
from genmetrics.ngram_metrics import ms_jaccard
from genmetrics.report import normalize_direction, pearson


def stub_encode(sentences, dim=32):
    cache = {}

    def token_vector(tok):
        vec = cache.get(tok)
        if vec is None:
            seed = int.from_bytes(hashlib.sha256(tok.encode("utf-8")).digest()[:8], "little")
            vec = np.random.default_rng(seed).standard_normal(dim)
            cache[tok] = vec
        return vec

    return np.asarray([np.mean([token_vector(t) for t in s], axis=0) for s in sentences])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", type=int, default=20)
    parser.add_argument("--max-noise", type=float, default=0.9)
    parser.add_argument("--sentences", type=int, default=300)
    parser.add_argument("--pool-size", type=int, default=120)
    parser.add_argument("--seed", type=int, default=909)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    vocab = [f"w{i}" for i in range(60)]
    noise_vocab = [f"noise{i}" for i in range(200)]
    pool = [
        tuple(rng.choice(vocab) for _ in range(rng.randint(8, 14)))
        for _ in range(args.pool_size)
    ]

    def sample():
        return [rng.choice(pool) for _ in range(args.sentences)]

    reference = Corpus(sentences=tuple(sample()))
    base = sample()
    ref_features = FeatureMatrix(stub_encode(reference.sentences))

    print(f"{'noise':>6} {'ms_jaccard4':>12} {'fbd':>8}")
    ones_minus_msj = []
    fbd_values = []
    for k in range(args.levels):
        level = args.max_noise * k / (args.levels - 1)
        corrupted = Corpus(
            sentences=tuple(
                tuple(rng.choice(noise_vocab) if rng.random() < level else tok for tok in s)
                for s in base
            )
        )
        msj = ms_jaccard(corrupted, reference, 4).aggregate
        distance = fbd(FeatureMatrix(stub_encode(corrupted.sentences)), ref_features)
        ones_minus_msj.append(normalize_direction("ms_jaccard4", msj))
        fbd_values.append(distance)
        print(f"{level:>6.3f} {msj:>12.4f} {distance:>8.4f}")

    print(f"\npearson(1 - ms_jaccard4, fbd) = {pearson(ones_minus_msj, fbd_values):.4f}")


if __name__ == "__main__":
    main()
