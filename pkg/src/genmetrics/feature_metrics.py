"""Frechet-style distance between Gaussian fits of feature embeddings.

Features arrive as float32 matrices in a small binary container (one magic
tag, two u64 dims, then row-major f32 data, all little-endian). The distance
between two fitted Gaussians is

    sqrt( ||m1 - m2||^2 + Tr(C1 + C2 - 2 (C1 C2)^{1/2}) )

with the matrix square root taken through symmetric eigendecompositions so
the computation stays real, deterministic, and tolerant of the slightly
indefinite covariances that finite samples produce.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .util import DataError

MAGIC = b"FBDFEAT1"
_HEADER = struct.Struct("<8sQQ")


@dataclass(frozen=True)
class FeatureMatrix:
    """Row-per-sample feature array, float64 internally, shape (rows, dim)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"features must be 2-d, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"features must be non-empty, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("features contain NaN or infinity")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class GaussianStats:
    """Mean vector and covariance matrix of a feature sample."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        if mean.ndim != 1:
            raise ValueError(f"mean must be 1-d, got shape {mean.shape}")
        if cov.shape != (mean.shape[0], mean.shape[0]):
            raise ValueError(f"cov shape {cov.shape} does not match mean dim {mean.shape[0]}")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def fit_gaussian(features: FeatureMatrix) -> GaussianStats:
    """Sample mean and unbiased (rows - 1) covariance of a feature matrix."""
    if features.rows < 2:
        raise ValueError(f"Gaussian fit needs at least 2 rows, got {features.rows}")
    x = features.data
    mean = x.mean(axis=0)
    cov = np.atleast_2d(np.cov(x, rowvar=False, ddof=1))
    cov = (cov + cov.T) / 2.0
    return GaussianStats(mean=mean, cov=cov)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    """Symmetric square root via eigendecomposition, negative eigenvalues clamped."""
    sym = (mat + mat.T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def trace_sqrt_product(
    cov1: np.ndarray, cov2: np.ndarray, jitter_epsilon: float | None = None
) -> float:
    """Tr((C1 C2)^{1/2}) computed as the eigenvalue sums of sqrt(C1) C2 sqrt(C1).

    The sandwich form is symmetric, so its eigenvalues are real. Eigenvalues
    below -1e-6 times the largest signal numerical trouble: the computation
    is retried once with a diagonal jitter of 1e-6 times the mean diagonal
    (or ``jitter_epsilon``) added to both covariances. Small negative
    eigenvalues are clamped to zero before summing square roots.
    """
    cov1 = np.asarray(cov1, dtype=np.float64)
    cov2 = np.asarray(cov2, dtype=np.float64)
    if cov1.shape != cov2.shape or cov1.ndim != 2 or cov1.shape[0] != cov1.shape[1]:
        raise ValueError(f"covariances must be square and same shape: {cov1.shape} vs {cov2.shape}")

    def attempt(c1: np.ndarray, c2: np.ndarray) -> tuple[float, bool]:
        s1 = _psd_sqrt(c1)
        inner = s1 @ c2 @ s1
        vals = np.linalg.eigvalsh((inner + inner.T) / 2.0)
        top = vals[-1] if vals[-1] > 0 else 0.0
        ok = vals[0] >= -1e-6 * top if top > 0 else vals[0] >= -1e-6
        return float(np.sqrt(np.clip(vals, 0.0, None)).sum()), ok

    value, ok = attempt(cov1, cov2)
    if ok:
        return value
    if jitter_epsilon is None:
        diag_scale = (np.trace(cov1) / cov1.shape[0] + np.trace(cov2) / cov2.shape[0]) / 2.0
        jitter_epsilon = 1e-6 * diag_scale
    eye = np.eye(cov1.shape[0])
    value, _ = attempt(cov1 + jitter_epsilon * eye, cov2 + jitter_epsilon * eye)
    return value


def frechet_distance(
    g1: GaussianStats, g2: GaussianStats, jitter_epsilon: float | None = None
) -> float:
    """Wasserstein-2 distance between two Gaussians (square root included).

    Identical inputs give exactly 0; the squared form is clamped at zero
    before the root so rounding can never produce NaN.
    """
    if g1.dim != g2.dim:
        raise ValueError(f"dimension mismatch: {g1.dim} vs {g2.dim}")
    diff = g1.mean - g2.mean
    squared = float(diff @ diff) + float(
        np.trace(g1.cov)
        + np.trace(g2.cov)
        - 2.0 * trace_sqrt_product(g1.cov, g2.cov, jitter_epsilon=jitter_epsilon)
    )
    return math.sqrt(squared) if squared > 0.0 else 0.0


def fbd(
    features1: FeatureMatrix, features2: FeatureMatrix, jitter_epsilon: float | None = None
) -> float:
    """Frechet distance between the Gaussian fits of two feature matrices."""
    if features1.dim != features2.dim:
        raise ValueError(f"feature dimension mismatch: {features1.dim} vs {features2.dim}")
    return frechet_distance(
        fit_gaussian(features1), fit_gaussian(features2), jitter_epsilon=jitter_epsilon
    )


def write_features(features: FeatureMatrix, path: str) -> None:
    """Serialize a feature matrix: magic, u64 rows, u64 dim, f32 row-major data."""
    data = features.data.astype("<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, features.rows, features.dim))
        fh.write(data.tobytes(order="C"))


def read_features(path: str) -> FeatureMatrix:
    """Load a feature matrix, rejecting wrong magic, truncation, and non-finite data."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read feature file: {exc}", path=path) from exc
    if len(blob) < _HEADER.size:
        raise DataError(f"file too short for header ({len(blob)} bytes)", path=path)
    magic, rows, dim = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise DataError(f"bad magic {magic!r}, expected {MAGIC!r}", path=path)
    if rows < 1 or dim < 1:
        raise DataError(f"invalid dimensions {rows}x{dim}", path=path)
    expected = _HEADER.size + rows * dim * 4
    if len(blob) != expected:
        raise DataError(
            f"payload length mismatch: expected {expected} bytes for {rows}x{dim}, got {len(blob)}",
            path=path,
        )
    arr = np.frombuffer(blob, dtype="<f4", offset=_HEADER.size).reshape(rows, dim)
    if not np.isfinite(arr).all():
        raise DataError("features contain NaN or infinity", path=path)
    return FeatureMatrix(data=arr)
