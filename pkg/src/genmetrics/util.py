"""Shared plumbing: data errors, deterministic reductions, thread mapping."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class DataError(Exception):
    """Malformed or unusable input data (bad file, bad record, bad value).

    Carries the offending path and 1-based line/record number when known so
    callers can emit actionable diagnostics.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class EmptyCorpusError(DataError):
    """A corpus ended up with zero sentences."""


def pairwise_sum(values: Sequence[float]) -> float:
    """Sum floats with a fixed binary-tree association order.

    The result depends only on the order of ``values``, never on how work was
    chunked across workers, which keeps corpus-level reductions identical for
    every thread count.
    """
    buf = list(values)
    if not buf:
        return 0.0
    while len(buf) > 1:
        nxt = [buf[i] + buf[i + 1] for i in range(0, len(buf) - 1, 2)]
        if len(buf) % 2:
            nxt.append(buf[-1])
        buf = nxt
    return buf[0]


def default_threads() -> int:
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Map ``fn`` over ``items`` preserving input order.

    ``fn`` must be pure; outputs are collected in input order, so together
    with order-canonical reductions results are thread-count independent.
    """
    seq = list(items)
    if threads is None:
        threads = default_threads()
    if threads <= 1 or len(seq) <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, seq))
