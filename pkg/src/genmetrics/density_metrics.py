"""Metrics over explicit log-densities from a probabilistic oracle.

Input is a table of records scored under two distributions: an oracle P and
a model Q, with each record tagged by which distribution it was sampled
from. All math stays in the log domain; raw probabilities would underflow
for realistic sequence lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .util import DataError, pairwise_sum

_REQUIRED_COLUMNS = ("sample_id", "origin", "logp", "logq")


@dataclass(frozen=True)
class LogProbRecord:
    """One sample with its log-density under the oracle (logp) and model (logq)."""

    sample_id: str
    origin: str  # "P" (oracle sample) or "Q" (model sample)
    logp: float
    logq: float
    length: int | None = None

    def __post_init__(self):
        if self.origin not in ("P", "Q"):
            raise ValueError(f"origin must be 'P' or 'Q', got {self.origin!r}")
        if not math.isfinite(self.logp):
            raise ValueError(f"logp must be finite, got {self.logp!r}")
        if not math.isfinite(self.logq):
            raise ValueError(f"logq must be finite, got {self.logq!r}")
        if self.length is not None and self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")


@dataclass(frozen=True)
class LogProbTable:
    """Immutable collection of scored samples from both origins."""

    records: tuple[LogProbRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    @property
    def num_p(self) -> int:
        return sum(1 for r in self.records if r.origin == "P")

    @property
    def num_q(self) -> int:
        return sum(1 for r in self.records if r.origin == "Q")

    def from_origin(self, origin: str) -> tuple[LogProbRecord, ...]:
        return tuple(r for r in self.records if r.origin == origin)


def load_logprobs(path: str) -> LogProbTable:
    """Parse a log-prob TSV: header sample_id/origin/logp/logq with optional length.

    Rejects NaN and infinite densities (a zero-density record would silently
    bias the divergence estimate) and reports 1-based line numbers.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except UnicodeDecodeError as exc:
        raise DataError(f"not valid UTF-8: {exc}", path=path) from exc
    except OSError as exc:
        raise DataError(f"cannot read log-prob file: {exc}", path=path) from exc
    if not lines:
        raise DataError("empty log-prob file", path=path)

    header = tuple(lines[0].split("\t"))
    has_length = header == _REQUIRED_COLUMNS + ("length",)
    if not has_length and header != _REQUIRED_COLUMNS:
        raise DataError(
            f"bad header {lines[0]!r}, expected sample_id/origin/logp/logq with optional length",
            path=path,
            line=1,
        )
    ncols = len(header)

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != ncols:
            raise DataError(f"expected {ncols} columns, got {len(cols)}", path=path, line=lineno)
        sample_id, origin = cols[0], cols[1]
        if origin not in ("P", "Q"):
            raise DataError(f"origin must be P or Q, got {origin!r}", path=path, line=lineno)
        try:
            logp = float(cols[2])
            logq = float(cols[3])
        except ValueError as exc:
            raise DataError(f"bad float: {exc}", path=path, line=lineno) from exc
        if not math.isfinite(logp):
            raise DataError(f"logp is not finite: {cols[2]}", path=path, line=lineno)
        if not math.isfinite(logq):
            raise DataError(f"logq is not finite: {cols[3]}", path=path, line=lineno)
        length = None
        if has_length:
            try:
                length = int(cols[4])
            except ValueError as exc:
                raise DataError(f"bad length: {exc}", path=path, line=lineno) from exc
            if length < 1:
                raise DataError(f"length must be >= 1, got {length}", path=path, line=lineno)
        records.append(
            LogProbRecord(sample_id=sample_id, origin=origin, logp=logp, logq=logq, length=length)
        )
    if not records:
        raise DataError("no records after header", path=path)
    return LogProbTable(records=tuple(records))


def _logmeanexp(values: list[float]) -> float:
    """log((1/n) sum exp(v)) with max-shift stabilization; exact 0 for all-zero input."""
    m = max(values)
    total = pairwise_sum([math.exp(v - m) for v in values])
    return m + math.log(total) - math.log(len(values))


def bhattacharyya_estimate(table: LogProbTable) -> float:
    """Monte-Carlo Bhattacharyya distance between oracle P and model Q.

    -1/2 [ ln mean_P exp((logq-logp)/2) + ln mean_Q exp((logp-logq)/2) ].
    Lower is better; exactly 0 when logp == logq on every record. Can dip
    slightly below 0 for finite samples from nearly identical distributions.
    """
    p_records = table.from_origin("P")
    q_records = table.from_origin("Q")
    if not p_records:
        raise DataError("Bhattacharyya estimate needs at least one origin-P record")
    if not q_records:
        raise DataError("Bhattacharyya estimate needs at least one origin-Q record")
    term_p = _logmeanexp([(r.logq - r.logp) / 2.0 for r in p_records])
    term_q = _logmeanexp([(r.logp - r.logq) / 2.0 for r in q_records])
    return -0.5 * (term_p + term_q) + 0.0  # + 0.0 turns -0.0 into 0.0


def _mean_negated(records: tuple[LogProbRecord, ...], attr: str, per_token: bool) -> float:
    if per_token and any(r.length is None for r in records):
        raise DataError("per-token mode requires a length column on every record")
    values = [
        -getattr(r, attr) / (r.length if per_token else 1) for r in records
    ]
    return pairwise_sum(values) / len(values)


def nll(table: LogProbTable, per_token: bool = False) -> float:
    """Mean model negative log-likelihood over the oracle's (real-data) samples."""
    records = table.from_origin("P")
    if not records:
        raise DataError("nll needs at least one origin-P record")
    return _mean_negated(records, "logq", per_token)


def oracle_nll(table: LogProbTable, per_token: bool = False) -> float:
    """Mean oracle negative log-likelihood over the model's samples.

    Lower means the model's output sits in high-density oracle regions; a
    mode-collapsed model can score arbitrarily well, so this measures quality
    only.
    """
    records = table.from_origin("Q")
    if not records:
        raise DataError("oracle_nll needs at least one origin-Q record")
    return _mean_negated(records, "logp", per_token)


def entropy_estimate(table: LogProbTable, per_token: bool = False) -> float:
    """Monte-Carlo entropy of the model: mean of -logq over its own samples."""
    records = table.from_origin("Q")
    if not records:
        raise DataError("entropy estimate needs at least one origin-Q record")
    return _mean_negated(records, "logq", per_token)
