"""Metric reports, direction normalization, Pearson correlation, serialization.

Reports carry raw metric values plus each metric's native direction so they
stay readable; comparisons and correlations first map every metric to
lower-is-better through a prefix-matched rule table.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .util import DataError


@dataclass(frozen=True)
class MetricValue:
    """A raw metric value plus its native direction (never pre-normalized)."""

    value: float
    direction: str  # "lower" or "higher" is better

    def __post_init__(self):
        if not isinstance(self.value, (int, float)) or isinstance(self.value, bool):
            raise ValueError(f"value must be a real number, got {type(self.value).__name__}")
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.value):
            raise ValueError(f"value must be finite, got {self.value!r}")
        if self.direction not in ("lower", "higher"):
            raise ValueError(f"direction must be 'lower' or 'higher', got {self.direction!r}")


@dataclass(frozen=True)
class MetricReport:
    """One evaluation run: identity fields, named metrics, echoed configuration."""

    run_id: str
    dataset: str
    model: str
    metrics: dict[str, MetricValue]
    config: dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "metrics", dict(self.metrics))
        object.__setattr__(self, "config", dict(self.config))
        for name, mv in self.metrics.items():
            if not isinstance(mv, MetricValue):
                raise ValueError(f"metric {name!r} must be a MetricValue, got {type(mv).__name__}")


@dataclass(frozen=True)
class DirectionRule:
    """Prefix-matched rule: native direction plus the lower-is-better transform."""

    prefix: str
    direction: str  # native direction of the raw value
    transform: str  # "identity", "one_minus", or "negate"


# Order matters: longer, more specific prefixes come before their substrings
# (self_bleu before bleu, oracle_nll before nll).
DIRECTION_RULES: tuple[DirectionRule, ...] = (
    DirectionRule("self_bleu", "lower", "identity"),
    DirectionRule("ms_jaccard", "higher", "one_minus"),
    DirectionRule("bleu", "higher", "one_minus"),
    DirectionRule("entropy", "higher", "negate"),
    DirectionRule("oracle_nll", "lower", "identity"),
    DirectionRule("nll", "lower", "identity"),
    DirectionRule("fbd", "lower", "identity"),
    DirectionRule("bhattacharyya", "lower", "identity"),
)

_TRANSFORMS = {
    "identity": lambda v: v,
    "one_minus": lambda v: 1.0 - v,
    "negate": lambda v: -v,
}


def _find_rule(name: str, rules: tuple[DirectionRule, ...]) -> DirectionRule:
    for rule in rules:
        if name.startswith(rule.prefix):
            return rule
    raise DataError(f"no direction rule registered for metric {name!r}")


def direction_of(name: str, rules: tuple[DirectionRule, ...] = DIRECTION_RULES) -> str:
    """Native direction ('lower' or 'higher') of a metric by name prefix."""
    return _find_rule(name, rules).direction


def normalize_direction(
    name: str, value: float, rules: tuple[DirectionRule, ...] = DIRECTION_RULES
) -> float:
    """Map a raw metric value to the lower-is-better scale.

    Similarity scores become 1 - value, entropy becomes -value, metrics that
    are already lower-better pass through untouched.
    """
    return _TRANSFORMS[_find_rule(name, rules).transform](value)


def pearson(x: list[float], y: list[float]) -> float:
    """Sample Pearson correlation, clamped to [-1, 1] against round-off.

    Zero variance in either series leaves the correlation undefined and
    raises rather than returning NaN.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError(f"need at least 2 points, got {len(x)}")
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    cov = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = math.fsum((a - mx) ** 2 for a in x)
    vy = math.fsum((b - my) ** 2 for b in y)
    if vx == 0.0 or vy == 0.0:
        raise DataError("correlation undefined: a series has zero variance")
    r = cov / math.sqrt(vx * vy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pairwise Pearson correlations of direction-normalized metrics."""

    metric_names: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        names = tuple(self.metric_names)
        vals = tuple(tuple(row) for row in self.values)
        object.__setattr__(self, "metric_names", names)
        object.__setattr__(self, "values", vals)
        k = len(names)
        if len(vals) != k or any(len(row) != k for row in vals):
            raise ValueError(f"matrix must be {k}x{k}")
        for i in range(k):
            if vals[i][i] != 1.0:
                raise ValueError(f"diagonal entry [{i}][{i}] is {vals[i][i]!r}, expected 1.0")
            for j in range(k):
                if vals[i][j] != vals[j][i]:
                    raise ValueError(f"matrix not symmetric at [{i}][{j}]")
                if not -1.0 <= vals[i][j] <= 1.0:
                    raise ValueError(f"entry [{i}][{j}] = {vals[i][j]!r} outside [-1, 1]")


def correlation_matrix(
    reports: list[MetricReport],
    metric_names: list[str],
    rules: tuple[DirectionRule, ...] = DIRECTION_RULES,
) -> CorrelationMatrix:
    """Cross-metric Pearson correlations over a collection of runs.

    Each metric is read from every report, direction-normalized, then
    correlated pairwise. A report missing a requested metric is a data
    error, as is a zero-variance column.
    """
    if len(reports) < 2:
        raise ValueError(f"need at least 2 reports, got {len(reports)}")
    names = tuple(metric_names)
    series: dict[str, list[float]] = {}
    for name in names:
        col = []
        for rep in reports:
            if name not in rep.metrics:
                raise DataError(f"report {rep.run_id!r} is missing metric {name!r}")
            col.append(normalize_direction(name, rep.metrics[name].value, rules))
        series[name] = col
    k = len(names)
    grid = [[1.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            r = pearson(series[names[i]], series[names[j]])
            grid[i][j] = r
            grid[j][i] = r
    return CorrelationMatrix(
        metric_names=names, values=tuple(tuple(row) for row in grid)
    )


def report_to_json(report: MetricReport) -> str:
    """Canonical JSON with stable key order; floats keep full precision."""
    obj = {
        "run_id": report.run_id,
        "dataset": report.dataset,
        "model": report.model,
        "metrics": {
            name: {"value": mv.value, "direction": mv.direction}
            for name, mv in sorted(report.metrics.items())
        },
        "config": {key: report.config[key] for key in sorted(report.config)},
    }
    return json.dumps(obj, indent=2) + "\n"


def report_from_json(text: str, path: str | None = None) -> MetricReport:
    """Parse and validate a report; inverse of report_to_json field-exactly."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc}", path=path, line=exc.lineno) from exc
    if not isinstance(obj, dict):
        raise DataError(f"report must be a JSON object, got {type(obj).__name__}", path=path)
    for key in ("run_id", "dataset", "model", "metrics"):
        if key not in obj:
            raise DataError(f"report missing required key {key!r}", path=path)
    for key in ("run_id", "dataset", "model"):
        if not isinstance(obj[key], str):
            raise DataError(f"{key!r} must be a string", path=path)
    if not isinstance(obj["metrics"], dict):
        raise DataError("'metrics' must be an object", path=path)
    metrics = {}
    for name, entry in obj["metrics"].items():
        if not isinstance(entry, dict) or "value" not in entry or "direction" not in entry:
            raise DataError(f"metric {name!r} must have 'value' and 'direction'", path=path)
        try:
            metrics[name] = MetricValue(value=entry["value"], direction=entry["direction"])
        except ValueError as exc:
            raise DataError(f"metric {name!r}: {exc}", path=path) from exc
    config = obj.get("config", {})
    if not isinstance(config, dict):
        raise DataError("'config' must be an object", path=path)
    return MetricReport(
        run_id=obj["run_id"],
        dataset=obj["dataset"],
        model=obj["model"],
        metrics=metrics,
        config=config,
    )


def load_report(path: str) -> MetricReport:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise DataError(f"not valid UTF-8: {exc}", path=path) from exc
    except OSError as exc:
        raise DataError(f"cannot read report: {exc}", path=path) from exc
    return report_from_json(text, path=path)


def report_to_csv(report: MetricReport) -> str:
    """Flatten to one row per metric: run_id,dataset,model,metric,value,direction."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["run_id", "dataset", "model", "metric", "value", "direction"])
    for name, mv in sorted(report.metrics.items()):
        writer.writerow([report.run_id, report.dataset, report.model, name, repr(mv.value), mv.direction])
    return buf.getvalue()
