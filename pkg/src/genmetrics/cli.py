"""Command-line interface wiring files to metrics and reports.

Exit codes: 0 success, 1 data error (offending file and line on stderr),
2 usage error. GENMETRICS_THREADS supplies a default for --threads.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import uuid

from . import __version__
from .corpus import PreprocessConfig, load_corpus, preprocess, write_corpus
from .density_metrics import (
    bhattacharyya_estimate,
    entropy_estimate,
    load_logprobs,
    nll,
    oracle_nll,
)
from .feature_metrics import fbd, read_features
from .ngram_metrics import BleuConfig, bleu_corpus, ms_jaccard, self_bleu
from .report import (
    MetricReport,
    MetricValue,
    correlation_matrix,
    direction_of,
    load_report,
    report_to_csv,
    report_to_json,
)
from .util import DataError, default_threads


class UsageError(Exception):
    """Bad flags or environment configuration; maps to exit code 2."""


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _resolve_threads(explicit: int | None) -> int:
    """Explicit flag wins, then GENMETRICS_THREADS, then available parallelism."""
    if explicit is not None:
        return explicit
    env = os.environ.get("GENMETRICS_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"GENMETRICS_THREADS must be an integer, got {env!r}")
        if value < 1:
            raise UsageError(f"GENMETRICS_THREADS must be >= 1, got {value}")
        return value
    return default_threads()


def _sha256(path: str) -> str:
    try:
        with open(path, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    except OSError as exc:
        raise DataError(f"cannot read file: {exc}", path=path) from exc


def _metric(name: str, value: float) -> MetricValue:
    return MetricValue(value=value, direction=direction_of(name))


def _write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataError(f"cannot write output: {exc}", path=path) from exc


def _emit_report(report: MetricReport, args: argparse.Namespace) -> None:
    if args.format == "json":
        _write_output(report_to_json(report), args.output)
    else:
        _write_output(report_to_csv(report), args.output)


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", default="-", help="report path, '-' for stdout")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--run-id", default=None, help="report identifier (default: random)")
    parser.add_argument("--dataset", default="", help="dataset label echoed into the report")
    parser.add_argument("--model", default="", help="model label echoed into the report")


def _run_id(args: argparse.Namespace) -> str:
    return args.run_id if args.run_id is not None else uuid.uuid4().hex


def _cmd_ngram(args: argparse.Namespace) -> int:
    threads = _resolve_threads(args.threads)
    generated = load_corpus(args.generated)
    reference = load_corpus(args.reference)
    n = args.max_n
    cfg = BleuConfig(max_n=n, smoothing_epsilon=args.smoothing_epsilon)
    msj = ms_jaccard(generated, reference, n, threads=threads)
    metrics = {
        f"ms_jaccard{n}": _metric(f"ms_jaccard{n}", msj.aggregate),
        f"bleu{n}": _metric(f"bleu{n}", bleu_corpus(generated, reference, cfg, threads=threads)),
        f"self_bleu{n}": _metric(f"self_bleu{n}", self_bleu(generated, cfg, threads=threads)),
        f"self_bleu{n}_reference": _metric(
            f"self_bleu{n}_reference", self_bleu(reference, cfg, threads=threads)
        ),
    }
    report = MetricReport(
        run_id=_run_id(args),
        dataset=args.dataset,
        model=args.model,
        metrics=metrics,
        config={
            "subcommand": "ngram",
            "max_n": n,
            "smoothing_epsilon": args.smoothing_epsilon,
            "threads": threads,
            "generated_path": args.generated,
            "reference_path": args.reference,
            "generated_sha256": _sha256(args.generated),
            "reference_sha256": _sha256(args.reference),
            "ms_jaccard_per_n": list(msj.per_n_scores),
            "tool_version": __version__,
        },
    )
    _emit_report(report, args)
    return 0


def _cmd_fbd(args: argparse.Namespace) -> int:
    features_a = read_features(args.features_a)
    features_b = read_features(args.features_b)
    value = fbd(features_a, features_b, jitter_epsilon=args.jitter_epsilon)
    report = MetricReport(
        run_id=_run_id(args),
        dataset=args.dataset,
        model=args.model,
        metrics={"fbd": _metric("fbd", value)},
        config={
            "subcommand": "fbd",
            "jitter_epsilon": args.jitter_epsilon,
            "features_a_path": args.features_a,
            "features_b_path": args.features_b,
            "features_a_sha256": _sha256(args.features_a),
            "features_b_sha256": _sha256(args.features_b),
            "features_a_shape": [features_a.rows, features_a.dim],
            "features_b_shape": [features_b.rows, features_b.dim],
            "tool_version": __version__,
        },
    )
    _emit_report(report, args)
    return 0


def _cmd_density(args: argparse.Namespace) -> int:
    table = load_logprobs(args.logprobs)
    per_token = args.per_token
    metrics = {
        "bhattacharyya": _metric("bhattacharyya", bhattacharyya_estimate(table)),
        "nll": _metric("nll", nll(table, per_token=per_token)),
        "oracle_nll": _metric("oracle_nll", oracle_nll(table, per_token=per_token)),
        "entropy": _metric("entropy", entropy_estimate(table, per_token=per_token)),
    }
    report = MetricReport(
        run_id=_run_id(args),
        dataset=args.dataset,
        model=args.model,
        metrics=metrics,
        config={
            "subcommand": "density",
            "per_token": per_token,
            "logprobs_path": args.logprobs,
            "logprobs_sha256": _sha256(args.logprobs),
            "num_p": table.num_p,
            "num_q": table.num_q,
            "tool_version": __version__,
        },
    )
    _emit_report(report, args)
    return 0


def _cmd_preprocess(args: argparse.Namespace) -> int:
    cfg = PreprocessConfig(
        min_len=args.min_len,
        max_len=args.max_len,
        min_word_freq=args.min_word_freq,
        max_unks=args.max_unks,
        unk_token=args.unk_token,
    )
    corpus = load_corpus(args.input)
    cleaned = preprocess(corpus, cfg)
    write_corpus(cleaned, args.output)
    summary = {
        "input_path": args.input,
        "output_path": args.output,
        "sentences_in": len(corpus),
        "sentences_out": len(cleaned),
        "min_len": cfg.min_len,
        "max_len": cfg.max_len,
        "min_word_freq": cfg.min_word_freq,
        "max_unks": cfg.max_unks,
        "unk_token": cfg.unk_token,
        "tool_version": __version__,
    }
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0


def _cmd_correlate(args: argparse.Namespace) -> int:
    reports = [load_report(path) for path in args.reports]
    matrix = correlation_matrix(reports, args.metrics)
    if args.format == "json":
        obj = {
            "metric_names": list(matrix.metric_names),
            "values": [list(row) for row in matrix.values],
        }
        _write_output(json.dumps(obj, indent=2) + "\n", args.output)
    else:
        lines = ["metric," + ",".join(matrix.metric_names)]
        for name, row in zip(matrix.metric_names, matrix.values):
            lines.append(name + "," + ",".join(repr(v) for v in row))
        _write_output("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genmetrics",
        description="Quality and diversity metrics for generated text corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_ngram = sub.add_parser("ngram", help="MS-Jaccard, BLEU, and Self-BLEU between two corpora")
    p_ngram.add_argument("--generated", required=True, help="generated corpus, one sentence per line")
    p_ngram.add_argument("--reference", required=True, help="reference corpus, one sentence per line")
    p_ngram.add_argument("--max-n", type=_positive_int, default=5, help="largest n-gram order")
    p_ngram.add_argument(
        "--smoothing-epsilon",
        type=_positive_float,
        default=None,
        help="replace zero BLEU precisions with this value (default: no smoothing)",
    )
    p_ngram.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help="worker threads (default: GENMETRICS_THREADS or available parallelism)",
    )
    _add_report_flags(p_ngram)
    p_ngram.set_defaults(func=_cmd_ngram)

    p_fbd = sub.add_parser("fbd", help="Frechet distance between two feature files")
    p_fbd.add_argument("--features-a", required=True, help="first FBDFEAT1 feature file")
    p_fbd.add_argument("--features-b", required=True, help="second FBDFEAT1 feature file")
    p_fbd.add_argument(
        "--jitter-epsilon",
        type=_positive_float,
        default=None,
        help="diagonal jitter used on retry (default: 1e-6 of the mean diagonal)",
    )
    _add_report_flags(p_fbd)
    p_fbd.set_defaults(func=_cmd_fbd)

    p_density = sub.add_parser(
        "density", help="Bhattacharyya, NLL, Oracle-NLL, and entropy from a log-prob table"
    )
    p_density.add_argument("--logprobs", required=True, help="TSV of per-sample log-densities")
    p_density.add_argument(
        "--per-token", action="store_true", help="divide per-sample values by the length column"
    )
    _add_report_flags(p_density)
    p_density.set_defaults(func=_cmd_density)

    p_pre = sub.add_parser("preprocess", help="UNK replacement and length filtering")
    p_pre.add_argument("--input", required=True, help="corpus to clean")
    p_pre.add_argument("--output", required=True, help="where to write the cleaned corpus")
    p_pre.add_argument("--min-len", type=_positive_int, default=1)
    p_pre.add_argument("--max-len", type=_positive_int, default=1_000_000_000)
    p_pre.add_argument(
        "--min-word-freq",
        type=_nonneg_int,
        default=0,
        help="replace rarer words with the unk token; 0 disables replacement",
    )
    p_pre.add_argument(
        "--max-unks", type=_nonneg_int, default=4, help="drop sentences with more unk tokens"
    )
    p_pre.add_argument("--unk-token", default="UNK")
    p_pre.set_defaults(func=_cmd_preprocess)

    p_corr = sub.add_parser("correlate", help="Pearson correlations across report files")
    p_corr.add_argument("--reports", nargs="+", required=True, help="two or more report JSON files")
    p_corr.add_argument(
        "--metrics", nargs="+", required=True, help="metric names to correlate, in order"
    )
    p_corr.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    p_corr.add_argument("--format", choices=["json", "csv"], default="json")
    p_corr.set_defaults(func=_cmd_correlate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"genmetrics: error: {exc}", file=sys.stderr)
        return 2
    except (DataError, ValueError) as exc:
        print(f"genmetrics: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
