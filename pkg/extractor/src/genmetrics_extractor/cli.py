"""Command-line entry point: flags mirror ExtractorConfig one-to-one.

Exit codes: 0 success, 1 data or runtime failure (unreadable corpus,
unloadable model, write failure), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .extract import ExtractorConfig, ExtractorError, extract_features


def _int_at_least(floor: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < floor:
            raise argparse.ArgumentTypeError(f"expected an integer >= {floor}, got {value}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genmetrics-extract",
        description="Export pooled transformer sentence features to a FBDFEAT1 file.",
    )
    parser.add_argument("--model", required=True,
                        help="Hugging Face model id or local model directory")
    parser.add_argument("--corpus", required=True,
                        help="corpus file: one sentence per line, whitespace-separated tokens")
    parser.add_argument("--output", required=True, help="feature file to write")
    parser.add_argument("--max-seq-len", type=_int_at_least(2), default=64,
                        help="token length sentences are truncated to (default: 64)")
    parser.add_argument("--batch-size", type=_int_at_least(1), default=32,
                        help="sentences per forward pass (default: 32)")
    parser.add_argument("--device", default="cpu",
                        help="torch device string (default: cpu)")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        import transformers

        transformers.logging.set_verbosity_error()
        transformers.logging.disable_progress_bar()
    except Exception:
        pass
    cfg = ExtractorConfig(
        model=args.model,
        corpus_path=args.corpus,
        output_path=args.output,
        max_seq_len=args.max_seq_len,
        batch_size=args.batch_size,
        device=args.device,
    )
    try:
        metadata = extract_features(cfg)
    except (ExtractorError, ValueError) as exc:
        print(f"genmetrics-extract: error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(metadata, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
