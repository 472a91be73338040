"""Pooled sentence-feature export from a pretrained transformer encoder.

Reads a corpus file (UTF-8, one sentence per line, whitespace-separated
tokens), encodes every sentence with a Hugging Face encoder, and writes the
pooled per-sentence vectors to the binary feature-matrix format::

    8-byte magic "FBDFEAT1" | u64 LE rows | u64 LE dim | rows*dim float32 LE

Row i is the feature of sentence i; over-length sentences are truncated to
the configured sequence length (and counted), never dropped, so the row
count always equals the corpus sentence count.

This package intentionally shares no code with the metrics package that
consumes its output; the file format above is the entire contract. Reruns
with the same config on the same machine are byte-identical: the encoder
runs in inference mode and every batch is padded to a fixed
(batch_size, max_seq_len) shape, so a sentence's vector does not depend on
where in the corpus it appears.
"""

from __future__ import annotations

import contextlib
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

MAGIC = b"FBDFEAT1"
_HEADER = struct.Struct("<8sQQ")


class ExtractorError(Exception):
    """Raised for unreadable corpora, unloadable encoders, and write failures."""


@dataclass(frozen=True)
class ExtractorConfig:
    """Everything needed for one extraction run.

    ``model`` is a Hugging Face model id or a local directory containing a
    saved encoder. ``device`` is a torch device string such as "cpu" or
    "cuda:0".
    """

    model: str
    corpus_path: str
    output_path: str
    max_seq_len: int = 64
    batch_size: int = 32
    device: str = "cpu"

    def __post_init__(self):
        if not self.model:
            raise ValueError("model must be nonempty")
        if self.max_seq_len < 2:
            raise ValueError(f"max_seq_len must be >= 2, got {self.max_seq_len}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


def read_sentences(path: str | Path) -> list[str]:
    """Read corpus sentences as plain text, one per nonblank line.

    Tokens are rejoined with single spaces; the encoder applies its own
    subword tokenization on top.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise ExtractorError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from exc
    except OSError as exc:
        raise ExtractorError(f"{path}: cannot read file: {exc.strerror or exc}") from exc
    sentences = [" ".join(line.split()) for line in text.splitlines() if line.split()]
    if not sentences:
        raise ExtractorError(f"{path}: corpus has no sentences")
    return sentences


def write_feature_file(features: np.ndarray, path: str | Path) -> None:
    """Write a feature matrix atomically (sibling temp file, then rename)."""
    path = str(path)
    arr = np.ascontiguousarray(features, dtype="<f4")
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"features must be a nonempty 2-D matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ExtractorError("encoder produced non-finite feature values")
    tmp = f"{path}.tmp{os.getpid()}"
    try:
        with open(tmp, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, arr.shape[0], arr.shape[1]))
            fh.write(arr.tobytes(order="C"))
        os.replace(tmp, path)
    except OSError as exc:
        raise ExtractorError(f"{path}: cannot write file: {exc.strerror or exc}") from exc
    finally:
        with contextlib.suppress(OSError):
            os.unlink(tmp)


def _load_encoder(cfg: ExtractorConfig):
    # imported lazily so config/corpus errors surface without the (slow) hub machinery
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(cfg.model)
        model = AutoModel.from_pretrained(cfg.model)
    except Exception as exc:
        raise ExtractorError(f"cannot load encoder {cfg.model!r}: {exc}") from exc
    try:
        model = model.to(cfg.device)
    except (RuntimeError, ValueError) as exc:
        raise ExtractorError(f"cannot move encoder to device {cfg.device!r}: {exc}") from exc
    model.eval()
    return tokenizer, model


def extract_features(cfg: ExtractorConfig) -> dict:
    """Encode the corpus and write its feature file; return run metadata.

    The metadata dict records the model id, matrix shape, how many sentences
    were truncated, and whether vectors came from the encoder's pooler head
    or from the first (CLS) position of the last hidden layer.
    """
    sentences = read_sentences(cfg.corpus_path)
    tokenizer, model = _load_encoder(cfg)

    truncated = 0
    pooling = None
    chunks: list[np.ndarray] = []
    with torch.inference_mode():
        for start in range(0, len(sentences), cfg.batch_size):
            batch = sentences[start:start + cfg.batch_size]
            raw = tokenizer(batch, truncation=False)["input_ids"]
            truncated += sum(1 for ids in raw if len(ids) > cfg.max_seq_len)
            rows = len(batch)
            # every forward pass sees the same (batch_size, max_seq_len) shape;
            # short final batches are padded with copies and the extras dropped
            if rows < cfg.batch_size:
                batch = batch + [batch[0]] * (cfg.batch_size - rows)
            enc = tokenizer(
                batch,
                truncation=True,
                max_length=cfg.max_seq_len,
                padding="max_length",
                return_tensors="pt",
            )
            enc = {k: v.to(cfg.device) for k, v in enc.items()}
            out = model(**enc)
            pooled = getattr(out, "pooler_output", None)
            if pooled is not None:
                pooling = "pooler_output"
            else:
                pooled = out.last_hidden_state[:, 0]
                pooling = "cls_token"
            chunks.append(pooled[:rows].to(torch.float32).cpu().numpy())

    features = np.concatenate(chunks, axis=0)
    write_feature_file(features, cfg.output_path)
    return {
        "model": cfg.model,
        "corpus_path": cfg.corpus_path,
        "output_path": cfg.output_path,
        "rows": int(features.shape[0]),
        "dim": int(features.shape[1]),
        "truncated": truncated,
        "pooling": pooling,
        "max_seq_len": cfg.max_seq_len,
        "batch_size": cfg.batch_size,
        "device": cfg.device,
    }
