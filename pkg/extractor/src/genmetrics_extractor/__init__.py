"""Pooled transformer sentence-feature export for the genmetrics toolkit."""

__version__ = "0.1.0"

from .extract import (
    MAGIC,
    ExtractorConfig,
    ExtractorError,
    extract_features,
    read_sentences,
    write_feature_file,
)

__all__ = [
    "MAGIC",
    "ExtractorConfig",
    "ExtractorError",
    "extract_features",
    "read_sentences",
    "write_feature_file",
    "__version__",
]
