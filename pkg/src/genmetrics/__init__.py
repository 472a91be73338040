"""Quality and diversity metrics for unconditional text generation."""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    NGramProfile,
    PreprocessConfig,
    build_profile,
    load_corpus,
    preprocess,
    write_corpus,
)
from .density_metrics import (
    LogProbRecord,
    LogProbTable,
    bhattacharyya_estimate,
    entropy_estimate,
    load_logprobs,
    nll,
    oracle_nll,
)
from .feature_metrics import (
    FeatureMatrix,
    GaussianStats,
    fbd,
    fit_gaussian,
    frechet_distance,
    read_features,
    trace_sqrt_product,
    write_features,
)
from .ngram_metrics import (
    BleuConfig,
    MsJaccardResult,
    ReferenceIndex,
    bleu_corpus,
    bleu_sentence,
    ms_jaccard,
    ms_jaccard_score_n,
    self_bleu,
)
from .report import (
    CorrelationMatrix,
    DirectionRule,
    MetricReport,
    MetricValue,
    correlation_matrix,
    direction_of,
    load_report,
    normalize_direction,
    pearson,
    report_from_json,
    report_to_csv,
    report_to_json,
)
from .util import DataError, EmptyCorpusError

__all__ = [
    "BleuConfig",
    "Corpus",
    "CorrelationMatrix",
    "DataError",
    "DirectionRule",
    "EmptyCorpusError",
    "FeatureMatrix",
    "GaussianStats",
    "LogProbRecord",
    "LogProbTable",
    "MetricReport",
    "MetricValue",
    "MsJaccardResult",
    "NGramProfile",
    "PreprocessConfig",
    "ReferenceIndex",
    "bhattacharyya_estimate",
    "bleu_corpus",
    "bleu_sentence",
    "build_profile",
    "correlation_matrix",
    "direction_of",
    "entropy_estimate",
    "fbd",
    "fit_gaussian",
    "frechet_distance",
    "load_corpus",
    "load_logprobs",
    "load_report",
    "ms_jaccard",
    "ms_jaccard_score_n",
    "nll",
    "normalize_direction",
    "oracle_nll",
    "pearson",
    "preprocess",
    "read_features",
    "report_from_json",
    "report_to_csv",
    "report_to_json",
    "self_bleu",
    "trace_sqrt_product",
    "write_corpus",
    "write_features",
    "__version__",
]
