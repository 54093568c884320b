"""Tweet misinformation classification, end to end.

Corpus ingestion -> text cleaning and metadata binarization ->
one-sided-selection rebalancing -> capped TF-IDF vectorization ->
four from-scratch classifiers -> repeated stratified cross-validation
with a one-sample t-test on mean accuracy. Every randomized stage is
seeded; identical inputs and seeds give byte-identical artifacts.
"""

from .balance import BalanceConfig, IndexedPoint, one_sided_selection, rebalance
from .corpus import (
    Dataset,
    DistributionTable,
    LabelIndex,
    TweetRecord,
    ingest,
    load_label_index,
    summarize,
)
from .errors import ConfigError, DataError, InfodemicError
from .evaluate import (
    ConfusionMatrix,
    EvaluationReport,
    Metrics,
    TTestResult,
    confusion,
    cross_validate,
    metrics,
    one_sample_ttest,
    render_report,
    stratified_kfold,
)
from .hydration import HydrationConfig, hydrate
from .models import ModelSpec, TrainedModel, decision_score, predict, train
from .preprocess import (
    FeatureRow,
    Thresholds,
    assemble_text,
    clean_text,
    extract_features,
    fit_thresholds,
)
from .vectorize import CombinedVector, Vectorizer, fit, transform

__version__ = "0.1.0"

__all__ = [
    "BalanceConfig",
    "CombinedVector",
    "ConfigError",
    "ConfusionMatrix",
    "DataError",
    "Dataset",
    "DistributionTable",
    "EvaluationReport",
    "FeatureRow",
    "HydrationConfig",
    "IndexedPoint",
    "InfodemicError",
    "LabelIndex",
    "Metrics",
    "ModelSpec",
    "TTestResult",
    "Thresholds",
    "TrainedModel",
    "TweetRecord",
    "Vectorizer",
    "assemble_text",
    "clean_text",
    "confusion",
    "cross_validate",
    "decision_score",
    "extract_features",
    "fit",
    "fit_thresholds",
    "hydrate",
    "ingest",
    "load_label_index",
    "metrics",
    "one_sample_ttest",
    "one_sided_selection",
    "predict",
    "rebalance",
    "render_report",
    "stratified_kfold",
    "summarize",
    "train",
    "transform",
]
