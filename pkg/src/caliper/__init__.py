"""Calibration analysis engine: reliability diagrams, calibration metrics,
learned reliability diagrams, and subgroup/region/instance queries for
probabilistic classifiers."""

from .binning import BinnedDiagram, BinSpec, assign, bin_stats, compute_edges, score_histogram
from .dataset import (
    CONFIDENCE,
    ClassView,
    Column,
    EvaluationSession,
    FeatureTable,
    ModelRecord,
    ViewMode,
    classwise,
    features_to_csv,
    ingest_features,
    ingest_predictions,
    labels_to_csv,
    probs_to_csv,
    project_class_view,
)
from .errors import (
    CaliperError,
    EmptySelectionError,
    IngestionError,
    NotFoundError,
    ValidationError,
)
from .lrd import (
    LearnedDiagram,
    LrdParams,
    default_grid,
    evaluate_lrd,
    fit_lrd,
    fit_lrd_with_band,
    lrd_area,
    lrd_expected_error,
    lrd_to_payload,
)
from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    accuracy,
    brier_score,
    confusion_matrix,
    ece,
    log_loss,
    mce,
    metrics_report,
)
from .selection import (
    FeatureConstraint,
    FeatureHistogram,
    RegionSelection,
    SubgroupPredicate,
    feature_histogram,
    feature_means,
    filter_by_predicate,
    filter_by_score_range,
    predicate_from_payload,
)
from .synth import (
    Distortion,
    SynthResult,
    SynthSpec,
    drop_informative,
    gen_classification,
    predictions_from_posteriors,
    prior_shift,
    temperature,
    write_csvs,
)

__version__ = "0.1.0"

__all__ = [
    "BinSpec",
    "BinnedDiagram",
    "CONFIDENCE",
    "CaliperError",
    "ClassView",
    "Column",
    "ConfusionMatrix",
    "Distortion",
    "EmptySelectionError",
    "EvaluationSession",
    "FeatureConstraint",
    "FeatureHistogram",
    "FeatureTable",
    "IngestionError",
    "LearnedDiagram",
    "LrdParams",
    "MetricsReport",
    "ModelRecord",
    "NotFoundError",
    "RegionSelection",
    "SubgroupPredicate",
    "SynthResult",
    "SynthSpec",
    "ValidationError",
    "ViewMode",
    "accuracy",
    "assign",
    "bin_stats",
    "brier_score",
    "classwise",
    "compute_edges",
    "confusion_matrix",
    "default_grid",
    "drop_informative",
    "ece",
    "evaluate_lrd",
    "feature_histogram",
    "feature_means",
    "features_to_csv",
    "filter_by_predicate",
    "filter_by_score_range",
    "fit_lrd",
    "fit_lrd_with_band",
    "gen_classification",
    "ingest_features",
    "ingest_predictions",
    "labels_to_csv",
    "log_loss",
    "lrd_area",
    "lrd_expected_error",
    "lrd_to_payload",
    "mce",
    "metrics_report",
    "predicate_from_payload",
    "predictions_from_posteriors",
    "prior_shift",
    "probs_to_csv",
    "project_class_view",
    "score_histogram",
    "temperature",
    "write_csvs",
]
