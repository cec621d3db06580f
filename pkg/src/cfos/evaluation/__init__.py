# src/cfos/evaluation/__init__.py

"""Metrics, cross-validation and the boundary-region census"""

from .census import (
    CensusReport,
    RegionCounts,
    census_report,
    generated_minority_rows,
    infer_method,
    region_census,
)
from .crossval import (
    FoldMetrics,
    MetricsReport,
    effective_folds,
    folds_frame,
    kfold_evaluate,
    leakage_guard,
    minority_classes,
)
from .metrics import (
    ConfusionMatrix,
    EvaluationError,
    binary_confusion,
    confusion_from_predictions,
    f_measure,
    g_mean,
    per_class_correct,
)
from .report import TABLE_FORMATS, merge_reports, render_table

__all__ = [
    'CensusReport',
    'ConfusionMatrix',
    'EvaluationError',
    'FoldMetrics',
    'MetricsReport',
    'RegionCounts',
    'TABLE_FORMATS',
    'binary_confusion',
    'census_report',
    'confusion_from_predictions',
    'effective_folds',
    'f_measure',
    'folds_frame',
    'g_mean',
    'generated_minority_rows',
    'infer_method',
    'kfold_evaluate',
    'leakage_guard',
    'merge_reports',
    'minority_classes',
    'per_class_correct',
    'region_census',
    'render_table',
]
