# src/cfos/data/__init__.py

"""cfos datasets"""

from .dataset import (
    ClassPair,
    Dataset,
    DatasetError,
    FeatureStats,
    IngestionReport,
    class_pairs,
    compute_feature_stats,
    generation_pairs,
    load_csv,
    samples_needed,
    to_frame,
    write_csv,
)
from .synthetic import make_synthetic

__all__ = [
    'ClassPair',
    'Dataset',
    'DatasetError',
    'FeatureStats',
    'IngestionReport',
    'class_pairs',
    'compute_feature_stats',
    'generation_pairs',
    'load_csv',
    'make_synthetic',
    'samples_needed',
    'to_frame',
    'write_csv',
]
