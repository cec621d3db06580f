# src/cfos/models/__init__.py

"""Classifiers: the frozen ridge model used for inversion checks, and kNN"""

from .base import Classifier, ModelError
from .knn import KnnClassifier, KnnModel, knn_fit, knn_predict
from .ridge import LinearModel, RidgeClassifier, predict, score, train_ridge

__all__ = [
    'Classifier',
    'KnnClassifier',
    'KnnModel',
    'LinearModel',
    'ModelError',
    'RidgeClassifier',
    'knn_fit',
    'knn_predict',
    'make_classifier',
    'predict',
    'score',
    'train_ridge',
]

CLASSIFIER_TYPES = {
    'knn': KnnClassifier,
    'ridge': RidgeClassifier,
}

def make_classifier(name: str, knn_k: int = 5, ridge_rho: float = 1e-3) -> Classifier:
    """Build a fresh classifier handle by name"""
    if name not in CLASSIFIER_TYPES:
        raise ModelError(f"unknown classifier {name!r}, expected one of {sorted(CLASSIFIER_TYPES)}")
    if name == 'knn':
        return KnnClassifier(k=knn_k)
    return RidgeClassifier(rho=ridge_rho)
