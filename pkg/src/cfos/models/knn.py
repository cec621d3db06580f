# src/cfos/models/knn.py

# ==================== Imports ====================
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.spatial.distance import cdist

from ..core.logger import get_logger
from ..data.dataset import Dataset
from .base import Classifier, ModelError, as_matrix

# ==================== Model ====================
@dataclass(frozen=True, eq=False)
class KnnModel:
    """k-nearest-neighbour vote over a stored training set (Euclidean, native scale)"""
    k: int
    features: np.ndarray
    labels: np.ndarray

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

def knn_fit(d: Dataset, k: int) -> KnnModel:
    if k < 1:
        raise ModelError(f"k must be positive, got {k}")
    if k > d.n_samples:
        raise ModelError(f"k={k} exceeds training set size {d.n_samples}")
    return KnnModel(k=k, features=d.features, labels=d.labels)

def knn_predict(m: KnnModel, x: np.ndarray) -> Union[int, np.ndarray]:
    """Majority vote of the k nearest rows; vote ties go to the smaller class id.

    Distance ties between neighbours are resolved by training row order.
    """
    matrix = as_matrix(x, m.n_features)
    distances = cdist(matrix, m.features, metric="euclidean")
    nearest = np.argsort(distances, axis=1, kind="stable")[:, :m.k]
    neighbour_labels = m.labels[nearest]

    classes = np.unique(m.labels)
    votes = np.stack([(neighbour_labels == cls).sum(axis=1) for cls in classes], axis=1)
    predicted = classes[np.argmax(votes, axis=1)]
    return int(predicted[0]) if np.ndim(x) == 1 else predicted

# ==================== Classifier Handle ====================
class KnnClassifier(Classifier):
    """kNN handle for the evaluation harness"""
    def __init__(self, k: int = 5):
        super().__init__(name="knn", description=f"{k}-nearest-neighbour majority vote")
        self.k = k
        self.model: Optional[KnnModel] = None

    def fit(self, d: Dataset) -> "KnnClassifier":
        k = self.k
        if k > d.n_samples:
            get_logger().warning(f"k={k} exceeds {d.n_samples} training rows; using k={d.n_samples}")
            k = d.n_samples
        self.model = knn_fit(d, k)
        self._n_features = d.n_features
        return self

    def predict(self, features: np.ndarray) -> np.ndarray:
        self._check_fitted()
        return np.asarray(knn_predict(self.model, as_matrix(features, self._n_features)))
