# src/cfos/models/base.py

# ==================== Imports ====================
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from ..data.dataset import Dataset

# ==================== Errors ====================
class ModelError(ValueError):
    """Raised on training failures and prediction contract violations"""

def as_matrix(x: np.ndarray, n_features: int) -> np.ndarray:
    """View one sample or a batch as a 2-D float matrix, checking width"""
    x = np.asarray(x, dtype=np.float64)
    matrix = x.reshape(1, -1) if x.ndim == 1 else x
    if matrix.ndim != 2 or matrix.shape[1] != n_features:
        raise ModelError(f"dimension mismatch: expected {n_features} features, got shape {x.shape}")
    return matrix

# ==================== Base Classifier ====================
class Classifier(ABC):
    """Evaluation-harness classifier handle"""
    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description
        self._n_features: Optional[int] = None

    @abstractmethod
    def fit(self, d: Dataset) -> "Classifier":
        """Train on a dataset and return self"""
        pass

    @abstractmethod
    def predict(self, features: np.ndarray) -> np.ndarray:
        """Class ids for a batch of rows"""
        pass

    @property
    def is_fitted(self) -> bool:
        return self._n_features is not None

    def _check_fitted(self) -> None:
        if not self.is_fitted:
            raise ModelError(f"classifier {self.name} used before fit")

    def __str__(self) -> str:
        return f"{self.name}: {self.description}"
