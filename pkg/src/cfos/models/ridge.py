# src/cfos/models/ridge.py

"""Ridge regression on {0, 1} class targets for one (minority, majority) pair.

Training minimizes (1/N) sum (w.x_n + b - y_n)^2 + rho ||(b, w)||^2 over the
pair's rows, i.e. solves (A^T A + N rho I) theta = A^T y with A = [1 | X].
Minority maps to 0.0 and majority to 1.0; prediction thresholds at 0.5.
"""

# ==================== Imports ====================
import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np
from scipy import linalg

from ..core.logger import get_logger
from ..data.dataset import ClassPair, Dataset
from .base import Classifier, ModelError, as_matrix

DEFAULT_RHO = 1e-3
DEFAULT_THRESHOLD = 0.5

# ==================== Linear Model ====================
@dataclass(frozen=True, eq=False)
class LinearModel:
    """Frozen ridge model for one class pair"""
    weights: np.ndarray
    intercept: float
    pair: ClassPair
    reg: float
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "pair", (int(self.pair[0]), int(self.pair[1])))

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])

    @property
    def y_targets(self) -> Dict[int, float]:
        i, j = self.pair
        return {i: 0.0, j: 1.0}

    def score(self, x: np.ndarray) -> Union[float, np.ndarray]:
        """w.x + b for one row (float) or a batch (array)"""
        matrix = as_matrix(x, self.n_features)
        # row-wise sum keeps a row's score independent of the batch it is scored in
        scores = (matrix * self.weights).sum(axis=1) + self.intercept
        return float(scores[0]) if np.ndim(x) == 1 else scores

    def predict(self, x: np.ndarray) -> Union[int, np.ndarray]:
        """Minority id where score < threshold, majority id otherwise"""
        i, j = self.pair
        scores = self.score(x)
        if np.ndim(scores) == 0:
            return i if scores < self.threshold else j
        return np.where(scores < self.threshold, i, j)

    # ---------- persistence ----------
    def to_dict(self) -> Dict[str, Any]:
        return {
            "weights": [float(w) for w in self.weights],
            "intercept": self.intercept,
            "pair": list(self.pair),
            "rho": self.reg,
            "threshold": self.threshold,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LinearModel":
        try:
            return cls(
                weights=np.asarray(data["weights"], dtype=np.float64),
                intercept=float(data["intercept"]),
                pair=tuple(data["pair"]),
                reg=float(data["rho"]),
                threshold=float(data.get("threshold", DEFAULT_THRESHOLD)),
            )
        except (KeyError, TypeError) as e:
            raise ModelError(f"invalid model description: {e}")

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "LinearModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

# ==================== Training ====================
def design_matrix(features: np.ndarray) -> np.ndarray:
    """[1 | X]"""
    return np.hstack([np.ones((features.shape[0], 1)), features])

def train_ridge(d: Dataset, pair: ClassPair, rho: float = DEFAULT_RHO) -> LinearModel:
    """Closed-form ridge fit on the rows of classes i and j"""
    if rho < 0:
        raise ModelError(f"rho must be non-negative, got {rho}")
    i, j = pair
    sizes = d.class_sizes
    if sizes.get(i, 0) == 0 or sizes.get(j, 0) == 0:
        raise ModelError(f"both classes of pair {pair} must be non-empty")

    rows = d.pair_rows(pair)
    a = design_matrix(d.features[rows])
    y = (d.labels[rows] == j).astype(np.float64)
    n = a.shape[0]

    if rho == 0:
        theta, _, rank, _ = linalg.lstsq(a, y)
        if rank < a.shape[1]:
            get_logger().warning(
                f"ridge system for pair {pair} is singular (rank {rank} < {a.shape[1]}); "
                "using the least-norm solution"
            )
    else:
        gram = a.T @ a + n * rho * np.eye(a.shape[1])
        try:
            theta = linalg.solve(gram, a.T @ y, assume_a="pos")
        except linalg.LinAlgError as e:
            raise ModelError(f"ridge training failed for pair {pair}: {e}")

    return LinearModel(weights=theta[1:], intercept=float(theta[0]), pair=pair, reg=rho)

def score(m: LinearModel, x: np.ndarray) -> Union[float, np.ndarray]:
    return m.score(x)

def predict(m: LinearModel, x: np.ndarray) -> Union[int, np.ndarray]:
    return m.predict(x)

# ==================== Classifier Handle ====================
class RidgeClassifier(Classifier):
    """Pairwise ridge models with one-vs-one voting; ties go to the smaller id"""
    def __init__(self, rho: float = DEFAULT_RHO):
        super().__init__(name="ridge", description="pairwise ridge regression on {0,1} targets")
        self.rho = rho
        self.models: Tuple[LinearModel, ...] = ()
        self._classes: Tuple[int, ...] = ()

    def fit(self, d: Dataset) -> "RidgeClassifier":
        self._classes = tuple(d.classes)
        self.models = tuple(train_ridge(d, pair, self.rho) for pair in combinations(self._classes, 2))
        self._n_features = d.n_features
        return self

    def predict(self, features: np.ndarray) -> np.ndarray:
        self._check_fitted()
        matrix = as_matrix(features, self._n_features)
        votes = np.zeros((matrix.shape[0], len(self._classes)), dtype=np.int64)
        column = {cls: k for k, cls in enumerate(self._classes)}
        for model in self.models:
            winners = model.predict(matrix)
            for cls in model.pair:
                votes[:, column[cls]] += winners == cls
        return np.asarray(self._classes)[np.argmax(votes, axis=1)]
