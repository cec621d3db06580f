# src/cfos/numerics/ranking.py

"""Spearman rank correlation and per-pair feature importance ranking"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import rankdata

from ..data.dataset import ClassPair, Dataset

@dataclass(frozen=True, eq=False)
class FeatureRanking:
    """Feature indices (0-based), most important first, with their Spearman rho"""
    order: Tuple[int, ...]
    rho: np.ndarray

    def top(self, m: int) -> np.ndarray:
        """Indices of the m most important features"""
        return np.asarray(self.order[:m], dtype=np.int64)

def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average-tied ranks; 0 when either input is constant"""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("spearman_rho needs at least 2 observations")

    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = np.sqrt(np.dot(rx, rx) * np.dot(ry, ry))
    if denom == 0:
        return 0.0
    return float(np.clip(np.dot(rx, ry) / denom, -1.0, 1.0))

def rank_features(d: Dataset, pair: ClassPair) -> FeatureRanking:
    """Rank features by |rho| against the pair's binary label, ties by index"""
    i, j = pair
    rows = d.pair_rows(pair)
    target = (d.labels[rows] == j).astype(np.float64)
    block = d.features[rows]

    rho = np.array([spearman_rho(block[:, m], target) for m in range(d.n_features)])
    order = sorted(range(d.n_features), key=lambda m: (-abs(rho[m]), m))
    rho.setflags(write=False)
    return FeatureRanking(order=tuple(order), rho=rho)
