# src/cfos/evaluation/metrics.py

"""Confusion matrices and the imbalance-aware metrics built on them"""

# ==================== Imports ====================
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix

# ==================== Errors ====================
class EvaluationError(ValueError):
    """Raised on invalid evaluation input or unsplittable data"""

# ==================== Confusion Matrix ====================
@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """C x C counts; rows are true classes, columns predicted classes"""
    counts: np.ndarray
    classes: Tuple[int, ...]

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        classes = tuple(int(c) for c in self.classes)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise EvaluationError(f"confusion matrix must be square, got shape {counts.shape}")
        if counts.shape[0] != len(classes):
            raise EvaluationError(f"{len(classes)} class ids for a {counts.shape[0]}-class matrix")
        if np.any(counts < 0):
            raise EvaluationError("confusion matrix counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "classes", classes)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def _index(self, cls: int) -> int:
        try:
            return self.classes.index(int(cls))
        except ValueError:
            raise EvaluationError(f"class {cls} not in confusion matrix classes {self.classes}")

    # one-vs-rest cells for a positive class
    def tp(self, positive: int) -> int:
        k = self._index(positive)
        return int(self.counts[k, k])

    def fn(self, positive: int) -> int:
        k = self._index(positive)
        return int(self.counts[k].sum() - self.counts[k, k])

    def fp(self, positive: int) -> int:
        k = self._index(positive)
        return int(self.counts[:, k].sum() - self.counts[k, k])

    def tn(self, positive: int) -> int:
        return self.total - self.tp(positive) - self.fn(positive) - self.fp(positive)

    def tpr(self, positive: int) -> float:
        tp, fn = self.tp(positive), self.fn(positive)
        return tp / (tp + fn) if tp + fn else 0.0

    def tnr(self, positive: int) -> float:
        tn, fp = self.tn(positive), self.fp(positive)
        return tn / (tn + fp) if tn + fp else 0.0

def confusion_from_predictions(
    truth: Sequence[int],
    predicted: Sequence[int],
    classes: Sequence[int],
) -> ConfusionMatrix:
    """Count (truth, prediction) pairs over the given class ids"""
    truth = np.asarray(truth, dtype=np.int64)
    predicted = np.asarray(predicted, dtype=np.int64)
    if truth.shape != predicted.shape:
        raise EvaluationError(f"{truth.size} true labels for {predicted.size} predictions")
    classes = [int(c) for c in classes]
    return ConfusionMatrix(counts=confusion_matrix(truth, predicted, labels=classes), classes=tuple(classes))

def binary_confusion(tp: int, fp: int, fn: int, tn: int, positive: int = 1, negative: int = 2) -> ConfusionMatrix:
    """Two-class matrix from its four cells"""
    return ConfusionMatrix(counts=[[tp, fn], [fp, tn]], classes=(positive, negative))

# ==================== Metrics ====================
def f_measure(cm: ConfusionMatrix, positive: int) -> float:
    """Harmonic mean of precision and recall; 0 when TP = 0"""
    tp = cm.tp(positive)
    if tp == 0:
        return 0.0
    precision = tp / (tp + cm.fp(positive))
    recall = tp / (tp + cm.fn(positive))
    return 2 * precision * recall / (precision + recall)

def g_mean(cm: ConfusionMatrix, positive: int) -> float:
    """sqrt(TPR * TNR), one-vs-rest for multi-class matrices"""
    return math.sqrt(cm.tpr(positive) * cm.tnr(positive))

def per_class_correct(cm: ConfusionMatrix) -> np.ndarray:
    """Correctly classified samples per class (the diagonal)"""
    return np.diag(cm.counts).copy()
