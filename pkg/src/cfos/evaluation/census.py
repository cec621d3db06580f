# src/cfos/evaluation/census.py

"""Where generated rows land relative to the frozen generation classifier.

A generated row with score >= 0.5 lies in the majority region; a score in
[0.5 - tau, 0.5) puts it in the boundary minority band; anything lower is
interior minority.
"""

# ==================== Imports ====================
from collections import Counter
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from ..core.reports import TOOL_VERSION
from ..data.dataset import FACTUAL, Dataset
from ..models.base import as_matrix
from ..models.ridge import LinearModel
from .metrics import EvaluationError

# ==================== Types ====================
class RegionCounts(BaseModel):
    """Generated rows per region"""
    majority: int = 0
    boundary_minority: int = 0
    interior_minority: int = 0

    @property
    def total(self) -> int:
        return self.majority + self.boundary_minority + self.interior_minority

    def fractions(self) -> Dict[str, Optional[float]]:
        total = self.total
        return {
            region: (count / total if total else None)
            for region, count in self.model_dump().items()
        }

class CensusReport(BaseModel):
    """Census of one method's generated rows"""
    tool_version: str = TOOL_VERSION
    method: str
    tau: float
    pair: Tuple[int, int]
    generated: int
    counts: RegionCounts
    fractions: Dict[str, Optional[float]]
    model: Dict[str, Any]

# ==================== Census ====================
def region_census(factual: Dataset, generated_rows: np.ndarray, model: LinearModel, tau: float) -> RegionCounts:
    """Classify generated rows into majority / boundary minority / interior minority"""
    if not tau > 0:
        raise EvaluationError(f"tau must be positive, got {tau}")
    if model.n_features != factual.n_features:
        raise EvaluationError(
            f"model has {model.n_features} weights, dataset has {factual.n_features} features"
        )
    rows = np.asarray(generated_rows, dtype=np.float64)
    if rows.size == 0:
        return RegionCounts()
    scores = model.score(as_matrix(rows, factual.n_features))
    threshold = model.threshold
    majority = scores >= threshold
    boundary = ~majority & (scores >= threshold - tau)
    return RegionCounts(
        majority=int(majority.sum()),
        boundary_minority=int(boundary.sum()),
        interior_minority=int((~majority & ~boundary).sum()),
    )

def generated_minority_rows(augmented: Dataset, factual: Dataset, model: LinearModel) -> np.ndarray:
    """Generated rows of the model's minority class.

    Labels are matched by name because class ids are reassigned when an
    augmented file is read back. Without a provenance column every row past
    the factual row count counts as generated.
    """
    minority_name = factual.label_names[model.pair[0]]
    names = np.array([augmented.label_names[int(c)] for c in augmented.labels])
    if augmented.provenance is not None:
        generated = np.array([p != FACTUAL for p in augmented.provenance])
    else:
        generated = np.arange(augmented.n_samples) >= factual.n_samples
    return augmented.features[generated & (names == minority_name)]

def infer_method(augmented: Dataset) -> str:
    """Most common provenance prefix among generated rows, or 'unknown'"""
    if augmented.provenance is None:
        return "unknown"
    prefixes = Counter(p.split(":", 1)[0] for p in augmented.provenance if p != FACTUAL)
    if not prefixes:
        return "none"
    return sorted(prefixes.items(), key=lambda item: (-item[1], item[0]))[0][0]

def census_report(
    factual: Dataset,
    augmented: Dataset,
    model: LinearModel,
    tau: float,
    method: Optional[str] = None,
) -> CensusReport:
    rows = generated_minority_rows(augmented, factual, model)
    counts = region_census(factual, rows, model, tau)
    return CensusReport(
        method=method or infer_method(augmented),
        tau=tau,
        pair=model.pair,
        generated=counts.total,
        counts=counts,
        fractions=counts.fractions(),
        model=model.to_dict(),
    )
