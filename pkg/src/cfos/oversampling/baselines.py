# src/cfos/oversampling/baselines.py

"""Reference oversamplers: random duplication, SMOTE and ADASYN.

All three fill the same per-pair quota as counterfactual oversampling and
draw from one stream per pair, derived from (seed, i, j).
"""

# ==================== Imports ====================
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
from sklearn.neighbors import NearestNeighbors

from ..core.config import BaselineSpec
from ..core.logger import get_logger
from ..core.reports import TOOL_VERSION
from ..data.dataset import ClassPair, Dataset, generation_pairs, samples_needed
from .base import BaseOversampler, OversamplingError, derive_rng

STREAM_SCHEME = "SeedSequence(seed, spawn_key=(i, j)); one stream per pair"

# ==================== Reports ====================
class BaselineReport(BaseModel):
    """Report of one baseline oversampling run on one class pair"""
    tool_version: str = TOOL_VERSION
    method: str
    pair: Tuple[int, int]
    pair_labels: Tuple[str, str]
    params: Dict[str, Any]
    stream_scheme: str = STREAM_SCHEME
    needed: int
    generated: int
    quotas: Optional[List[int]] = None
    uniform_fallback: bool = False

# ==================== Helpers ====================
def _minority_rows(d: Dataset, pair: ClassPair) -> np.ndarray:
    i, j = pair
    if j not in d.class_index:
        raise OversamplingError(f"majority class {j} not present in dataset")
    rows = d.class_index.get(i)
    if rows is None or rows.size == 0:
        raise OversamplingError(f"minority class {i} is empty")
    return rows

def _neighbour_table(points: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k nearest other rows of `points`, nearest first"""
    nn = NearestNeighbors(n_neighbors=k).fit(points)
    return nn.kneighbors(return_distance=False)

def _check_neighbours(n_minority: int, k: int, method: str) -> None:
    if n_minority <= k:
        raise OversamplingError(
            f"{method} needs more than k_neighbors={k} minority samples, got {n_minority}"
        )

def _interpolate(donors: np.ndarray, neighbours: np.ndarray, u: np.ndarray) -> np.ndarray:
    """donor + u * (neighbour - donor), kept inside the segment's bounding box"""
    u = np.asarray(u, dtype=np.float64).reshape(-1, 1)
    rows = donors + u * (neighbours - donors)
    return np.clip(rows, np.minimum(donors, neighbours), np.maximum(donors, neighbours))

def adasyn_quotas(fractions: Sequence[float], need: int) -> np.ndarray:
    """Split `need` proportionally to `fractions` by largest remainder.

    Remainder ties go to the earlier sample. All-zero fractions are not
    handled here; callers fall back to uniform weights first.
    """
    weights = np.asarray(fractions, dtype=np.float64)
    total = weights.sum()
    if total <= 0:
        raise OversamplingError("ADASYN weights sum to zero")
    raw = need * weights / total
    quotas = np.floor(raw).astype(np.int64)
    remainder = need - int(quotas.sum())
    if remainder > 0:
        order = np.argsort(-(raw - quotas), kind="stable")
        quotas[order[:remainder]] += 1
    return quotas

def _pair_labels(d: Dataset, pair: ClassPair) -> Tuple[str, str]:
    return d.label_names[pair[0]], d.label_names[pair[1]]

def _append(d: Dataset, rows: np.ndarray, label: int, sources: np.ndarray, method: str) -> Dataset:
    return d.append(
        features=rows,
        labels=[label] * rows.shape[0],
        provenance=[f"{method}:{int(s)}" for s in sources],
    )

# ==================== Generators ====================
def _random_rows(d: Dataset, pair: ClassPair, spec: BaselineSpec, need: int):
    minority = _minority_rows(d, pair)
    rng = derive_rng(spec.seed, *pair)
    donors = minority[rng.integers(0, minority.size, size=need)]
    return d.features[donors], donors, {}

def _smote_rows(d: Dataset, pair: ClassPair, spec: BaselineSpec, need: int):
    minority = _minority_rows(d, pair)
    k = spec.k_neighbors
    _check_neighbours(minority.size, k, "SMOTE")
    points = d.features[minority]
    table = _neighbour_table(points, k)

    rng = derive_rng(spec.seed, *pair)
    base = rng.integers(0, minority.size, size=need)
    pick = rng.integers(0, k, size=need)
    u = rng.random(need)
    rows = _interpolate(points[base], points[table[base, pick]], u)
    return rows, minority[base], {}

def _adasyn_rows(d: Dataset, pair: ClassPair, spec: BaselineSpec, need: int):
    i, _ = pair
    minority = _minority_rows(d, pair)
    k = spec.k_neighbors
    _check_neighbours(minority.size, k, "ADASYN")

    # neighbourhoods over the whole dataset; any class other than i counts as majority
    everyone = _neighbour_table(d.features, k)[minority]
    fractions = (d.labels[everyone] != i).mean(axis=1)
    fallback = not np.any(fractions > 0)
    if fallback:
        get_logger().warning(
            f"ADASYN: no minority sample of class {i} has majority neighbours; using uniform quotas"
        )
        fractions = np.ones(minority.size)
    quotas = adasyn_quotas(fractions, need)

    points = d.features[minority]
    table = _neighbour_table(points, k)
    rng = derive_rng(spec.seed, *pair)
    base = np.repeat(np.arange(minority.size), quotas)
    pick = rng.integers(0, k, size=base.size)
    u = rng.random(base.size)
    rows = _interpolate(points[base], points[table[base, pick]], u)
    return rows, minority[base], {"quotas": [int(q) for q in quotas], "uniform_fallback": fallback}

GENERATORS = {
    "random_dup": _random_rows,
    "smote": _smote_rows,
    "adasyn": _adasyn_rows,
}

# ==================== Oversampling ====================
def _run_pair(
    d: Dataset,
    pair: ClassPair,
    spec: BaselineSpec,
    sizes: Dict[int, int],
) -> Tuple[np.ndarray, np.ndarray, BaselineReport]:
    _minority_rows(d, pair)
    need = samples_needed(sizes, pair, spec.target_ratio)
    extra: Dict[str, Any] = {}
    if need == 0:
        rows = np.empty((0, d.n_features))
        sources = np.empty(0, dtype=np.int64)
    else:
        rows, sources, extra = GENERATORS[spec.method](d, pair, spec, need)

    get_logger().info(f"{spec.method} pair {pair}: needed {need}, generated {rows.shape[0]}")
    report = BaselineReport(
        method=spec.method,
        pair=pair,
        pair_labels=_pair_labels(d, pair),
        params=spec.model_dump(mode="json"),
        needed=need,
        generated=int(rows.shape[0]),
        **extra,
    )
    return rows, sources, report

def baseline_oversample(d: Dataset, pair: ClassPair, spec: BaselineSpec) -> Tuple[Dataset, BaselineReport]:
    """Augment class i of one pair with the configured baseline"""
    rows, sources, report = _run_pair(d, tuple(pair), spec, d.class_sizes)
    return _append(d, rows, pair[0], sources, spec.method), report

def random_oversample(d: Dataset, pair: ClassPair, spec: BaselineSpec) -> Dataset:
    """Duplicate uniformly chosen minority rows until the target ratio is met"""
    return baseline_oversample(d, pair, spec.model_copy(update={"method": "random_dup"}))[0]

def smote_oversample(d: Dataset, pair: ClassPair, spec: BaselineSpec) -> Dataset:
    """Interpolate between minority rows and one of their k nearest minority neighbours"""
    return baseline_oversample(d, pair, spec.model_copy(update={"method": "smote"}))[0]

def adasyn_oversample(d: Dataset, pair: ClassPair, spec: BaselineSpec) -> Dataset:
    """SMOTE interpolation with per-row quotas weighted by majority-neighbour density"""
    return baseline_oversample(d, pair, spec.model_copy(update={"method": "adasyn"}))[0]

def baseline_oversample_dataset(
    d: Dataset,
    spec: BaselineSpec,
    pairs: Optional[Sequence[ClassPair]] = None,
) -> Tuple[Dataset, List[BaselineReport]]:
    """Apply the baseline to every selected pair, with the counterfactual pair policy"""
    if pairs is None:
        pairs = generation_pairs(d, spec.all_pairs)
    sizes = dict(d.class_sizes)
    augmented = d
    reports: List[BaselineReport] = []
    for pair in pairs:
        pair = tuple(pair)
        rows, sources, report = _run_pair(d, pair, spec, sizes)
        sizes[pair[0]] += rows.shape[0]
        augmented = _append(augmented, rows, pair[0], sources, spec.method)
        reports.append(report)
    return augmented, reports

# ==================== Handle ====================
class BaselineOversampler(BaseOversampler):
    """Handle for one of the reference oversamplers"""
    def __init__(self, spec: BaselineSpec):
        descriptions = {
            "random_dup": "random duplication of minority rows",
            "smote": "SMOTE interpolation between minority neighbours",
            "adasyn": "ADASYN density-weighted SMOTE",
        }
        super().__init__(name=spec.method, description=descriptions[spec.method])
        self.spec = spec

    def resample(self, d: Dataset, seed: Optional[int] = None) -> Tuple[Dataset, Dict[str, Any]]:
        spec = self.spec if seed is None else self.spec.model_copy(update={"seed": seed})
        augmented, reports = baseline_oversample_dataset(d, spec)
        return augmented, {
            "method": self.name,
            "added": augmented.n_samples - d.n_samples,
            "pairs": [r.model_dump(mode="json") for r in reports],
        }
