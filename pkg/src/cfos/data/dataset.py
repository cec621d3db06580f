# src/cfos/data/dataset.py

"""Tabular datasets: ingestion, validation, per-class partitions and feature statistics"""

# ==================== Imports ====================
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..core.logger import get_logger

# ==================== Constants ====================
PROVENANCE_COLUMN = "provenance"
FACTUAL = "factual"
MISSING_MARKERS = ["?"]

ClassPair = Tuple[int, int]

# ==================== Errors ====================
class DatasetError(ValueError):
    """Raised when a dataset cannot be loaded or violates its invariants"""

# ==================== Reports ====================
class IngestionReport(BaseModel):
    """Summary of a CSV ingestion"""
    path: str
    rows_read: int
    rows_dropped: int
    label_column: str
    feature_names: List[str]
    class_sizes: Dict[int, int]
    label_mapping: Dict[str, int] = Field(
        description="original label -> dense class id (1 = smallest class)"
    )

# ==================== Dataset ====================
@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable N x M feature table with dense class ids 1..C.

    Class ids are assigned in ascending order of class size at ingestion, so
    id 1 is the smallest class. `label_names` maps ids back to the labels
    found in the source file.
    """
    features: np.ndarray
    labels: np.ndarray
    feature_names: Tuple[str, ...]
    label_names: Mapping[int, str]
    label_column: str = "label"
    provenance: Optional[Tuple[str, ...]] = None
    ingestion: Optional[IngestionReport] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64, copy=True)
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if features.ndim != 2:
            raise DatasetError(f"features must be a 2-D matrix, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise DatasetError(
                f"labels length {labels.shape} does not match {features.shape[0]} rows"
            )
        n, m = features.shape
        if n < 2 or m < 1:
            raise DatasetError(f"need at least 2 rows and 1 feature, got {n}x{m}")
        if not np.all(np.isfinite(features)):
            raise DatasetError("features contain NaN or infinite values")
        if len(self.feature_names) != m:
            raise DatasetError(
                f"{len(self.feature_names)} feature names for {m} feature columns"
            )
        present = np.unique(labels)
        if present.size < 2:
            raise DatasetError(f"need at least 2 classes, got {present.size}")
        unknown = set(present.tolist()) - set(int(k) for k in self.label_names)
        if unknown:
            raise DatasetError(f"labels without a name: {sorted(unknown)}")
        if self.provenance is not None and len(self.provenance) != n:
            raise DatasetError("provenance length does not match row count")

        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(str(f) for f in self.feature_names))
        object.__setattr__(
            self, "label_names", {int(k): str(v) for k, v in self.label_names.items()}
        )
        if self.provenance is not None:
            object.__setattr__(self, "provenance", tuple(self.provenance))

    # ---------- shape ----------
    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @cached_property
    def class_index(self) -> Dict[int, np.ndarray]:
        """class id -> ascending row indices"""
        index = {}
        for cls in np.unique(self.labels):
            rows = np.flatnonzero(self.labels == cls)
            rows.setflags(write=False)
            index[int(cls)] = rows
        return index

    @property
    def classes(self) -> List[int]:
        return sorted(self.class_index)

    @property
    def n_classes(self) -> int:
        return len(self.class_index)

    @property
    def class_sizes(self) -> Dict[int, int]:
        return {cls: int(rows.size) for cls, rows in sorted(self.class_index.items())}

    def provenance_or_factual(self) -> Tuple[str, ...]:
        return self.provenance if self.provenance is not None else (FACTUAL,) * self.n_samples

    # ---------- views ----------
    def rows_of(self, cls: int) -> np.ndarray:
        """Feature rows of one class"""
        return self.features[self.class_index[cls]]

    def pair_rows(self, pair: ClassPair) -> np.ndarray:
        """Ascending row indices belonging to either class of a pair"""
        i, j = pair
        for cls in pair:
            if cls not in self.class_index:
                raise DatasetError(f"class {cls} not present in dataset")
        return np.sort(np.concatenate([self.class_index[i], self.class_index[j]]))

    def subset(self, rows: Sequence[int]) -> "Dataset":
        """Dataset restricted to the given rows (in the given order)"""
        rows = np.asarray(rows, dtype=np.int64)
        provenance = None
        if self.provenance is not None:
            provenance = tuple(self.provenance[r] for r in rows)
        return Dataset(
            features=self.features[rows],
            labels=self.labels[rows],
            feature_names=self.feature_names,
            label_names=self.label_names,
            label_column=self.label_column,
            provenance=provenance,
        )

    def append(
        self,
        features: np.ndarray,
        labels: Sequence[int],
        provenance: Sequence[str],
    ) -> "Dataset":
        """New dataset with rows appended after the existing ones"""
        features = np.asarray(features, dtype=np.float64).reshape(-1, self.n_features)
        labels = np.asarray(labels, dtype=np.int64)
        if features.shape[0] == 0:
            return self
        return Dataset(
            features=np.vstack([self.features, features]),
            labels=np.concatenate([self.labels, labels]),
            feature_names=self.feature_names,
            label_names=self.label_names,
            label_column=self.label_column,
            provenance=self.provenance_or_factual() + tuple(provenance),
        )

    def imbalance_ratio(self, pair: Optional[ClassPair] = None) -> float:
        """N_majority / N_minority for a pair (default: largest vs smallest class)"""
        sizes = self.class_sizes
        if pair is None:
            return max(sizes.values()) / min(sizes.values())
        i, j = pair
        return sizes[j] / sizes[i]

# ==================== Feature Statistics ====================
@dataclass(frozen=True, eq=False)
class FeatureStats:
    """Per-feature min, max, standard deviation, median and MAD"""
    minimum: np.ndarray
    maximum: np.ndarray
    std: np.ndarray
    median: np.ndarray
    mad: np.ndarray
    feature_names: Tuple[str, ...] = ()

    @property
    def n_features(self) -> int:
        return int(self.mad.shape[0])

    @property
    def mad_positive(self) -> np.ndarray:
        """Features contributing to the MAD distance"""
        return self.mad > 0

    @property
    def perturbable(self) -> np.ndarray:
        """Features with a non-degenerate truncated normal"""
        return (self.std > 0) & (self.maximum > self.minimum)

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        names = self.feature_names or tuple(f"f{m}" for m in range(self.n_features))
        return {
            name: {
                "min": float(self.minimum[m]),
                "max": float(self.maximum[m]),
                "std": float(self.std[m]),
                "median": float(self.median[m]),
                "mad": float(self.mad[m]),
            }
            for m, name in enumerate(names)
        }

def compute_feature_stats(d: Dataset) -> FeatureStats:
    """Statistics over all N rows; constant features get std = MAD = 0"""
    x = d.features
    median = np.median(x, axis=0)
    mad = np.median(np.abs(x - median), axis=0)
    arrays = {
        "minimum": x.min(axis=0),
        "maximum": x.max(axis=0),
        "std": x.std(axis=0),
        "median": median,
        "mad": mad,
    }
    for value in arrays.values():
        value.setflags(write=False)
    return FeatureStats(feature_names=d.feature_names, **arrays)

# ==================== Class Pairs ====================
def class_pairs(d: Dataset) -> List[ClassPair]:
    """All (i, j) with N_i < N_j, ordered by i then j"""
    sizes = d.class_sizes
    return [
        (i, j)
        for i in sorted(sizes)
        for j in sorted(sizes)
        if sizes[i] < sizes[j]
    ]

def generation_pairs(d: Dataset, all_pairs: bool = False) -> List[ClassPair]:
    """Pairs to oversample.

    By default every class strictly smaller than the largest class is paired
    with the largest one; `all_pairs` returns every pair from class_pairs.
    """
    if all_pairs:
        return class_pairs(d)
    sizes = d.class_sizes
    largest = max(sorted(sizes), key=lambda cls: (sizes[cls], cls))
    return [(i, largest) for i in sorted(sizes) if sizes[i] < sizes[largest]]

def samples_needed(sizes: Mapping[int, int], pair: ClassPair, target_ratio: float) -> int:
    """Minority rows to add so that N_i / N_j reaches target_ratio"""
    i, j = pair
    return max(0, int(round(target_ratio * sizes[j])) - sizes[i])

# ==================== CSV I/O ====================
def _dense_ids(labels: pd.Series) -> Dict[str, int]:
    """Map original labels to 1..C by ascending class size, ties by label text"""
    counts = labels.value_counts()
    ordered = sorted(counts.index, key=lambda lab: (int(counts[lab]), str(lab)))
    return {str(lab): idx for idx, lab in enumerate(ordered, start=1)}

def load_csv(
    path: Union[str, Path],
    label_column: str,
    drop_columns: Iterable[str] = (),
) -> Dataset:
    """Load a comma-separated UTF-8 file with a header row.

    Rows with missing (empty or "?") or non-finite feature values are dropped
    and counted; a column with any other non-numeric text is an error.
    """
    logger = get_logger()
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"file not found: {path}")

    try:
        header = pd.read_csv(path, nrows=0, encoding="utf-8").columns
        if label_column not in header:
            raise DatasetError(f"label column {label_column!r} not found in {path}")
        dtypes = {label_column: str}
        if PROVENANCE_COLUMN in header:
            dtypes[PROVENANCE_COLUMN] = str
        frame = pd.read_csv(
            path,
            dtype=dtypes,
            na_values=MISSING_MARKERS,
            float_precision="round_trip",
            encoding="utf-8",
        )
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetError(f"cannot parse {path}: {e}")
    drop_columns = list(drop_columns)
    missing = [c for c in drop_columns if c not in frame.columns]
    if missing:
        raise DatasetError(f"columns to drop not found: {missing}")
    frame = frame.drop(columns=drop_columns)

    provenance = None
    if PROVENANCE_COLUMN in frame.columns and PROVENANCE_COLUMN != label_column:
        provenance = frame.pop(PROVENANCE_COLUMN)

    feature_names = [c for c in frame.columns if c != label_column]
    if not feature_names:
        raise DatasetError(f"{path} has no feature columns")
    features = frame[feature_names].copy()
    for column in feature_names:
        if not pd.api.types.is_numeric_dtype(features[column]):
            try:
                features[column] = pd.to_numeric(features[column], errors="raise")
            except (ValueError, TypeError):
                raise DatasetError(f"column {column!r} in {path} is not numeric")
    values = features.to_numpy(dtype=np.float64)

    labels = frame[label_column]
    keep = np.isfinite(values).all(axis=1) & labels.notna().to_numpy()
    rows_read = int(len(frame))
    rows_dropped = int((~keep).sum())
    if rows_dropped:
        logger.warning(f"{path.name}: dropped {rows_dropped} of {rows_read} rows with missing or non-finite values")

    labels = labels[keep].astype(str)
    mapping = _dense_ids(labels)
    if len(mapping) < 2:
        raise DatasetError(f"{path} needs at least 2 classes, found {len(mapping)}")

    ids = labels.map(mapping).to_numpy(dtype=np.int64)
    dataset = Dataset(
        features=values[keep],
        labels=ids,
        feature_names=tuple(str(c) for c in feature_names),
        label_names={cid: lab for lab, cid in mapping.items()},
        label_column=label_column,
        provenance=tuple(provenance[keep].fillna(FACTUAL).astype(str)) if provenance is not None else None,
    )
    for cls, size in dataset.class_sizes.items():
        if size < 2:
            logger.warning(f"class {dataset.label_names[cls]!r} (id {cls}) has only {size} sample")

    report = IngestionReport(
        path=str(path),
        rows_read=rows_read,
        rows_dropped=rows_dropped,
        label_column=label_column,
        feature_names=list(dataset.feature_names),
        class_sizes=dataset.class_sizes,
        label_mapping=mapping,
    )
    object.__setattr__(dataset, "ingestion", report)
    logger.info(
        f"Loaded {path.name}: {dataset.n_samples} rows, {dataset.n_features} features, "
        f"class sizes {dataset.class_sizes}"
    )
    return dataset

def to_frame(d: Dataset, include_provenance: Optional[bool] = None) -> pd.DataFrame:
    """Dataset as a DataFrame with original label names"""
    frame = pd.DataFrame(d.features, columns=list(d.feature_names))
    frame[d.label_column] = [d.label_names[int(c)] for c in d.labels]
    if include_provenance is None:
        include_provenance = d.provenance is not None
    if include_provenance:
        frame[PROVENANCE_COLUMN] = list(d.provenance_or_factual())
    return frame

def write_csv(
    d: Dataset,
    path: Union[str, Path],
    include_provenance: Optional[bool] = None,
) -> Path:
    """Write the CSV contract; floats use shortest round-trip repr"""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    to_frame(d, include_provenance).to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    return path
