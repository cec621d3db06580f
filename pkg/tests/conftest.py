# tests/conftest.py

# ==================== Imports ====================
import numpy as np
import pytest

from src.cfos.core import logger as logger_module
from src.cfos.core.config import SynthSpec
from src.cfos.data.dataset import Dataset
from src.cfos.data.synthetic import make_synthetic

# ==================== Builders ====================
def make_dataset(features, labels, names=None, label_names=None, provenance=None) -> Dataset:
    """Dataset with default feature and class names"""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features.reshape(-1, 1)
    labels = np.asarray(labels, dtype=np.int64)
    if names is None:
        names = tuple(f"f{m}" for m in range(features.shape[1]))
    if label_names is None:
        label_names = {int(c): f"c{int(c)}" for c in np.unique(labels)}
    return Dataset(
        features=features,
        labels=labels,
        feature_names=names,
        label_names=label_names,
        provenance=provenance,
    )

def make_blobs(n_minority=30, n_majority=120, centers=((5.0, 5.0), (0.0, 0.0)), spread=0.5, seed=7) -> Dataset:
    """Two Gaussian blobs; class 1 is the smaller one"""
    rng = np.random.default_rng(seed)
    minority = rng.normal(centers[0], spread, size=(n_minority, len(centers[0])))
    majority = rng.normal(centers[1], spread, size=(n_majority, len(centers[1])))
    return make_dataset(
        np.vstack([minority, majority]),
        np.concatenate([np.ones(n_minority), np.full(n_majority, 2)]),
        label_names={1: "minority", 2: "majority"},
    )

# ==================== Fixtures ====================
@pytest.fixture(autouse=True)
def fresh_logger():
    """Drop the global logger so no test inherits a closed capture stream"""
    yield
    logger_module._logger = None

@pytest.fixture
def two_point():
    """1-D fixture: minority class 1 at x=1, majority class 2 at x=0"""
    return make_dataset([[1.0], [0.0]], [1, 2], names=("x",), label_names={1: "i", 2: "j"})

@pytest.fixture
def blobs():
    return make_blobs()

@pytest.fixture(scope="session")
def synthetic():
    """Seeded two-cluster dataset with 1000 rows, 83 minority and 4 noise points"""
    return make_synthetic(SynthSpec())

@pytest.fixture
def write_text(tmp_path):
    """Write a text file under tmp_path and return its path"""
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
