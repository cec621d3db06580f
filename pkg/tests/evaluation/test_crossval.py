# tests/evaluation/test_crossval.py

# ==================== Imports ====================
import os

import numpy as np
import pytest

from src.cfos.core.config import BaselineSpec, GenerationParams
from src.cfos.data.dataset import load_csv
from src.cfos.evaluation.crossval import (
    effective_folds,
    folds_frame,
    kfold_evaluate,
    leakage_guard,
    minority_classes,
)
from src.cfos.evaluation.metrics import EvaluationError
from src.cfos.models import KnnClassifier, RidgeClassifier
from src.cfos.oversampling.base import BaseOversampler, IdentityOversampler
from src.cfos.oversampling.baselines import BaselineOversampler
from src.cfos.oversampling.counterfactual import CounterfactualOversampler
from tests.conftest import make_blobs, make_dataset

# ==================== Helpers ====================
class ShufflingOversampler(BaseOversampler):
    """Reorders the training fold instead of appending to it"""
    def __init__(self):
        super().__init__(name="shuffle", description="reorders training rows")

    def resample(self, d, seed=None):
        return d.subset(np.arange(d.n_samples)[::-1]), {"method": self.name, "added": 0}

def without_threads(report):
    return report.model_dump(exclude={"elapsed_seconds"})

@pytest.fixture
def overlapping():
    return make_blobs(n_minority=40, n_majority=160, centers=((1.5, 1.5), (0.0, 0.0)), spread=1.0, seed=3)

# ==================== Helper Tests ====================
def test_minority_classes():
    d = make_dataset(np.arange(9.0), [1, 2, 2, 3, 3, 3, 3, 3, 3])
    assert minority_classes(d) == [1, 2]
    tied = make_dataset(np.arange(4.0), [1, 1, 2, 2])
    assert minority_classes(tied) == [1]

def test_effective_folds():
    d = make_dataset(np.arange(23.0), [1] * 3 + [2] * 20)
    assert effective_folds(d, 3) == 3
    assert effective_folds(d, 10) == 3

def test_effective_folds_errors():
    d = make_dataset(np.arange(5.0), [1] + [2] * 4)
    with pytest.raises(EvaluationError):
        effective_folds(d, 3)
    with pytest.raises(EvaluationError):
        effective_folds(make_blobs(), 1)

def test_leakage_guard(blobs):
    train = blobs.subset(np.arange(100))
    augmented = train.append([[9.0, 9.0]], [1], ["smote:0"])
    assert leakage_guard(blobs, train, augmented, blobs.features[100:]) == 50

    with pytest.raises(EvaluationError, match="not a factual row"):
        leakage_guard(blobs, train, augmented, np.array([[9.0, 9.0]]))
    with pytest.raises(EvaluationError, match="altered the training fold"):
        leakage_guard(blobs, train, train.subset(np.arange(99)), blobs.features[100:])

# ==================== Evaluation Tests ====================
def test_separable_data_scores_perfectly(blobs):
    report = kfold_evaluate(blobs, IdentityOversampler(), KnnClassifier(k=1), k=10, seed=1)
    assert report.f_measure == 1.0
    assert report.g_mean == 1.0
    assert report.folds == 10
    assert report.positive_classes == [1]
    assert report.averaging == "binary"
    assert report.per_class_correct == [{"minority": 30, "majority": 120}]

def test_every_factual_row_tested_once_per_run(overlapping):
    report = kfold_evaluate(overlapping, IdentityOversampler(), KnnClassifier(k=3), k=5, runs=2, seed=4)
    assert report.leakage_checked_rows == overlapping.n_samples * 2
    assert len(report.fold_metrics) == 10
    assert sum(m.n_test for m in report.fold_metrics if m.run == 0) == overlapping.n_samples

def test_oversampled_training_folds(overlapping):
    method = BaselineOversampler(BaselineSpec(method="smote"))
    report = kfold_evaluate(overlapping, method, KnnClassifier(k=3), k=5, seed=2)
    for m in report.fold_metrics:
        # stratified folds keep the 1:4 ratio, and SMOTE fills the minority up to the majority
        minority_train = round(m.n_train * 40 / 200)
        majority_train = m.n_train - minority_train
        assert m.n_augmented == 2 * majority_train
    assert report.method == "smote"

def test_deterministic(overlapping):
    method = BaselineOversampler(BaselineSpec(method="adasyn"))
    first = kfold_evaluate(overlapping, method, KnnClassifier(k=5), k=5, runs=2, seed=7)
    second = kfold_evaluate(overlapping, method, KnnClassifier(k=5), k=5, runs=2, seed=7)
    assert first.model_dump() == second.model_dump()

def test_thread_count_does_not_change_metrics(overlapping):
    method = CounterfactualOversampler(GenerationParams(trials=20))
    serial = kfold_evaluate(overlapping, method, KnnClassifier(k=3), k=3, seed=5, threads=1)
    parallel = kfold_evaluate(overlapping, method, KnnClassifier(k=3), k=3, seed=5, threads=3)
    assert without_threads(serial) == without_threads(parallel)

def test_spread_fields(overlapping):
    report = kfold_evaluate(overlapping, IdentityOversampler(), RidgeClassifier(), k=5, runs=3, seed=8)
    grid = np.array([m.g_mean for m in report.fold_metrics]).reshape(3, 5)
    assert report.g_mean == pytest.approx(grid.mean())
    assert report.g_mean_std_folds == pytest.approx(grid.std(axis=1).mean())
    assert report.g_mean_std_runs == pytest.approx(grid.mean(axis=1).std())
    assert len(report.per_class_correct) == 3

def test_single_run_has_zero_run_spread(overlapping):
    report = kfold_evaluate(overlapping, IdentityOversampler(), KnnClassifier(), k=4, seed=1)
    assert report.f_measure_std_runs == 0.0
    assert report.g_mean_std_runs == 0.0

def test_small_class_merges_folds():
    d = make_blobs(n_minority=4, n_majority=40, seed=5)
    report = kfold_evaluate(d, IdentityOversampler(), KnnClassifier(k=1), k=10)
    assert report.folds == 4
    assert report.requested_folds == 10

def test_multi_class_macro_average():
    rng = np.random.default_rng(2)
    sizes = [15, 30, 90]
    features = np.vstack([rng.normal(c, 0.4, size=(n, 2)) for c, n in zip([(5, 5), (5, 0), (0, 0)], sizes)])
    d = make_dataset(features, np.repeat([1, 2, 3], sizes))
    report = kfold_evaluate(d, IdentityOversampler(), KnnClassifier(k=1), k=5)
    assert report.positive_classes == [1, 2]
    assert report.averaging.startswith("macro")
    for m in report.fold_metrics:
        assert m.f_measure == pytest.approx(np.mean(list(m.per_class_f_measure.values())))

def test_oversampler_that_alters_training_rows(blobs):
    with pytest.raises(EvaluationError, match="altered the training fold"):
        kfold_evaluate(blobs, ShufflingOversampler(), KnnClassifier(), k=3)

def test_timing_only_when_requested(blobs):
    assert kfold_evaluate(blobs, IdentityOversampler(), KnnClassifier(), k=3).elapsed_seconds is None
    timed = kfold_evaluate(blobs, IdentityOversampler(), KnnClassifier(), k=3, record_timing=True)
    assert timed.elapsed_seconds >= 0

def test_folds_frame(overlapping):
    report = kfold_evaluate(overlapping, IdentityOversampler(), KnnClassifier(), k=5, runs=2)
    frame = folds_frame(report)
    assert list(frame.columns) == ["run", "fold", "n_train", "n_augmented", "n_test", "f_measure", "g_mean"]
    assert len(frame) == 10
    assert frame["g_mean"].mean() == pytest.approx(report.g_mean)

# ==================== Real Data Tests ====================
@pytest.mark.slow
@pytest.mark.skipif(not os.getenv("CFOS_WBC_PATH"), reason="set CFOS_WBC_PATH to the breast cancer CSV")
def test_breast_cancer_counterfactual_vs_plain_knn():
    drop = [c for c in os.getenv("CFOS_WBC_DROP", "").split(",") if c]
    d = load_csv(os.environ["CFOS_WBC_PATH"], os.getenv("CFOS_WBC_LABEL", "class"), drop)
    assert d.imbalance_ratio() == pytest.approx(1.9, abs=0.05)

    plain = kfold_evaluate(d, IdentityOversampler(), KnnClassifier(k=5), k=10, seed=42)
    ours = kfold_evaluate(d, CounterfactualOversampler(GenerationParams()), KnnClassifier(k=5), k=10, seed=42)
    assert ours.g_mean >= 0.90
    assert ours.g_mean >= plain.g_mean - 0.01
