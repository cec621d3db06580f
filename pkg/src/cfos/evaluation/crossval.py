# src/cfos/evaluation/crossval.py

"""Stratified k-fold evaluation of an oversampler + classifier combination.

Only the training fold is oversampled. Each (run, fold) gets its own split
seed and oversampling seed derived from the top-level seed, so results do
not depend on how folds are scheduled across threads.
"""

# ==================== Imports ====================
import copy
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from sklearn.model_selection import StratifiedKFold

from ..core.logger import get_logger
from ..core.reports import TOOL_VERSION
from ..data.dataset import Dataset
from ..models.base import Classifier
from ..oversampling.base import BaseOversampler, derive_seed
from .metrics import (
    ConfusionMatrix,
    EvaluationError,
    confusion_from_predictions,
    f_measure,
    g_mean,
    per_class_correct,
)

SPLIT_SEED_MODULUS = 2**32

# ==================== Reports ====================
class FoldMetrics(BaseModel):
    run: int
    fold: int
    n_train: int
    n_augmented: int
    n_test: int
    f_measure: float
    g_mean: float
    per_class_f_measure: Dict[str, float]
    per_class_g_mean: Dict[str, float]
    per_class_correct: Dict[str, int]

class MetricsReport(BaseModel):
    """Cross-validated F-measure and G-Mean.

    Aggregates are means over every (run, fold). `*_std_folds` is the
    across-fold standard deviation averaged over runs; `*_std_runs` is the
    standard deviation of the per-run means (0 for a single run).
    """
    tool_version: str = TOOL_VERSION
    method: str
    classifier: str
    folds: int
    requested_folds: int
    runs: int
    seed: int
    positive_classes: List[int]
    positive_labels: List[str]
    averaging: str
    class_sizes: Dict[str, int]
    f_measure: float
    f_measure_std_folds: float
    f_measure_std_runs: float
    g_mean: float
    g_mean_std_folds: float
    g_mean_std_runs: float
    per_class_correct: List[Dict[str, int]] = Field(description="correct test predictions per class, one entry per run")
    leakage_checked_rows: int
    fold_metrics: List[FoldMetrics]
    elapsed_seconds: Optional[float] = None

# ==================== Helpers ====================
def minority_classes(d: Dataset) -> List[int]:
    """Every class except the largest (ties: the larger id is the majority)"""
    sizes = d.class_sizes
    largest = max(sorted(sizes), key=lambda cls: (sizes[cls], cls))
    return [cls for cls in sorted(sizes) if cls != largest]

def effective_folds(d: Dataset, k: int) -> int:
    """k, reduced to the smallest class size when that class cannot fill k folds"""
    if k < 2:
        raise EvaluationError(f"need at least 2 folds, got {k}")
    smallest = min(d.class_sizes.values())
    if smallest >= k:
        return k
    if smallest < 2:
        raise EvaluationError(f"a class with {smallest} sample cannot be stratified")
    get_logger().warning(
        f"smallest class has {smallest} samples; merging folds, using k={smallest} instead of {k}"
    )
    return smallest

def leakage_guard(factual: Dataset, train: Dataset, augmented: Dataset, test_rows: np.ndarray) -> int:
    """Check the test fold is factual and the training fold survived oversampling"""
    factual_rows = {row.tobytes() for row in factual.features}
    for row in test_rows:
        if row.tobytes() not in factual_rows:
            raise EvaluationError("leakage guard: a test row is not a factual row")
    if augmented.n_samples < train.n_samples or not np.array_equal(
        augmented.features[:train.n_samples], train.features
    ):
        raise EvaluationError("leakage guard: oversampling altered the training fold")
    return int(test_rows.shape[0])

# ==================== Fold evaluation ====================
@dataclass(eq=False)
class _FoldTask:
    run: int
    fold: int
    train: np.ndarray
    test: np.ndarray

@dataclass(eq=False)
class _FoldResult:
    task: _FoldTask
    cm: ConfusionMatrix
    n_augmented: int
    checked: int

def _split(d: Dataset, k: int, runs: int, seed: int) -> List[_FoldTask]:
    tasks = []
    for run in range(runs):
        splitter = StratifiedKFold(
            n_splits=k, shuffle=True, random_state=derive_seed(seed, run) % SPLIT_SEED_MODULUS
        )
        for fold, (train, test) in enumerate(splitter.split(d.features, d.labels)):
            tasks.append(_FoldTask(run=run, fold=fold, train=train, test=test))
    return tasks

def _summarize(
    d: Dataset,
    result: _FoldResult,
    positives: List[int],
) -> Tuple[FoldMetrics, float, float]:
    names = d.label_names
    per_f = {names[c]: f_measure(result.cm, c) for c in positives}
    per_g = {names[c]: g_mean(result.cm, c) for c in positives}
    correct = per_class_correct(result.cm)
    metrics = FoldMetrics(
        run=result.task.run,
        fold=result.task.fold,
        n_train=int(result.task.train.size),
        n_augmented=result.n_augmented,
        n_test=int(result.task.test.size),
        f_measure=float(np.mean(list(per_f.values()))),
        g_mean=float(np.mean(list(per_g.values()))),
        per_class_f_measure=per_f,
        per_class_g_mean=per_g,
        per_class_correct={names[c]: int(n) for c, n in zip(result.cm.classes, correct)},
    )
    return metrics, metrics.f_measure, metrics.g_mean

def _spread(values: np.ndarray) -> Tuple[float, float, float]:
    """mean, mean of within-run stds, std of run means for a (runs, folds) grid"""
    return (
        float(values.mean()),
        float(values.std(axis=1).mean()),
        float(values.mean(axis=1).std()),
    )

def kfold_evaluate(
    d: Dataset,
    method: BaseOversampler,
    clf: Classifier,
    k: int = 10,
    runs: int = 1,
    seed: int = 42,
    threads: int = 1,
    record_timing: bool = False,
) -> MetricsReport:
    """Stratified k-fold CV, repeated `runs` times.

    The positive class of a binary dataset is the smaller one. With more
    classes, metrics are computed one-vs-rest for every class except the
    largest and macro-averaged.
    """
    logger = get_logger()
    started = time.perf_counter()
    if runs < 1:
        raise EvaluationError(f"need at least 1 run, got {runs}")
    k_eff = effective_folds(d, k)
    positives = minority_classes(d)
    tasks = _split(d, k_eff, runs, seed)

    def work(task: _FoldTask) -> _FoldResult:
        train = d.subset(task.train)
        augmented, _ = method.resample(train, seed=derive_seed(seed, task.run, task.fold))
        test_rows = d.features[task.test]
        checked = leakage_guard(d, train, augmented, test_rows)
        model = copy.deepcopy(clf).fit(augmented)
        predicted = model.predict(test_rows)
        cm = confusion_from_predictions(d.labels[task.test], predicted, d.classes)
        logger.debug(f"run {task.run} fold {task.fold}: {augmented.n_samples} training rows")
        return _FoldResult(task=task, cm=cm, n_augmented=augmented.n_samples, checked=checked)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(work, tasks))
    else:
        results = [work(task) for task in tasks]
    results.sort(key=lambda r: (r.task.run, r.task.fold))

    fold_metrics, f_values, g_values = [], [], []
    for result in results:
        metrics, f, g = _summarize(d, result, positives)
        fold_metrics.append(metrics)
        f_values.append(f)
        g_values.append(g)
    f_grid = np.asarray(f_values).reshape(runs, k_eff)
    g_grid = np.asarray(g_values).reshape(runs, k_eff)
    f_mean, f_std_folds, f_std_runs = _spread(f_grid)
    g_mean_, g_std_folds, g_std_runs = _spread(g_grid)

    correct_per_run = []
    for run in range(runs):
        totals = sum(per_class_correct(r.cm) for r in results if r.task.run == run)
        correct_per_run.append({d.label_names[c]: int(n) for c, n in zip(d.classes, totals)})

    elapsed = time.perf_counter() - started
    logger.info(
        f"{method.name} + {clf.name}: F={f_mean:.4f} G={g_mean_:.4f} "
        f"over {runs} run(s) x {k_eff} folds, {elapsed:.2f}s"
    )
    return MetricsReport(
        method=method.name,
        classifier=clf.name,
        folds=k_eff,
        requested_folds=k,
        runs=runs,
        seed=seed,
        positive_classes=positives,
        positive_labels=[d.label_names[c] for c in positives],
        averaging="binary" if len(positives) == 1 else "macro over minority classes, one-vs-rest",
        class_sizes={d.label_names[c]: n for c, n in d.class_sizes.items()},
        f_measure=f_mean,
        f_measure_std_folds=f_std_folds,
        f_measure_std_runs=f_std_runs,
        g_mean=g_mean_,
        g_mean_std_folds=g_std_folds,
        g_mean_std_runs=g_std_runs,
        per_class_correct=correct_per_run,
        leakage_checked_rows=sum(r.checked for r in results),
        fold_metrics=fold_metrics,
        elapsed_seconds=elapsed if record_timing else None,
    )

def folds_frame(report: MetricsReport) -> pd.DataFrame:
    """One row per (run, fold) for external plotting"""
    columns = ["run", "fold", "n_train", "n_augmented", "n_test", "f_measure", "g_mean"]
    return pd.DataFrame(
        [{c: getattr(m, c) for c in columns} for m in report.fold_metrics],
        columns=columns,
    )
