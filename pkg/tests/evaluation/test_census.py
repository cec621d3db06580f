# tests/evaluation/test_census.py

# ==================== Imports ====================
import numpy as np
import pytest

from src.cfos.core.config import BaselineSpec, GenerationParams
from src.cfos.data.dataset import FACTUAL
from src.cfos.evaluation.census import (
    RegionCounts,
    census_report,
    generated_minority_rows,
    infer_method,
    region_census,
)
from src.cfos.evaluation.metrics import EvaluationError
from src.cfos.models.ridge import LinearModel
from src.cfos.oversampling.baselines import baseline_oversample
from src.cfos.oversampling.counterfactual import oversample
from tests.conftest import make_dataset

# ==================== Helpers ====================
def line_model(weight=1.0, intercept=0.0) -> LinearModel:
    return LinearModel(weights=np.array([weight]), intercept=intercept, pair=(1, 2), reg=0.0)

@pytest.fixture
def factual():
    return make_dataset([[0.0], [0.2], [0.8], [1.0], [0.9]], [1, 1, 2, 2, 2],
                        label_names={1: "sick", 2: "healthy"})

# ==================== Region Tests ====================
def test_majority_region(factual):
    counts = region_census(factual, [[0.7]], line_model(), tau=0.15)
    assert counts == RegionCounts(majority=1)

def test_boundary_band_is_closed_below(factual):
    model = line_model(weight=0.0, intercept=0.5 - 0.15)
    assert region_census(factual, [[3.0]], model, tau=0.15).boundary_minority == 1

def test_interior_region(factual):
    counts = region_census(factual, [[0.1], [0.34], [0.36], [0.49], [0.5]], line_model(), tau=0.15)
    assert counts == RegionCounts(majority=1, boundary_minority=2, interior_minority=2)
    assert counts.total == 5
    assert counts.fractions() == {"majority": 0.2, "boundary_minority": 0.4, "interior_minority": 0.4}

def test_counts_sum_and_order_invariance(factual):
    rows = np.random.default_rng(0).uniform(-1, 2, size=(200, 1))
    forward = region_census(factual, rows, line_model(), tau=0.2)
    backward = region_census(factual, rows[::-1], line_model(), tau=0.2)
    assert forward == backward
    assert forward.total == 200

def test_empty_rows(factual):
    counts = region_census(factual, np.empty((0, 1)), line_model(), tau=0.15)
    assert counts.total == 0
    assert counts.fractions()["majority"] is None

@pytest.mark.parametrize("tau", [0.0, -0.1])
def test_tau_must_be_positive(factual, tau):
    with pytest.raises(EvaluationError):
        region_census(factual, [[0.1]], line_model(), tau=tau)

def test_model_dimension_mismatch(factual):
    model = LinearModel(weights=np.zeros(2), intercept=0.0, pair=(1, 2), reg=0.0)
    with pytest.raises(EvaluationError):
        region_census(factual, [[0.1]], model, tau=0.15)

# ==================== Generated Rows Tests ====================
def test_generated_rows_by_provenance(factual):
    augmented = factual.append([[0.45], [0.3]], [1, 1], ["smote:0", "smote:1"])
    rows = generated_minority_rows(augmented, factual, line_model())
    assert rows.tolist() == [[0.45], [0.3]]

def test_generated_rows_matched_by_label_name(factual):
    """Test rows are matched by label text when ids differ between files"""
    # augmented file read back with swapped ids: "sick" is now the larger class
    augmented = make_dataset(
        [[0.0], [0.2], [0.8], [1.0], [0.9], [0.4], [0.45], [0.35]],
        [2, 2, 1, 1, 1, 2, 2, 2],
        label_names={1: "healthy", 2: "sick"},
        provenance=(FACTUAL,) * 5 + ("counterfactual:2", "counterfactual:3", "counterfactual:4"),
    )
    rows = generated_minority_rows(augmented, factual, line_model())
    assert rows.tolist() == [[0.4], [0.45], [0.35]]

def test_generated_rows_without_provenance(factual):
    augmented = make_dataset(
        np.r_[factual.features[:, 0], 0.42], [1, 1, 2, 2, 2, 1], label_names={1: "sick", 2: "healthy"},
    )
    assert generated_minority_rows(augmented, factual, line_model()).tolist() == [[0.42]]

def test_infer_method(factual):
    assert infer_method(factual) == "unknown"
    augmented = factual.append([[0.4], [0.3], [0.1]], [1, 1, 1], ["adasyn:0", "adasyn:1", "smote:0"])
    assert infer_method(augmented) == "adasyn"
    assert infer_method(factual.append([[0.4]], [1], [FACTUAL])) == "none"

def test_census_report(factual):
    augmented = factual.append([[0.45], [0.1]], [1, 1], ["counterfactual:2", "counterfactual:3"])
    report = census_report(factual, augmented, line_model(), tau=0.15)
    assert report.method == "counterfactual"
    assert report.generated == 2
    assert report.counts == RegionCounts(boundary_minority=1, interior_minority=1)
    assert report.pair == (1, 2)
    assert report.model["weights"] == [1.0]

# ==================== Method Comparison Tests ====================
def test_counterfactuals_concentrate_near_boundary(synthetic):
    """Test counterfactual rows sit in the boundary band more often than SMOTE or ADASYN rows"""
    augmented, report = oversample(synthetic, (1, 2), GenerationParams())
    model = LinearModel.from_dict(report.model)
    cf = census_report(synthetic, augmented, model, tau=0.15)

    fractions = {}
    for method in ("smote", "adasyn"):
        other, _ = baseline_oversample(synthetic, (1, 2), BaselineSpec(method=method))
        fractions[method] = census_report(synthetic, other, model, tau=0.15).fractions["boundary_minority"]

    assert cf.counts.majority == 0
    assert cf.generated > 0
    assert cf.fractions["boundary_minority"] > fractions["smote"]
    assert cf.fractions["boundary_minority"] > fractions["adasyn"]
