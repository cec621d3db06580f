# tests/data/test_dataset.py

# ==================== Imports ====================
import numpy as np
import pytest

from src.cfos.data.dataset import (
    FACTUAL,
    Dataset,
    DatasetError,
    class_pairs,
    compute_feature_stats,
    generation_pairs,
    load_csv,
    samples_needed,
    write_csv,
)
from tests.conftest import make_dataset

# ==================== Helpers ====================
def sized(sizes):
    """1-feature dataset with the given class sizes"""
    labels = np.concatenate([np.full(n, cls) for cls, n in sizes.items()])
    return make_dataset(np.arange(labels.size, dtype=float), labels)

def oracle_mad(column):
    ordered = np.sort(column)
    n = ordered.size
    median = ordered[n // 2] if n % 2 else (ordered[n // 2 - 1] + ordered[n // 2]) / 2
    deviations = np.sort(np.abs(column - median))
    mad = deviations[n // 2] if n % 2 else (deviations[n // 2 - 1] + deviations[n // 2]) / 2
    return median, mad

# ==================== Loading Tests ====================
def test_load_csv_assigns_ids_by_class_size(write_text):
    """Test smallest class gets id 1"""
    path = write_text("small.csv", "x,y,label\n1,2,a\n3,4,a\n5,6,a\n7,8,b\n")
    d = load_csv(path, "label")

    assert d.n_classes == 2
    assert d.label_names == {1: "b", 2: "a"}
    assert d.class_sizes == {1: 1, 2: 3}
    assert d.feature_names == ("x", "y")
    assert d.ingestion.label_mapping == {"b": 1, "a": 2}

def test_load_csv_drops_missing_rows(write_text):
    """Test rows with empty or '?' cells are dropped and counted"""
    path = write_text("nan.csv", "x,y,label\n1,2,a\n,4,a\n5,6,b\n7,8,b\n9,?,a\n")
    d = load_csv(path, "label")

    assert d.n_samples == 3
    assert d.ingestion.rows_read == 5
    assert d.ingestion.rows_dropped == 2
    assert np.all(np.isfinite(d.features))

def test_load_csv_single_nan_cell(write_text):
    path = write_text("one_nan.csv", "x,label\n1,a\nnan,a\n3,b\n4,b\n")
    d = load_csv(path, "label")
    assert d.ingestion.rows_dropped == 1

def test_load_csv_drop_column(write_text):
    path = write_text("ids.csv", "id,x,label\nA1,1,a\nA2,2,a\nA3,3,b\nA4,4,b\n")
    with pytest.raises(DatasetError):
        load_csv(path, "label")
    d = load_csv(path, "label", drop_columns=["id"])
    assert d.feature_names == ("x",)

@pytest.mark.parametrize("text,label,message", [
    ("x,label\n1,a\n2,b\n", "class", "not found"),
    ("x,label\n1,a\n2,a\n", "label", "2 classes"),
    ("x,label\nfoo,a\nbar,b\n", "label", "not numeric"),
])
def test_load_csv_errors(write_text, text, label, message):
    """Test ingestion errors"""
    path = write_text("bad.csv", text)
    with pytest.raises(DatasetError, match=message):
        load_csv(path, label)

def test_load_csv_missing_file(tmp_path):
    with pytest.raises(DatasetError, match="not found"):
        load_csv(tmp_path / "absent.csv", "label")

def test_csv_round_trip_is_bit_exact(tmp_path):
    """Test write_csv then load_csv preserves every value"""
    rng = np.random.default_rng(3)
    d = make_dataset(rng.normal(size=(40, 3)) * 10.0 ** rng.integers(-5, 5, size=(40, 3)),
                     np.r_[np.ones(10), np.full(30, 2)])
    path = write_csv(d, tmp_path / "round.csv")
    back = load_csv(path, "label")

    assert np.array_equal(back.features, d.features)
    assert np.array_equal(back.labels, d.labels)

def test_provenance_column_round_trip(tmp_path):
    d = make_dataset([[0.0], [1.0], [2.0]], [1, 2, 2])
    augmented = d.append([[0.5]], [1], ["smote:0"])
    back = load_csv(write_csv(augmented, tmp_path / "aug.csv"), "label")

    assert back.provenance == (FACTUAL, FACTUAL, FACTUAL, "smote:0")
    assert back.feature_names == ("f0",)

# ==================== Dataset Tests ====================
def test_dataset_rejects_non_finite():
    with pytest.raises(DatasetError):
        make_dataset([[0.0], [np.nan]], [1, 2])

def test_dataset_needs_two_classes():
    with pytest.raises(DatasetError):
        make_dataset([[0.0], [1.0]], [1, 1])

def test_dataset_is_read_only(blobs):
    with pytest.raises(ValueError):
        blobs.features[0, 0] = 1.0

def test_class_index_partitions_rows(blobs):
    rows = np.sort(np.concatenate(list(blobs.class_index.values())))
    assert np.array_equal(rows, np.arange(blobs.n_samples))
    assert sum(blobs.class_sizes.values()) == blobs.n_samples

def test_append_preserves_factual_rows(blobs):
    augmented = blobs.append([[1.0, 2.0]], [1], ["counterfactual:40"])

    assert augmented.n_samples == blobs.n_samples + 1
    assert augmented.features[:blobs.n_samples].tobytes() == blobs.features.tobytes()
    assert augmented.provenance[-1] == "counterfactual:40"
    assert augmented.provenance[0] == FACTUAL

def test_imbalance_ratio(blobs):
    assert blobs.imbalance_ratio() == pytest.approx(4.0)
    assert blobs.imbalance_ratio((1, 2)) == pytest.approx(4.0)

# ==================== Feature Statistics Tests ====================
def test_stats_simple_column():
    d = make_dataset([1.0, 2.0, 3.0, 4.0, 5.0], [1, 1, 2, 2, 2])
    stats = compute_feature_stats(d)
    assert stats.median[0] == 3
    assert stats.mad[0] == 1
    assert stats.minimum[0] == 1
    assert stats.maximum[0] == 5

def test_stats_constant_column():
    stats = compute_feature_stats(make_dataset([7.0, 7.0, 7.0], [1, 2, 2]))
    assert stats.mad[0] == 0
    assert stats.std[0] == 0
    assert not stats.mad_positive[0]
    assert not stats.perturbable[0]

def test_stats_skewed_column():
    stats = compute_feature_stats(make_dataset([1.0, 1.0, 2.0, 2.0, 4.0, 6.0, 9.0], [1, 1, 1, 2, 2, 2, 2]))
    assert stats.mad[0] == 1

def test_stats_match_sort_oracle():
    """Test median and MAD against a sort-based oracle on random datasets"""
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(2, 30))
        m = int(rng.integers(1, 4))
        features = rng.integers(-20, 20, size=(n, m)) / 4.0
        labels = np.r_[1, 2, rng.integers(1, 3, size=n - 2)]
        stats = compute_feature_stats(make_dataset(features, labels))
        for col in range(m):
            median, mad = oracle_mad(features[:, col])
            assert stats.median[col] == median
            assert stats.mad[col] == mad
            assert stats.minimum[col] <= stats.maximum[col]
            assert stats.std[col] >= 0

def test_stats_to_dict_uses_feature_names(blobs):
    described = compute_feature_stats(blobs).to_dict()
    assert list(described) == ["f0", "f1"]
    assert set(described["f0"]) == {"min", "max", "std", "median", "mad"}

# ==================== Class Pair Tests ====================
def test_class_pairs_binary():
    assert class_pairs(sized({1: 10, 2: 100})) == [(1, 2)]

def test_class_pairs_five_classes():
    d = sized({1: 28, 2: 88, 3: 115, 4: 329, 5: 4913})
    pairs = class_pairs(d)
    assert len(pairs) == 10
    assert pairs == [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]

def test_class_pairs_equal_sizes():
    assert class_pairs(sized({1: 50, 2: 50})) == []

def test_class_pairs_count_matches_definition():
    rng = np.random.default_rng(5)
    for _ in range(20):
        sizes = {c: int(n) for c, n in enumerate(rng.integers(1, 6, size=4), start=1)}
        expected = sum(1 for i in sizes for j in sizes if sizes[i] < sizes[j])
        assert len(class_pairs(sized(sizes))) == expected

def test_generation_pairs_default_uses_largest_class():
    d = sized({1: 5, 2: 8, 3: 20})
    assert generation_pairs(d) == [(1, 3), (2, 3)]
    assert generation_pairs(d, all_pairs=True) == [(1, 2), (1, 3), (2, 3)]

def test_samples_needed():
    assert samples_needed({1: 83, 2: 917}, (1, 2), 1.0) == 834
    assert samples_needed({1: 83, 2: 917}, (1, 2), 0.5) == 375
    assert samples_needed({1: 50, 2: 50}, (1, 2), 1.0) == 0
