# src/cfos/oversampling/counterfactual.py

"""Counterfactual oversampling.

A frozen ridge model is trained on the factual rows of a (minority i,
majority j) pair. Each majority row the model predicts as j is perturbed
in rounds: round m redraws the m highest-ranked features T times from
truncated normals bounded by the observed feature range. A trial is
accepted when its MAD distance to the factual row is below epsilon and the
model predicts i for it. The accepted candidate with the smallest distance
over all rounds becomes a new minority row.
"""

# ==================== Imports ====================
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.spatial.distance import cdist

from ..core.config import GenerationParams
from ..core.logger import get_logger
from ..core.reports import TOOL_VERSION
from ..data.dataset import (
    ClassPair,
    Dataset,
    FeatureStats,
    compute_feature_stats,
    generation_pairs,
    samples_needed,
)
from ..models.ridge import LinearModel, train_ridge
from ..numerics.ranking import FeatureRanking, rank_features
from ..numerics.truncnorm import truncnorm_draw
from .base import BaseOversampler, OversamplingError, derive_rng

STREAM_SCHEME = "SeedSequence(seed, spawn_key=(row, round)); trial t = row t of the round's draws"
EPSILON_QUANTILE = 25.0
MINORITY_TARGET = 0.0

# ==================== Types ====================
@dataclass(frozen=True, eq=False)
class Candidate:
    """One accepted perturbation"""
    delta: np.ndarray
    distance: float
    round: int
    trial: int
    score: float

@dataclass(eq=False)
class CandidateSet:
    """All accepted perturbations of one factual row, round-major then trial order"""
    factual_index: int
    candidates: List[Candidate] = field(default_factory=list)

    @property
    def distances(self) -> np.ndarray:
        return np.array([c.distance for c in self.candidates], dtype=np.float64)

@dataclass(frozen=True, eq=False)
class CounterfactualSample:
    """A generated minority row and where it came from"""
    values: np.ndarray
    source_index: int
    distance: float
    label: int
    round: int
    trial: int
    score: float
    candidates: Optional[CandidateSet] = None

@dataclass(frozen=True, eq=False)
class RoundResult:
    """Accepted trials of one round"""
    round: int
    trials: np.ndarray
    values: np.ndarray
    deltas: np.ndarray
    distances: np.ndarray
    scores: np.ndarray

    @property
    def n_accepted(self) -> int:
        return int(self.trials.shape[0])

@dataclass(eq=False)
class SearchResult:
    """Outcome of the round-based search for one factual row"""
    sample: Optional[CounterfactualSample]
    accepted_per_round: List[int]
    feature_draws: int
    misclassified: bool = False

# ==================== Reports ====================
class DistanceSummary(BaseModel):
    quantiles: Dict[str, Optional[float]]
    histogram_edges: List[float] = Field(default_factory=list)
    histogram_counts: List[int] = Field(default_factory=list)

class GenerationReport(BaseModel):
    """Report of one counterfactual oversampling run on one class pair"""
    tool_version: str = TOOL_VERSION
    method: str = "counterfactual"
    pair: Tuple[int, int]
    pair_labels: Tuple[str, str]
    params: Dict[str, Any]
    epsilon: float
    epsilon_source: str
    stream_scheme: str = STREAM_SCHEME
    ranking_order: List[int]
    ranking_rho: List[float]
    model: Dict[str, Any]
    needed: int
    cap: int
    attempted: int
    succeeded: int
    skipped_misclassified: int
    per_round_accepted: List[int]
    per_round_selected: List[int]
    feature_draws: int
    distances: DistanceSummary
    elapsed_seconds: Optional[float] = None

# ==================== Distance ====================
def mad_distances(x: np.ndarray, candidates: np.ndarray, stats: FeatureStats) -> np.ndarray:
    """Row-wise MAD-weighted L1 distance; features with MAD = 0 are skipped"""
    mask = stats.mad_positive
    diffs = np.abs(np.atleast_2d(candidates)[:, mask] - np.asarray(x, dtype=np.float64)[mask])
    return np.sum(diffs / stats.mad[mask], axis=1)

def mad_distance(x: np.ndarray, x_prime: np.ndarray, stats: FeatureStats) -> float:
    """sum over MAD-positive features of |x_m - x'_m| / MAD_m"""
    x = np.asarray(x, dtype=np.float64)
    x_prime = np.asarray(x_prime, dtype=np.float64)
    if x.shape != x_prime.shape or x.shape != (stats.n_features,):
        raise ValueError(f"dimension mismatch: {x.shape}, {x_prime.shape}, {stats.n_features} features")
    return float(mad_distances(x, x_prime.reshape(1, -1), stats)[0])

def default_epsilon(
    d: Dataset,
    pair: ClassPair,
    stats: FeatureStats,
    max_pairs: int = 250_000,
    seed: int = 42,
) -> float:
    """25th percentile of MAD distances between rows of class i and class j.

    Above `max_pairs` pairs, a seeded uniform sample of pairs is used.
    """
    i, j = pair
    mask = stats.mad_positive
    if not mask.any():
        get_logger().warning("every feature has MAD = 0; distances are identically 0, using epsilon = 1")
        return 1.0
    xi = d.rows_of(i)[:, mask] / stats.mad[mask]
    xj = d.rows_of(j)[:, mask] / stats.mad[mask]

    if xi.shape[0] * xj.shape[0] <= max_pairs:
        distances = cdist(xi, xj, metric="cityblock").ravel()
    else:
        rng = derive_rng(seed, i, j)
        a = rng.integers(0, xi.shape[0], size=max_pairs)
        b = rng.integers(0, xj.shape[0], size=max_pairs)
        distances = np.abs(xi[a] - xj[b]).sum(axis=1)

    epsilon = float(np.percentile(distances, EPSILON_QUANTILE))
    if epsilon > 0:
        return epsilon
    positive = distances[distances > 0]
    fallback = float(positive.min()) if positive.size else 1.0
    get_logger().warning(f"25th-percentile distance is 0 for pair {pair}; using epsilon = {fallback}")
    return fallback

# ==================== Round-based search ====================
def _round_arrays(
    x_n: np.ndarray,
    m: int,
    ranking: FeatureRanking,
    stats: FeatureStats,
    model: LinearModel,
    params: GenerationParams,
    rng: np.random.Generator,
) -> RoundResult:
    """T trials on the top-m features; keeps the accepted ones"""
    features = ranking.top(m)
    trials = params.trials
    # MAD = 0 features keep x_n's value: they are free under the distance
    movable = stats.perturbable[features] & stats.mad_positive[features]
    drawn = truncnorm_draw(
        center=x_n[features],
        sigma=np.where(movable, stats.std[features], 0.0),
        lower=stats.minimum[features],
        upper=stats.maximum[features],
        rng=rng,
        size=(trials, m),
        sampler=params.sampler,
        sweeps=params.gibbs_sweeps,
    )
    perturbed = np.tile(x_n, (trials, 1))
    perturbed[:, features] = drawn

    distances = mad_distances(x_n, perturbed, stats)
    scores = model.score(perturbed)
    accepted = (distances < params.epsilon) & (scores < model.threshold)
    keep = np.flatnonzero(accepted)
    return RoundResult(
        round=m,
        trials=keep,
        values=perturbed[keep],
        deltas=perturbed[keep] - x_n,
        distances=distances[keep],
        scores=scores[keep],
    )

def perturb_round(
    x_n: np.ndarray,
    m: int,
    ranking: FeatureRanking,
    stats: FeatureStats,
    model: LinearModel,
    params: GenerationParams,
    rng: np.random.Generator,
) -> List[Tuple[np.ndarray, float]]:
    """Accepted (delta, distance) pairs of round m (1 <= m <= M)"""
    if not 1 <= m <= stats.n_features:
        raise ValueError(f"round m={m} outside 1..{stats.n_features}")
    if params.epsilon is None:
        raise OversamplingError("epsilon must be resolved before perturbing")
    result = _round_arrays(np.asarray(x_n, dtype=np.float64), m, ranking, stats, model, params, rng)
    return [(result.deltas[k], float(result.distances[k])) for k in range(result.n_accepted)]

def search_counterfactual(
    x_n: np.ndarray,
    n: int,
    ranking: FeatureRanking,
    stats: FeatureStats,
    model: LinearModel,
    params: GenerationParams,
    rng: Optional[np.random.Generator] = None,
    log_candidates: bool = False,
) -> SearchResult:
    """Run rounds m = 1..M and pick the best candidate of their union.

    Without an explicit `rng`, round m of row n draws from the stream
    derived from (params.seed, n, m).
    """
    if params.epsilon is None:
        raise OversamplingError("epsilon must be resolved before generating")
    x_n = np.asarray(x_n, dtype=np.float64)
    i, j = model.pair
    n_features = stats.n_features
    if model.predict(x_n) != j:
        return SearchResult(
            sample=None, accepted_per_round=[0] * n_features, feature_draws=0, misclassified=True
        )

    rounds = []
    for m in range(1, n_features + 1):
        stream = rng if rng is not None else derive_rng(params.seed, n, m)
        rounds.append(_round_arrays(x_n, m, ranking, stats, model, params, stream))
    accepted_per_round = [r.n_accepted for r in rounds]
    feature_draws = params.trials * n_features * (n_features + 1) // 2

    candidates = None
    if log_candidates:
        candidates = CandidateSet(factual_index=n)
        for r in rounds:
            for k in range(r.n_accepted):
                candidates.candidates.append(Candidate(
                    delta=r.deltas[k],
                    distance=float(r.distances[k]),
                    round=r.round,
                    trial=int(r.trials[k]),
                    score=float(r.scores[k]),
                ))

    if sum(accepted_per_round) == 0:
        return SearchResult(sample=None, accepted_per_round=accepted_per_round, feature_draws=feature_draws)

    distances = np.concatenate([r.distances for r in rounds])
    scores = np.concatenate([r.scores for r in rounds])
    if params.objective == "weighted":
        cost = params.lambda_ * (scores - MINORITY_TARGET) ** 2 + distances
    else:
        cost = distances
    # argmin returns the first minimum: smaller round, then earlier trial
    best = int(np.argmin(cost))
    offsets = np.cumsum([0] + accepted_per_round)
    r_index = int(np.searchsorted(offsets, best, side="right") - 1)
    chosen = rounds[r_index]
    k = best - offsets[r_index]

    sample = CounterfactualSample(
        values=chosen.values[k].copy(),
        source_index=n,
        distance=float(chosen.distances[k]),
        label=i,
        round=chosen.round,
        trial=int(chosen.trials[k]),
        score=float(chosen.scores[k]),
        candidates=candidates,
    )
    return SearchResult(sample=sample, accepted_per_round=accepted_per_round, feature_draws=feature_draws)

def generate_for_sample(
    x_n: np.ndarray,
    n: int,
    ranking: FeatureRanking,
    stats: FeatureStats,
    model: LinearModel,
    params: GenerationParams,
    rng: Optional[np.random.Generator] = None,
    log_candidates: Optional[bool] = None,
) -> Optional[CounterfactualSample]:
    """Minimal-inversion counterfactual of one majority row, or None.

    None is returned when every round is empty, and also when the model
    does not predict the majority class for x_n in the first place.
    """
    if log_candidates is None:
        log_candidates = params.log_candidates
    return search_counterfactual(x_n, n, ranking, stats, model, params, rng, log_candidates).sample

# ==================== Oversampling ====================
@dataclass(eq=False)
class PairOutcome:
    """Generated rows and the report of one pair"""
    samples: List[CounterfactualSample]
    report: GenerationReport
    model: LinearModel

def _summarize_distances(distances: Sequence[float]) -> DistanceSummary:
    keys = ("min", "q25", "median", "q75", "max")
    if len(distances) == 0:
        return DistanceSummary(quantiles={k: None for k in keys})
    values = np.asarray(distances, dtype=np.float64)
    q = np.percentile(values, [0, 25, 50, 75, 100])
    counts, edges = np.histogram(values, bins=10)
    return DistanceSummary(
        quantiles={k: float(v) for k, v in zip(keys, q)},
        histogram_edges=[float(e) for e in edges],
        histogram_counts=[int(c) for c in counts],
    )

def _log_candidates(sample: CounterfactualSample) -> None:
    logger = get_logger()
    for c in sample.candidates.candidates:
        chosen = c.round == sample.round and c.trial == sample.trial
        logger.debug(
            f"candidate row={sample.source_index} round={c.round} trial={c.trial} "
            f"distance={c.distance:.6g} score={c.score:.6g}{' selected' if chosen else ''}"
        )

def _run_pair(
    d: Dataset,
    pair: ClassPair,
    params: GenerationParams,
    sizes: Dict[int, int],
    record_timing: bool = False,
) -> PairOutcome:
    logger = get_logger()
    started = time.perf_counter()
    i, j = pair
    stats = compute_feature_stats(d)
    model = train_ridge(d, pair, params.ridge_rho)
    ranking = rank_features(d, pair)
    if params.epsilon is None:
        epsilon = default_epsilon(d, pair, stats, params.max_epsilon_pairs, params.seed)
        epsilon_source = "q25_pairwise"
    else:
        epsilon = params.epsilon
        epsilon_source = "user"
    effective = params.model_copy(update={"epsilon": epsilon})

    majority_rows = d.class_index[j]
    needed = samples_needed(sizes, pair, params.target_ratio)
    cap = majority_rows.size if params.exhaustive else min(needed, majority_rows.size)

    samples: List[CounterfactualSample] = []
    accepted = np.zeros(d.n_features, dtype=np.int64)
    selected = np.zeros(d.n_features, dtype=np.int64)
    attempted = skipped = draws = 0

    def work(row: int) -> SearchResult:
        return search_counterfactual(
            d.features[row], int(row), ranking, stats, model, effective,
            log_candidates=effective.log_candidates,
        )

    chunk = max(1, effective.threads * 8)
    executor = ThreadPoolExecutor(max_workers=effective.threads) if effective.threads > 1 else None
    try:
        position = 0
        while len(samples) < cap and position < majority_rows.size:
            rows = majority_rows[position:position + chunk]
            position += rows.size
            results = executor.map(work, rows) if executor else map(work, rows)
            for row, result in zip(rows, results):
                if len(samples) >= cap:
                    break
                if result.misclassified:
                    skipped += 1
                    continue
                attempted += 1
                draws += result.feature_draws
                accepted += result.accepted_per_round
                if result.sample is not None:
                    samples.append(result.sample)
                    selected[result.sample.round - 1] += 1
                    if result.sample.candidates is not None:
                        _log_candidates(result.sample)
    finally:
        if executor:
            executor.shutdown(wait=True)

    elapsed = time.perf_counter() - started
    logger.info(
        f"pair {pair}: needed {needed}, attempted {attempted}, generated {len(samples)}, "
        f"epsilon {epsilon:.6g} ({epsilon_source}), {elapsed:.2f}s"
    )

    params_dump = effective.model_dump(mode="json", by_alias=True)
    report = GenerationReport(
        pair=pair,
        pair_labels=(d.label_names[i], d.label_names[j]),
        params=params_dump,
        epsilon=epsilon,
        epsilon_source=epsilon_source,
        ranking_order=list(ranking.order),
        ranking_rho=[float(r) for r in ranking.rho],
        model=model.to_dict(),
        needed=needed,
        cap=int(cap),
        attempted=attempted,
        succeeded=len(samples),
        skipped_misclassified=skipped,
        per_round_accepted=[int(a) for a in accepted],
        per_round_selected=[int(s) for s in selected],
        feature_draws=draws,
        distances=_summarize_distances([s.distance for s in samples]),
        elapsed_seconds=elapsed if record_timing else None,
    )
    return PairOutcome(samples=samples, report=report, model=model)

def _append_samples(d: Dataset, samples: Sequence[CounterfactualSample]) -> Dataset:
    if not samples:
        return d
    return d.append(
        features=np.vstack([s.values for s in samples]),
        labels=[s.label for s in samples],
        provenance=[f"counterfactual:{s.source_index}" for s in samples],
    )

def oversample(
    d: Dataset,
    pair: ClassPair,
    params: GenerationParams,
    record_timing: bool = False,
) -> Tuple[Dataset, GenerationReport]:
    """Augment class i of one pair with counterfactuals of class j rows"""
    i, j = pair
    if i not in d.class_index or j not in d.class_index:
        raise OversamplingError(f"pair {pair} not present in dataset")
    outcome = _run_pair(d, pair, params, d.class_sizes, record_timing)
    return _append_samples(d, outcome.samples), outcome.report

def oversample_dataset(
    d: Dataset,
    params: GenerationParams,
    pairs: Optional[Sequence[ClassPair]] = None,
    record_timing: bool = False,
) -> Tuple[Dataset, List[GenerationReport], List[LinearModel]]:
    """Oversample every selected pair against the factual dataset.

    Later pairs of the same minority class only generate what is still
    missing after earlier pairs. Rows are appended pair by pair, each pair's
    rows in factual row order.
    """
    if pairs is None:
        pairs = generation_pairs(d, params.all_pairs)
    sizes = dict(d.class_sizes)
    samples: List[CounterfactualSample] = []
    reports: List[GenerationReport] = []
    models: List[LinearModel] = []
    for pair in pairs:
        outcome = _run_pair(d, tuple(pair), params, sizes, record_timing)
        sizes[pair[0]] += len(outcome.samples)
        samples.extend(outcome.samples)
        reports.append(outcome.report)
        models.append(outcome.model)
    return _append_samples(d, samples), reports, models

# ==================== Handle ====================
class CounterfactualOversampler(BaseOversampler):
    """Counterfactual oversampling handle"""
    def __init__(self, params: Optional[GenerationParams] = None):
        super().__init__(
            name="counterfactual",
            description="minimal-inversion counterfactuals of majority rows",
        )
        self.params = params or GenerationParams()

    def resample(self, d: Dataset, seed: Optional[int] = None) -> Tuple[Dataset, Dict[str, Any]]:
        params = self.params if seed is None else self.params.model_copy(update={"seed": seed})
        augmented, reports, _ = oversample_dataset(d, params)
        return augmented, {
            "method": self.name,
            "added": augmented.n_samples - d.n_samples,
            "pairs": [r.model_dump(mode="json") for r in reports],
        }
