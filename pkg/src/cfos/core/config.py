# src/cfos/core/config.py

"""Validated parameter bundles shared by the library and the CLI"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

SamplerName = Literal["inverse", "gibbs"]
ObjectiveName = Literal["distance", "weighted"]
BaselineMethod = Literal["random_dup", "smote", "adasyn"]
ClassifierName = Literal["knn", "ridge"]

MAX_SEED = 2**64 - 1

class GenerationParams(BaseModel):
    """Parameters of counterfactual generation.

    `lambda_` is carried for interface fidelity; it only takes effect with
    objective="weighted". `epsilon=None` resolves to the 25th percentile of
    pairwise MAD distances between the two classes of a pair.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    lambda_: float = Field(1.0, gt=0, alias="lambda")
    epsilon: Optional[float] = Field(None, gt=0)
    trials: int = Field(50, gt=0)
    seed: int = Field(42, ge=0, le=MAX_SEED)
    target_ratio: float = Field(1.0, gt=0, le=1)
    boundary_tau: float = Field(0.15, gt=0)
    ridge_rho: float = Field(1e-3, ge=0)
    exhaustive: bool = False
    all_pairs: bool = False
    sampler: SamplerName = "inverse"
    gibbs_sweeps: int = Field(25, gt=0)
    objective: ObjectiveName = "distance"
    threads: int = Field(1, gt=0)
    log_candidates: bool = False
    max_epsilon_pairs: int = Field(250_000, gt=0)

class BaselineSpec(BaseModel):
    """Parameters of the reference oversamplers"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    method: BaselineMethod = "smote"
    k_neighbors: int = Field(5, gt=0)
    seed: int = Field(42, ge=0, le=MAX_SEED)
    target_ratio: float = Field(1.0, gt=0, le=1)
    all_pairs: bool = False

class SynthSpec(BaseModel):
    """Two-cluster synthetic dataset with planted minority noise points"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_total: int = Field(1000, gt=0)
    n_minority: int = Field(83, gt=0)
    n_noise: int = Field(4, ge=0)
    majority_center: Tuple[float, float] = (0.0, 0.0)
    minority_center: Tuple[float, float] = (4.0, 4.0)
    spread: float = Field(1.0, gt=0)
    seed: int = Field(42, ge=0, le=MAX_SEED)

    @model_validator(mode="after")
    def _check_counts(self) -> "SynthSpec":
        if not self.n_noise <= self.n_minority < self.n_total:
            raise ValueError(
                f"need n_noise <= n_minority < n_total, got "
                f"{self.n_noise}, {self.n_minority}, {self.n_total}"
            )
        return self

class EvaluationSpec(BaseModel):
    """Cross-validation protocol"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    folds: int = Field(10, ge=2)
    runs: int = Field(1, gt=0)
    seed: int = Field(42, ge=0, le=MAX_SEED)
    classifier: ClassifierName = "knn"
    knn_k: int = Field(5, gt=0)
    ridge_rho: float = Field(1e-3, ge=0)
    threads: int = Field(1, gt=0)

class RunConfig(BaseModel):
    """Effective configuration of one CLI invocation, echoed into its report"""
    model_config = ConfigDict(frozen=True, extra="allow")

    subcommand: str
    inputs: List[str] = Field(default_factory=list)
    outputs: List[str] = Field(default_factory=list)
    label_column: Optional[str] = None
    drop_columns: List[str] = Field(default_factory=list)
    pair: Optional[Tuple[int, int]] = None
    seed: int = Field(42, ge=0, le=MAX_SEED)
    threads: int = Field(1, gt=0)
