# src/cfos/data/synthetic.py

"""Two-cluster synthetic dataset with planted minority noise points"""

import numpy as np

from ..core.config import SynthSpec
from .dataset import Dataset

MINORITY_LABEL = "minority"
MAJORITY_LABEL = "majority"

def make_synthetic(spec: SynthSpec) -> Dataset:
    """Draw majority, minority and noise blocks (in that row order).

    Noise points carry the minority label but are drawn around the majority
    center with half the spread.
    """
    rng = np.random.default_rng(spec.seed)
    n_majority = spec.n_total - spec.n_minority
    n_clean = spec.n_minority - spec.n_noise

    majority = rng.normal(loc=spec.majority_center, scale=spec.spread, size=(n_majority, 2))
    minority = rng.normal(loc=spec.minority_center, scale=spec.spread, size=(n_clean, 2))
    noise = rng.normal(loc=spec.majority_center, scale=spec.spread / 2, size=(spec.n_noise, 2))

    # ids follow the size-ascending convention: the smaller class is 1
    if spec.n_minority < n_majority:
        minority_id, majority_id = 1, 2
    else:
        minority_id, majority_id = 2, 1

    features = np.vstack([majority, minority, noise])
    labels = np.concatenate([
        np.full(n_majority, majority_id),
        np.full(spec.n_minority, minority_id),
    ])
    return Dataset(
        features=features,
        labels=labels,
        feature_names=("x1", "x2"),
        label_names={minority_id: MINORITY_LABEL, majority_id: MAJORITY_LABEL},
        label_column="label",
    )
