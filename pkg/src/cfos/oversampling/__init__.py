# src/cfos/oversampling/__init__.py

"""Oversamplers and the registry that resolves them by name"""

from typing import Optional

from ..core.config import BaselineSpec, GenerationParams
from .base import (
    BaseOversampler,
    IdentityOversampler,
    OversamplerRegistry,
    OversamplingError,
    derive_rng,
    derive_seed,
)
from .baselines import (
    BaselineOversampler,
    BaselineReport,
    adasyn_oversample,
    adasyn_quotas,
    baseline_oversample,
    baseline_oversample_dataset,
    random_oversample,
    smote_oversample,
)
from .counterfactual import (
    CandidateSet,
    CounterfactualOversampler,
    CounterfactualSample,
    GenerationReport,
    default_epsilon,
    generate_for_sample,
    mad_distance,
    oversample,
    oversample_dataset,
    perturb_round,
    search_counterfactual,
)

__all__ = [
    'BaseOversampler',
    'BaselineOversampler',
    'BaselineReport',
    'CandidateSet',
    'CounterfactualOversampler',
    'CounterfactualSample',
    'GenerationReport',
    'IdentityOversampler',
    'OVERSAMPLER_ALIASES',
    'OversamplerRegistry',
    'OversamplingError',
    'adasyn_oversample',
    'adasyn_quotas',
    'baseline_oversample',
    'baseline_oversample_dataset',
    'build_registry',
    'default_epsilon',
    'derive_rng',
    'derive_seed',
    'generate_for_sample',
    'mad_distance',
    'oversample',
    'oversample_dataset',
    'perturb_round',
    'random_oversample',
    'search_counterfactual',
    'smote_oversample',
]

OVERSAMPLER_ALIASES = {
    # counterfactual generation
    'counterfactual': ('cf', 'ours'),
    # baselines
    'random_dup': ('random',),
    'smote': (),
    'adasyn': (),
    # reference row
    'none': ('identity',),
}

def build_registry(
    params: Optional[GenerationParams] = None,
    baseline: Optional[BaselineSpec] = None,
) -> OversamplerRegistry:
    """Registry with every built-in method configured from the given parameters"""
    params = params or GenerationParams()
    baseline = baseline or BaselineSpec()
    registry = OversamplerRegistry()
    registry.register(CounterfactualOversampler(params), OVERSAMPLER_ALIASES['counterfactual'])
    for method in ('random_dup', 'smote', 'adasyn'):
        registry.register(
            BaselineOversampler(baseline.model_copy(update={'method': method})),
            OVERSAMPLER_ALIASES[method],
        )
    registry.register(IdentityOversampler(), OVERSAMPLER_ALIASES['none'])
    return registry
