# src/cfos/numerics/__init__.py

"""Rank statistics and truncated normal sampling"""

from .ranking import FeatureRanking, rank_features, spearman_rho
from .truncnorm import (
    TruncSpec,
    gibbs_standard_truncnorm,
    phi_cdf,
    standard_truncnorm_ppf,
    truncnorm_cdf,
    truncnorm_draw,
    truncnorm_mean,
    truncnorm_sample,
)

__all__ = [
    'FeatureRanking',
    'TruncSpec',
    'gibbs_standard_truncnorm',
    'phi_cdf',
    'rank_features',
    'spearman_rho',
    'standard_truncnorm_ppf',
    'truncnorm_cdf',
    'truncnorm_draw',
    'truncnorm_mean',
    'truncnorm_sample',
]
