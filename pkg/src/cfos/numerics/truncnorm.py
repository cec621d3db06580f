# src/cfos/numerics/truncnorm.py

"""Standard normal CDF and truncated normal perturbation sampling.

Two samplers are provided. `inverse` is exact inverse-transform sampling on
the truncated CDF, evaluated in log space so the tails stay accurate. `gibbs`
is the one-latent-variable slice scheme: u | z ~ U(0, exp(-z^2/2)), then
z | u ~ U([a, b] intersected with [-sqrt(-2 ln u), sqrt(-2 ln u)]).
"""

# ==================== Imports ====================
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri_exp

ArrayLike = Union[float, np.ndarray]
SAMPLERS = ("inverse", "gibbs")

# ==================== Types ====================
@dataclass(frozen=True)
class TruncSpec:
    """Normal perturbation around a factual value, truncated to [lower, upper]"""
    center: float
    sigma: float
    lower: float
    upper: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.lower <= self.center <= self.upper:
            raise ValueError(
                f"center {self.center} outside [{self.lower}, {self.upper}]"
            )

    @property
    def standard_bounds(self) -> Tuple[float, float]:
        """Bounds of the standardized perturbation z = delta / sigma"""
        return (
            (self.lower - self.center) / self.sigma,
            (self.upper - self.center) / self.sigma,
        )

# ==================== CDF ====================
def phi_cdf(z: ArrayLike) -> ArrayLike:
    """Standard normal CDF (erfc-based in the tails)"""
    result = ndtr(z)
    return float(result) if np.ndim(result) == 0 else result

def truncnorm_cdf(x: ArrayLike, spec: TruncSpec) -> ArrayLike:
    """CDF of center + delta under the truncated perturbation density"""
    a, b = spec.standard_bounds
    z = (np.asarray(x, dtype=np.float64) - spec.center) / spec.sigma
    mass = ndtr(b) - ndtr(a)
    cdf = np.clip((ndtr(np.clip(z, a, b)) - ndtr(a)) / mass, 0.0, 1.0)
    return float(cdf) if np.ndim(cdf) == 0 else cdf

def truncnorm_mean(spec: TruncSpec) -> float:
    """Mean of the perturbation delta (not of center + delta)"""
    a, b = spec.standard_bounds
    pdf = lambda t: np.exp(-0.5 * t * t) / np.sqrt(2 * np.pi)
    return float(spec.sigma * (pdf(a) - pdf(b)) / (ndtr(b) - ndtr(a)))

# ==================== Standard truncated normal ====================
def standard_truncnorm_ppf(a: ArrayLike, b: ArrayLike, u: ArrayLike) -> np.ndarray:
    """Quantile of N(0, 1) truncated to [a, b] at probability u.

    Intervals entirely right of zero are mirrored into the left tail, where
    log Phi is accurate; Phi(lo) + u (Phi(hi) - Phi(lo)) is then evaluated as
    log Phi(hi) + log(r + u (1 - r)) with r = Phi(lo) / Phi(hi).
    """
    a, b, u = np.broadcast_arrays(
        np.asarray(a, dtype=np.float64),
        np.asarray(b, dtype=np.float64),
        np.asarray(u, dtype=np.float64),
    )
    flip = a > 0
    lo = np.where(flip, -b, a)
    hi = np.where(flip, -a, b)
    u = np.where(flip, 1.0 - u, u)

    log_lo = log_ndtr(lo)
    log_hi = log_ndtr(hi)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = np.exp(log_lo - log_hi)
        log_p = log_hi + np.log(r + u * (1.0 - r))
        z = ndtri_exp(np.minimum(log_p, 0.0))
    z = np.clip(np.nan_to_num(z, nan=0.0), lo, hi)
    return np.where(flip, -z, z)

def gibbs_standard_truncnorm(
    a: ArrayLike,
    b: ArrayLike,
    rng: np.random.Generator,
    sweeps: int = 25,
    size: Optional[Tuple[int, ...]] = None,
) -> np.ndarray:
    """Latent-variable Gibbs draws from N(0, 1) truncated to [a, b].

    Each element runs its own chain from the clipped mode for `sweeps` sweeps.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    shape = size if size is not None else np.broadcast(a, b).shape
    a = np.broadcast_to(a, shape)
    b = np.broadcast_to(b, shape)

    z = np.clip(np.zeros(shape), a, b)
    for _ in range(sweeps):
        # latent slice height, kept in log space: ln u = ln U - z^2 / 2
        log_u = np.log1p(-rng.random(shape)) - 0.5 * z * z
        half_width = np.sqrt(-2.0 * log_u)
        lo = np.maximum(a, -half_width)
        hi = np.minimum(b, half_width)
        z = lo + rng.random(shape) * (hi - lo)
    return np.clip(z, a, b)

# ==================== Perturbation sampling ====================
def truncnorm_draw(
    center: ArrayLike,
    sigma: ArrayLike,
    lower: ArrayLike,
    upper: ArrayLike,
    rng: np.random.Generator,
    size: Optional[Tuple[int, ...]] = None,
    sampler: str = "inverse",
    sweeps: int = 25,
) -> np.ndarray:
    """Perturbed values center + delta, guaranteed inside [lower, upper].

    Degenerate entries (sigma = 0 or upper = lower) return the center
    unchanged; they still consume their share of the random stream.
    """
    if sampler not in SAMPLERS:
        raise ValueError(f"unknown sampler {sampler!r}, expected one of {SAMPLERS}")
    center, sigma, lower, upper = (
        np.asarray(v, dtype=np.float64) for v in (center, sigma, lower, upper)
    )
    shape = size if size is not None else np.broadcast(center, sigma, lower, upper).shape
    degenerate = np.broadcast_to((sigma <= 0) | (upper <= lower), shape)
    safe_sigma = np.where(sigma > 0, sigma, 1.0)
    a = np.broadcast_to((lower - center) / safe_sigma, shape)
    b = np.broadcast_to((upper - center) / safe_sigma, shape)

    if sampler == "inverse":
        z = standard_truncnorm_ppf(a, b, rng.random(shape))
    else:
        z = gibbs_standard_truncnorm(a, b, rng, sweeps=sweeps, size=shape)

    values = np.clip(center + safe_sigma * z, lower, upper)
    return np.where(degenerate, np.broadcast_to(center, shape), values)

def _contain(center: float, delta: float, lower: float, upper: float) -> float:
    """Shrink delta by ulps until center + delta lies in [lower, upper]"""
    for _ in range(64):
        x = center + delta
        if lower <= x <= upper:
            return delta
        delta = float(np.nextafter(delta, 0.0))
    return 0.0

def truncnorm_sample(
    spec: TruncSpec,
    rng: np.random.Generator,
    sampler: str = "inverse",
    sweeps: int = 25,
) -> float:
    """One perturbation delta with lower <= center + delta <= upper"""
    if spec.upper <= spec.lower:
        return 0.0
    value = float(truncnorm_draw(
        spec.center, spec.sigma, spec.lower, spec.upper, rng,
        size=(), sampler=sampler, sweeps=sweeps,
    ))
    return _contain(spec.center, value - spec.center, spec.lower, spec.upper)
