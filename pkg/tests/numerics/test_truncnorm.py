# tests/numerics/test_truncnorm.py

# ==================== Imports ====================
import numpy as np
import pytest
from scipy import integrate, stats

from src.cfos.numerics.truncnorm import (
    TruncSpec,
    phi_cdf,
    standard_truncnorm_ppf,
    truncnorm_cdf,
    truncnorm_draw,
    truncnorm_mean,
    truncnorm_sample,
)

# ==================== Helpers ====================
def draws(spec: TruncSpec, n: int, seed: int = 0, sampler: str = "inverse") -> np.ndarray:
    """n perturbed values center + delta"""
    rng = np.random.default_rng(seed)
    return truncnorm_draw(spec.center, spec.sigma, spec.lower, spec.upper, rng, size=(n,), sampler=sampler)

def random_spec(rng: np.random.Generator) -> TruncSpec:
    center = rng.uniform(-10, 10)
    sigma = rng.uniform(0.1, 3.0)
    return TruncSpec(
        center=center,
        sigma=sigma,
        lower=center - rng.uniform(0.0, 3.0) * sigma,
        upper=center + rng.uniform(0.05, 3.0) * sigma,
    )

# ==================== CDF Tests ====================
def test_phi_cdf_examples():
    assert phi_cdf(0.0) == 0.5
    assert phi_cdf(1.959964) == pytest.approx(0.975, abs=1e-6)
    assert phi_cdf(-8.0) < 1e-14

def test_phi_cdf_symmetry_and_monotonicity():
    z = np.linspace(-6, 6, 1001)
    values = phi_cdf(z)
    assert np.all(np.diff(values) >= 0)
    assert np.allclose(phi_cdf(-z), 1 - values, atol=1e-15)

def test_phi_cdf_matches_numeric_integral():
    density = lambda t: np.exp(-0.5 * t * t) / np.sqrt(2 * np.pi)
    for z in np.linspace(-6, 6, 1000):
        integral, _ = integrate.quad(density, -np.inf, z, epsabs=1e-13, epsrel=1e-12)
        assert abs(phi_cdf(z) - integral) <= 1e-9

def test_truncnorm_cdf_matches_scipy():
    rng = np.random.default_rng(12)
    for _ in range(20):
        spec = random_spec(rng)
        a, b = spec.standard_bounds
        x = np.linspace(spec.lower, spec.upper, 50)
        expected = stats.truncnorm(a, b, loc=spec.center, scale=spec.sigma).cdf(x)
        assert np.allclose(truncnorm_cdf(x, spec), expected, atol=1e-10)

def test_truncnorm_mean_formula():
    spec = TruncSpec(center=0.0, sigma=1.0, lower=-1.0, upper=2.0)
    assert truncnorm_mean(spec) == pytest.approx(stats.truncnorm(-1, 2).mean(), abs=1e-12)
    assert truncnorm_mean(spec) == pytest.approx(0.22964, abs=1e-4)

# ==================== Sampling Tests ====================
def test_untruncated_mean_is_zero():
    spec = TruncSpec(center=0.0, sigma=1.0, lower=-1e9, upper=1e9)
    assert abs(draws(spec, 100_000).mean()) < 0.02

def test_upper_bound_at_center():
    spec = TruncSpec(center=5.0, sigma=1.0, lower=0.0, upper=5.0)
    rng = np.random.default_rng(3)
    deltas = [truncnorm_sample(spec, rng) for _ in range(2000)]
    assert max(deltas) <= 0.0

@pytest.mark.parametrize("sampler", ["inverse", "gibbs"])
def test_asymmetric_interval_mean(sampler):
    spec = TruncSpec(center=0.0, sigma=1.0, lower=-1.0, upper=2.0)
    values = draws(spec, 100_000, seed=17, sampler=sampler)
    assert values.mean() == pytest.approx(truncnorm_mean(spec), abs=0.01)

def test_ks_against_analytic_cdf():
    """Test inverse sampler passes KS at 1% in at least 18 of 20 random specs"""
    rng = np.random.default_rng(2024)
    passed = 0
    for k in range(20):
        spec = random_spec(rng)
        values = draws(spec, 10_000, seed=k)
        result = stats.kstest(values, lambda x: truncnorm_cdf(x, spec))
        passed += result.pvalue > 0.01
    assert passed >= 18

def test_degenerate_interval_returns_zero():
    spec = TruncSpec(center=3.0, sigma=1.0, lower=3.0, upper=3.0)
    assert truncnorm_sample(spec, np.random.default_rng(0)) == 0.0

def test_zero_sigma_entries_keep_center():
    rng = np.random.default_rng(0)
    values = truncnorm_draw(
        center=[1.0, 2.0], sigma=[0.0, 1.0], lower=[0.0, 0.0], upper=[5.0, 5.0], rng=rng, size=(100, 2)
    )
    assert np.all(values[:, 0] == 1.0)
    assert values[:, 1].std() > 0

def test_same_stream_same_draws():
    spec = TruncSpec(center=1.0, sigma=2.0, lower=-3.0, upper=4.0)
    assert np.array_equal(draws(spec, 50, seed=6), draws(spec, 50, seed=6))

def test_far_tail_intervals_stay_inside():
    z = standard_truncnorm_ppf(np.array([8.0, -40.0]), np.array([9.0, -39.0]), np.array([0.5, 0.5]))
    assert 8.0 <= z[0] <= 9.0
    assert -40.0 <= z[1] <= -39.0

def test_invalid_spec():
    with pytest.raises(ValueError):
        TruncSpec(center=0.0, sigma=0.0, lower=-1.0, upper=1.0)
    with pytest.raises(ValueError):
        TruncSpec(center=2.0, sigma=1.0, lower=-1.0, upper=1.0)

def test_unknown_sampler():
    with pytest.raises(ValueError):
        truncnorm_draw(0.0, 1.0, -1.0, 1.0, np.random.default_rng(0), sampler="rejection")

@pytest.mark.slow
@pytest.mark.parametrize("sampler", ["inverse", "gibbs"])
def test_support_never_violated(sampler):
    """Test one million fuzzed draws stay inside their bounds"""
    rng = np.random.default_rng(99)
    n = 1_000_000
    center = rng.uniform(-100, 100, size=n)
    sigma = 10.0 ** rng.uniform(-3, 2, size=n)
    lower = center - rng.exponential(1.0, size=n) * sigma * rng.choice([0.0, 0.01, 1.0, 50.0], size=n)
    upper = center + rng.exponential(1.0, size=n) * sigma * rng.choice([0.0, 0.01, 1.0, 50.0], size=n)
    values = truncnorm_draw(center, sigma, lower, upper, rng, sampler=sampler)
    assert np.all(values >= lower)
    assert np.all(values <= upper)

@pytest.mark.slow
def test_scalar_sampler_support():
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        spec = random_spec(rng)
        delta = truncnorm_sample(spec, rng)
        assert spec.lower <= spec.center + delta <= spec.upper
