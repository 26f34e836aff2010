import math

import numpy as np
import pytest
from scipy import special, stats as sps

from gumbel_astar.stats import (KS_CRITICAL_001, CheckResult, QuadratureOracle, binomial_interval,
                                chi_square_2samp_test, chi_square_test, geometric_chi_square,
                                gumbel_cdf_vec, ks_2samp_statistic, ks_2samp_test, ks_statistic,
                                ks_test, normal_quantile, oracle_for_target)
from gumbel_astar.models import peakiness_target


def test_ks_critical_value_matches_kolmogorov_distribution():
    assert KS_CRITICAL_001 == pytest.approx(sps.kstwobign.ppf(0.99), abs=1e-3)


def test_ks_statistics_match_scipy(rng):
    x = rng.normal(size=500)
    y = rng.normal(0.1, 1.0, size=300)
    assert ks_statistic(x, sps.norm.cdf) == pytest.approx(sps.kstest(x, "norm").statistic)
    assert ks_2samp_statistic(x, y) == pytest.approx(sps.ks_2samp(x, y).statistic)


def test_ks_tests_detect_shifts(rng):
    x = rng.normal(size=5000)
    assert ks_test(x, sps.norm.cdf).passed
    assert not ks_test(x + 0.2, sps.norm.cdf).passed
    assert ks_2samp_test(x, rng.normal(size=4000)).passed
    assert not ks_2samp_test(x, rng.normal(0.2, 1.0, size=4000)).passed


def test_chi_square_matches_scipy_and_pools_sparse_bins(rng):
    obs = np.array([30, 50, 20])
    probs = np.array([0.3, 0.5, 0.2])
    r = chi_square_test(obs + np.array([3, -5, 2]), probs)
    ref = sps.chisquare(obs + np.array([3, -5, 2]), probs * 100)
    assert r.statistic == pytest.approx(ref.statistic)
    assert r.threshold == pytest.approx(sps.chi2.ppf(0.99, 2))
    sparse = chi_square_test(np.array([100, 1, 0, 0]), np.array([0.97, 0.01, 0.01, 0.01]))
    assert sparse.detail == "bins=1"


def test_two_sample_chi_square(rng):
    a = np.bincount(rng.geometric(0.3, 5000), minlength=40)[1:]
    b = np.bincount(rng.geometric(0.3, 5000), minlength=40)[1:]
    c = np.bincount(rng.geometric(0.35, 5000), minlength=40)[1:]
    assert chi_square_2samp_test(a, b).passed
    assert not chi_square_2samp_test(a, c).passed


def test_geometric_chi_square(rng):
    assert geometric_chi_square(rng.geometric(0.4, 10000), 0.4).passed
    assert not geometric_chi_square(rng.geometric(0.4, 10000), 0.45).passed


def test_gumbel_cdf_vec():
    assert np.allclose(gumbel_cdf_vec(1.0)(np.array([0.0, 2.0])),
                       sps.gumbel_r.cdf([0.0, 2.0], loc=1.0))


def test_check_result_line():
    assert CheckResult("x", 0.5, 1.0, True).line() == "PASS  x: statistic=0.5 threshold=1"
    assert CheckResult("y", 2.0, 1.0, False, "N=3").line().startswith("FAIL  y")


def test_quadrature_oracle_on_known_densities():
    o = QuadratureOracle(lambda x: -0.5 * x * x, -math.inf, math.inf)
    assert o.log_z == pytest.approx(0.5 * math.log(2 * math.pi), rel=1e-10)
    xs = np.linspace(-3, 3, 40)
    assert np.allclose(o.cdf_at_sorted(xs), sps.norm.cdf(xs), atol=1e-10)
    assert o.cdf(0.7) == pytest.approx(sps.norm.cdf(0.7), abs=1e-10)
    kink = QuadratureOracle(lambda x: -abs(x - 1.0), -math.inf, math.inf, breakpoints=[1.0])
    assert kink.log_z == pytest.approx(math.log(2.0), rel=1e-10)
    assert kink.cdf_at_sorted(np.array([0.0, 1.0, 2.0])) == pytest.approx(
        [0.5 * math.exp(-1), 0.5, 1 - 0.5 * math.exp(-1)], abs=1e-10)


def test_oracle_for_peakiness_matches_closed_form():
    # a = 1: Z = int exp(-x)/(1+x) = e E1(1)
    o = oracle_for_target(peakiness_target(1.0), [0.0], [0.0, 1.0])
    assert math.exp(o.log_z) == pytest.approx(math.e * float(special.exp1(1.0)), rel=1e-9)


def test_oracle_rejects_multivariate_targets():
    from gumbel_astar.models import cauchy_regression_preset
    with pytest.raises(ValueError):
        oracle_for_target(cauchy_regression_preset(D=2).target)


def test_small_helpers():
    lo, hi = binomial_interval(0.5, 100)
    assert (lo, hi) == pytest.approx((0.35, 0.65))
    assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)
