import math

import numpy as np
import pytest

import tailbounds as tb
from tailbounds.exceptions import ArgumentError

from _closed_forms import poisson_tail_brute


def test_fixed_seed_is_bitwise_reproducible():
    for text in ("exp:1", "gamma:8,1", "gamma:2.5,1.3", "normal:0,1", "poisson:4", "poisson:40"):
        spec = tb.parse_spec(text)
        a = tb.sample(spec, 7, 5000)
        b = tb.sample(spec, 7, 5000)
        assert np.array_equal(a, b)
        c = tb.sample(spec, 8, 5000)
        assert not np.array_equal(a, c)


def test_streams_are_independent_substreams():
    spec = tb.parse_spec("exp:1")
    s0 = tb.sample(spec, 7, 2000, stream=0)
    s1 = tb.sample(spec, 7, 2000, stream=1)
    assert not np.array_equal(s0, s1)
    assert np.array_equal(s1, tb.sample(spec, 7, 2000, stream=1))


def test_sample_means_within_clt_bands():
    # 3 sigma / sqrt(n) bands
    n = 1_000_000
    cases = [
        ("exp:1", 1.0, 1.0, 0.004),
        ("gamma:8,1", 8.0, math.sqrt(8.0), 0.01),
        ("normal:0,1", 0.0, 1.0, 0.003),
        ("poisson:4", 4.0, 2.0, 0.006),
    ]
    for text, mean, _, band in cases:
        xs = tb.sample(tb.parse_spec(text), 7, n)
        assert abs(float(xs.mean()) - mean) < band


def test_gamma_noninteger_shape_moments():
    n = 400_000
    xs = tb.sample(tb.parse_spec("gamma:2.5,1.3"), 11, n)
    mean, var = 2.5 * 1.3, 2.5 * 1.3 * 1.3
    assert abs(float(xs.mean()) - mean) < 3.5 * math.sqrt(var / n)
    assert abs(float(xs.var()) - var) < 0.1
    assert float(xs.min()) > 0.0


def test_gamma_small_shape_boost_path():
    n = 400_000
    xs = tb.sample(tb.parse_spec("gamma:0.5,2"), 13, n)
    assert abs(float(xs.mean()) - 1.0) < 3.5 * math.sqrt(2.0 / n)
    assert float(xs.min()) > 0.0


def test_poisson_large_rate_rejection_path():
    n = 400_000
    lam = 40.0
    xs = tb.sample(tb.parse_spec("poisson:40"), 17, n)
    assert np.all(xs == np.floor(xs)) and float(xs.min()) >= 0.0
    assert abs(float(xs.mean()) - lam) < 3.5 * math.sqrt(lam / n)
    assert abs(float(xs.var()) - lam) < 0.3
    # deep quantile agrees with the exact pmf tail
    est = tb.empirical_tail(xs, 50.0, 0.999)
    exact = poisson_tail_brute(lam, 50.0)
    assert est.ci_lo <= exact <= est.ci_hi


def test_empirical_tail_edges():
    est = tb.empirical_tail(np.array([1.0, 2.0, 3.0]), 10.0, 0.999)
    assert est.p_hat == 0.0 and est.ci_lo == 0.0 and est.hits == 0
    est = tb.empirical_tail(np.array([1.0, 2.0, 3.0]), 0.5, 0.999)
    assert est.p_hat == 1.0 and est.ci_hi == 1.0
    with pytest.raises(ArgumentError):
        tb.empirical_tail(np.array([]), 1.0, 0.999)
    with pytest.raises(ArgumentError):
        tb.empirical_tail(np.array([1.0]), 1.0, 1.5)


def test_wilson_interval_ordering_and_width_scaling():
    spec = tb.parse_spec("exp:1")
    widths = []
    for n in (1000, 10_000, 100_000):
        est = tb.empirical_tail(tb.sample(spec, 5, n), 1.0, 0.999)
        assert 0.0 <= est.ci_lo <= est.p_hat <= est.ci_hi <= 1.0
        widths.append(est.ci_hi - est.ci_lo)
    # O(n^{-1/2}) shrinkage: each decade shrinks by ~sqrt(10)
    for w1, w2 in zip(widths, widths[1:]):
        assert 2.2 < w1 / w2 < 4.5


def test_gamma81_tail_estimate_contains_exact():
    spec = tb.parse_spec("gamma:8,1")
    model = tb.make_model(spec)
    exact = tb.exact_tail(model, 16.0)
    est = tb.empirical_tail(tb.sample(spec, 3, 1_000_000), 16.0, 0.999)
    assert est.ci_lo <= exact <= est.ci_hi
    assert est.p_hat == pytest.approx(exact, abs=5e-4)


def test_wilson_calibration_exponential():
    # 200 (seed, y) trials at 99.9% confidence; >= 99% must cover e^{-y}
    spec = tb.parse_spec("exp:1")
    n = 20_000
    covered = 0
    trials = 0
    for seed in range(40):
        xs = tb.sample(spec, seed, n)
        for y in (0.5, 1.0, 2.0, 3.0, 5.0):
            est = tb.empirical_tail(xs, y, 0.999)
            trials += 1
            covered += est.ci_lo <= math.exp(-y) <= est.ci_hi
    assert trials == 200
    assert covered >= 198


def test_bound_consistency_with_intervals():
    # the interval cannot sit strictly below a valid lower bound or
    # strictly above a valid upper bound
    spec = tb.parse_spec("gamma:8,1")
    model = tb.make_model(spec)
    lower = tb.lower_bound_new(model, 16.0).value
    upper = tb.chernoff_upper(model, 16.0)
    for seed in (0, 1):
        est = tb.empirical_tail(tb.sample(spec, seed, 200_000), 16.0, 0.999)
        assert est.ci_hi >= lower
        assert est.ci_lo <= upper
