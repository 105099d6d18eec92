import math

import mpmath
import numpy as np
import pytest

import tailbounds as tb
from tailbounds.exceptions import DomainError, ParameterError

from _closed_forms import gamma_tail_series, poisson_tail_brute
from conftest import CATALOG_SPECS

# frozen from the Erlang series e^{-16} * sum_{j<8} 16^j/j!
GAMMA81_TAIL_16 = 0.009999780953104791


def test_make_model_examples(gamma81, std_normal, exp1):
    assert gamma81.mean == 8.0
    assert gamma81.xi_star == 1.0
    assert std_normal.mean == 0.0
    assert std_normal.xi_star == math.inf
    assert exp1.mean == 1.0
    assert exp1.xi_star == 1.0


@pytest.mark.parametrize(
    "family,params,fragment",
    [
        ("gamma", (-1, 1), "shape"),
        ("gamma", (8, 0), "scale"),
        ("exponential", (0,), "rate"),
        ("normal", (0, -2), "scale"),
        ("poisson", (-4,), "rate"),
        ("gamma", (8,), "parameter"),
        ("weibull", (1, 1), "family"),
    ],
)
def test_invalid_parameters_name_the_offender(family, params, fragment):
    with pytest.raises(ParameterError) as err:
        tb.DistributionSpec(family, params)
    assert fragment in str(err.value)


def test_parse_spec_grammar():
    spec = tb.parse_spec("gamma:8,1")
    assert spec.family == "gamma" and spec.params == (8.0, 1.0)
    assert tb.parse_spec("exp:1").family == "exponential"
    assert tb.parse_spec("normal:0,1").params == (0.0, 1.0)
    assert tb.parse_spec("poisson:4").params == (4.0,)
    for bad in ("gamma", "gamma:", "gamma:a,b", ":1"):
        with pytest.raises(ParameterError):
            tb.parse_spec(bad)


def test_cumulant_eval_examples(gamma81, std_normal, catalog):
    K, K1, K2 = tb.cumulant_eval(gamma81, 0.5)
    assert K == pytest.approx(8.0 * math.log(2.0), rel=1e-14)
    assert K1 == pytest.approx(16.0, rel=1e-14)
    for model in catalog.values():
        assert tb.cumulant_eval(model, 0.0)[0] == 0.0
    assert tb.cumulant_eval(std_normal, 3.0) == (4.5, 3.0, 1.0)


def test_cumulant_eval_domain_error(gamma81, exp1):
    for model, xi in ((gamma81, 1.0), (gamma81, 2.0), (exp1, 1.5)):
        with pytest.raises(DomainError) as err:
            tb.cumulant_eval(model, xi)
        assert err.value.xi == xi
        assert err.value.xi_star == model.xi_star


def test_mean_matches_k1_at_zero(catalog):
    for model in catalog.values():
        assert model.K1(0.0) == pytest.approx(model.mean, rel=1e-10)


def test_convexity_second_difference(catalog):
    rng = np.random.default_rng(42)
    for model in catalog.values():
        hi = min(model.xi_star, 3.0)
        for _ in range(1000):
            xi = float(rng.uniform(-3.0, hi - 1e-3))
            h = 1e-5 * max(1.0, abs(xi))
            if xi + h >= model.xi_star:
                continue
            k2 = model.K2(xi)
            fd = (model.K(xi + h) - 2.0 * model.K(xi) + model.K(xi - h)) / (h * h)
            assert fd >= -1e-6
            assert abs(fd - k2) <= max(1e-6, 1e-4 * abs(k2))


def test_k1_strictly_increasing(catalog):
    for model in catalog.values():
        hi = min(model.xi_star - 1e-6, 4.0)
        grid = np.linspace(-4.0, hi, 200)
        vals = [model.K1(float(x)) for x in grid]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_finite_xi_star_blowup(gamma81, gamma32, exp1):
    # K diverges (logarithmically) at xi_star
    for model in (gamma81, gamma32, exp1):
        near = [model.K(model.xi_star - h) for h in (1e-4, 1e-8, 1e-12)]
        assert near[0] < near[1] < near[2]
        assert near[1] > 10.0


def test_exact_tail_examples(gamma81, exp1, std_normal):
    assert tb.exact_tail(gamma81, 16.0) == pytest.approx(GAMMA81_TAIL_16, rel=1e-13)
    assert tb.exact_tail(gamma81, 16.0) == pytest.approx(
        gamma_tail_series(8, 1.0, 16.0), rel=1e-14
    )
    assert tb.exact_tail(exp1, 3.0) == pytest.approx(math.exp(-3.0), rel=1e-14)
    assert tb.exact_tail(std_normal, 0.0) == pytest.approx(0.5, rel=1e-14)


def test_exact_tail_poisson_vs_brute(poisson4):
    for y in (0.5, 1.0, 4.0, 4.2, 7.0, 12.9, 20.0):
        assert tb.exact_tail(poisson4, y) == pytest.approx(
            poisson_tail_brute(4.0, y), rel=1e-12
        )
    assert tb.exact_tail(poisson4, -1.0) == 1.0
    assert tb.exact_tail(poisson4, 0.0) == 1.0


def test_exact_tail_gamma_noninteger_vs_mpmath():
    model = tb.make_model(tb.parse_spec("gamma:2.5,1.3"))
    for y in (0.5, 2.0, 3.25, 6.0, 12.0):
        want = float(mpmath.gammainc(2.5, y / 1.3, mpmath.inf, regularized=True))
        assert tb.exact_tail(model, y) == pytest.approx(want, rel=1e-12)


def test_regularized_upper_gamma_vs_mpmath():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = float(rng.uniform(0.3, 40.0))
        x = float(rng.uniform(0.01, 80.0))
        want = float(mpmath.gammainc(a, x, mpmath.inf, regularized=True))
        assert tb.regularized_upper_gamma(a, x) == pytest.approx(want, rel=1e-12, abs=1e-300)


def test_exact_tail_monotone_in_unit_interval(catalog):
    for model in catalog.values():
        lo = model.mean - 3.0 if model.mean <= 0 else 0.01 * model.mean
        ys = np.linspace(lo, 6.0 * max(abs(model.mean), 1.0), 60)
        tails = [tb.exact_tail(model, float(y)) for y in ys]
        assert all(0.0 <= t <= 1.0 for t in tails)
        assert all(a >= b - 1e-15 for a, b in zip(tails, tails[1:]))


def test_custom_model_has_no_exact_tail():
    m = tb.custom_model("shifted", lambda x: x * x, lambda x: 2 * x, lambda x: 2.0,
                        xi_star=math.inf, mean=0.0)
    assert tb.exact_tail(m, 1.0) is None


def test_catalog_specs_all_construct():
    for text in CATALOG_SPECS:
        model = tb.make_model(tb.parse_spec(text))
        assert model.K(0.0) == 0.0
