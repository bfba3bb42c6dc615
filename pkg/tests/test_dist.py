import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from tailfit import dist
from tailfit.dist import Exponential, Lognormal, Poisson, PowerLaw
from tailfit.errors import DomainError

mpmath.mp.dps = 40

LN2 = math.log(2.0)


def brute_zeta(s, q, n_terms=10**7):
    # partial sum plus Euler-Maclaurin tail from an independent implementation
    x = np.arange(q, q + n_terms, dtype=float)
    head = math.fsum(np.exp(-s * np.log(x[::-1])))
    N = q + n_terms
    tail = N ** (1 - s) / (s - 1) + 0.5 * N**-s + s * N ** (-s - 1) / 12
    return head + tail


def test_zeta_two_one_matches_pi_squared_over_six():
    assert abs(dist.hurwitz_zeta(2.0, 1) - math.pi**2 / 6) < 1e-12
    assert abs(brute_zeta(2.0, 1) - math.pi**2 / 6) < 1e-12


def test_zeta_two_two():
    assert abs(dist.hurwitz_zeta(2.0, 2) - (math.pi**2 / 6 - 1)) < 1e-12


@pytest.mark.parametrize("s,q", [(1.05, 1), (1.5, 3), (2.5, 1), (3.0, 7), (7.5, 2), (20.0, 50), (1.2, 400)])
def test_zeta_against_mpmath(s, q):
    expected = float(mpmath.zeta(s, q))
    got = dist.hurwitz_zeta(s, q)
    assert abs(got - expected) <= 1e-10 * max(1.0, expected) + 1e-13


def test_zeta_array_xmin():
    q = np.array([1, 2, 5, 30])
    got = dist.hurwitz_zeta(2.3, q)
    assert got.shape == q.shape
    for a, qq in zip(got, q):
        assert a == pytest.approx(float(mpmath.zeta(2.3, int(qq))), rel=1e-13)


@given(st.floats(1.01, 15.0), st.integers(1, 10_000))
def test_zeta_telescopes(alpha, xmin):
    diff = dist.hurwitz_zeta(alpha, xmin) - dist.hurwitz_zeta(alpha, xmin + 1)
    assert diff == pytest.approx(xmin ** (-alpha), rel=1e-9, abs=1e-15)


@pytest.mark.parametrize("alpha", [1.0, 0.5, float("nan"), float("inf")])
def test_zeta_rejects_bad_alpha(alpha):
    with pytest.raises(DomainError):
        dist.hurwitz_zeta(alpha, 1)


@pytest.mark.parametrize("xmin", [0, float("nan"), float("inf")])
def test_zeta_rejects_bad_xmin(xmin):
    with pytest.raises(DomainError):
        dist.hurwitz_zeta(2.0, xmin)


def test_exponential_pmf_examples():
    p = Exponential(LN2)
    assert dist.pmf(p, 1, 1) == pytest.approx(0.5, abs=1e-15)
    assert dist.pmf(p, 1, 2) == pytest.approx(0.25, abs=1e-15)
    assert dist.cdf(p, 1, 2) == pytest.approx(0.75, abs=1e-15)


def test_power_law_pmf_at_one():
    assert dist.pmf(PowerLaw(2.0), 1, 1) == pytest.approx(6 / math.pi**2, abs=1e-12)
    assert round(dist.pmf(PowerLaw(2.0), 1, 1), 7) == 0.6079271


def test_poisson_matches_truncated_formula():
    rate = 3.0
    x = np.arange(1, 201)
    direct = np.array([math.exp(k * math.log(rate) - math.lgamma(k + 1) - rate) for k in x]) / -math.expm1(-rate)
    got = dist.pmf(Poisson(rate), 1, x)
    np.testing.assert_allclose(got, direct, rtol=1e-12, atol=1e-300)
    assert math.fsum(got) == pytest.approx(1.0, abs=1e-12)


def test_lognormal_pmf_is_half_integer_bin_mass():
    p = Lognormal(1.0, 0.8)
    law = stats.lognorm(s=0.8, scale=math.e)
    xmin = 3
    x = np.arange(xmin, 40)
    mass = law.cdf(x + 0.5) - law.cdf(x - 0.5)
    expected = mass / law.sf(xmin - 0.5)
    np.testing.assert_allclose(dist.pmf(p, xmin, x), expected, rtol=1e-10)


PARAMS = [
    (PowerLaw(2.5), 1),
    (PowerLaw(3.2), 4),
    (Lognormal(1.0, 1.0), 1),
    (Lognormal(-2.0, 3.0), 2),
    (Exponential(0.3), 1),
    (Exponential(2.0), 5),
    (Poisson(3.0), 1),
    (Poisson(40.0), 30),
]


@pytest.mark.parametrize("params,xmin", PARAMS)
def test_cdf_equals_running_pmf_sum(params, xmin):
    x = np.arange(xmin, xmin + 2000)
    running = np.cumsum(dist.pmf(params, xmin, x))
    np.testing.assert_allclose(dist.cdf(params, xmin, x), running, rtol=1e-9, atol=1e-12)
    assert np.all(np.diff(dist.cdf(params, xmin, x)) >= 0)
    assert dist.cdf(params, xmin, xmin) == pytest.approx(dist.pmf(params, xmin, xmin), rel=1e-12)
    assert dist.cdf(params, xmin, 10**6) <= 1.0


@pytest.mark.parametrize("params,xmin", PARAMS)
def test_sf_complements_cdf(params, xmin):
    x = np.arange(xmin, xmin + 100)
    np.testing.assert_allclose(dist.sf(params, xmin, x) + dist.cdf(params, xmin, x), 1.0, atol=1e-12)


def test_power_law_cdf_far_out():
    assert 1 - dist.cdf(PowerLaw(2.0), 1, 10**6) < 1e-6


@given(st.floats(1.05, 6.0), st.integers(1, 5000))
def test_power_law_doubling_ratio(alpha, x):
    p = PowerLaw(alpha)
    ratio = dist.pmf(p, 1, 2 * x) / dist.pmf(p, 1, x)
    assert ratio == pytest.approx(2.0**-alpha, rel=1e-9)


@given(st.floats(0.01, 5.0), st.integers(1, 50), st.integers(0, 200))
def test_exponential_constant_decay(lam, xmin, offset):
    p = Exponential(lam)
    x = xmin + offset
    ratio = math.exp(dist.logpmf(p, xmin, x + 1) - dist.logpmf(p, xmin, x))
    assert ratio == pytest.approx(math.exp(-lam), rel=1e-9)


def test_exponential_ratio_round_trip():
    p = Exponential.from_ratio(0.7)
    assert p.ratio == pytest.approx(0.7, rel=1e-15)
    assert p.lam == pytest.approx(-math.log(0.7), rel=1e-15)


@pytest.mark.parametrize("params,xmin", PARAMS)
def test_pmf_nonnegative(params, xmin):
    assert np.all(dist.pmf(params, xmin, np.arange(xmin, xmin + 10_000)) >= 0)


def test_log_likelihood_examples():
    p = Exponential(LN2)
    assert dist.log_likelihood(p, 1, [1, 2]) == pytest.approx(-2.0794415, abs=1e-7)
    assert dist.log_likelihood(p, 1, [7]) == pytest.approx(dist.logpmf(p, 1, 7), rel=1e-15)
    data = [1, 3, 3, 9]
    assert dist.log_likelihood(p, 1, data + data) == pytest.approx(2 * dist.log_likelihood(p, 1, data), rel=1e-15)


def test_domain_errors():
    with pytest.raises(DomainError):
        dist.pmf(PowerLaw(2.0), 3, 2)
    with pytest.raises(DomainError):
        dist.cdf(PowerLaw(2.0), 3, [5, 1])
    with pytest.raises(DomainError):
        dist.log_likelihood(PowerLaw(2.0), 1, [])
    with pytest.raises(DomainError):
        dist.log_likelihood(PowerLaw(2.0), 2, [1, 5])
    for bad in (lambda: PowerLaw(1.0), lambda: Lognormal(0.0, 0.0), lambda: Exponential(-1.0),
                lambda: Poisson(0.0), lambda: PowerLaw(float("nan"))):
        with pytest.raises(DomainError):
            bad()


def test_sample_contracts():
    assert dist.sample(PowerLaw(2.5), 1, 0, 1).values.size == 0
    a = dist.sample(Lognormal(1.0, 1.0), 2, 500, 99).values
    b = dist.sample(Lognormal(1.0, 1.0), 2, 500, 99).values
    np.testing.assert_array_equal(a, b)
    assert a.min() >= 2
    with pytest.raises(DomainError):
        dist.sample(PowerLaw(2.5), 1, -1, 1)
    with pytest.raises(DomainError):
        dist.sample(PowerLaw(2.5), 1, 10, -3)


def test_power_law_sample_mass_at_one():
    values = dist.sample(PowerLaw(2.5), 1, 10**5, 7).values
    assert abs(np.mean(values == 1) - dist.pmf(PowerLaw(2.5), 1, 1)) < 0.005


def test_sample_regression_values():
    # frozen draws: the sampler must not change silently across releases
    got = dist.sample(PowerLaw(2.5), 1, 8, 42).values.tolist()
    assert got == [2, 1, 2, 1, 1, 7, 2, 2]


@pytest.mark.parametrize("params,xmin,seed", [
    (PowerLaw(2.5), 1, 11),
    (PowerLaw(1.8), 3, 12),
    (Lognormal(1.5, 0.7), 1, 13),
    (Exponential(0.2), 2, 14),
    (Poisson(6.0), 1, 15),
])
def test_sampler_chi_squared(params, xmin, seed):
    n = 10**5
    values = dist.sample(params, xmin, n, seed).values
    support = np.arange(xmin, xmin + 50)
    probs = dist.pmf(params, xmin, support)
    observed = np.array([np.count_nonzero(values == x) for x in support], dtype=float)
    # pool everything past the last support point and any cells with small expectation
    expected = n * probs
    keep = expected >= 5
    obs = np.append(observed[keep], n - observed[keep].sum())
    exp = np.append(expected[keep], n - expected[keep].sum())
    if exp[-1] < 5:
        obs[-2] += obs[-1]
        exp[-2] += exp[-1]
        obs, exp = obs[:-1], exp[:-1]
    res = stats.chisquare(obs, exp)
    assert res.pvalue > 0.001


def test_power_law_tail_sampler_beyond_table():
    # heavy tail: many draws land past the cumulative table
    values = dist.sample(PowerLaw(1.3), 1, 20_000, 5).values
    big = 5000
    assert abs(np.mean(values > big) - dist.sf(PowerLaw(1.3), 1, big)) < 0.01


def test_quantile_inverts_cdf():
    p = Lognormal(2.0, 1.0)
    q = np.array([0.0, 0.1, 0.5, 0.9, 0.999])
    x = dist.quantile(p, 1, q)
    for level, v in zip(q, x):
        assert dist.cdf(p, 1, v) >= level
        if v > 1:
            assert dist.cdf(p, 1, v - 1) < level


def test_params_dict_round_trip():
    for params, _ in PARAMS:
        assert dist.params_from_dict(params.kind, dist.params_to_dict(params)) == params
