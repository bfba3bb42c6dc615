import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailfit import dist
from tailfit.dist import Exponential, Lognormal, ModelKind, PowerLaw
from tailfit.errors import DegenerateDataError, DomainError, InsufficientDataError
from tailfit.fit import FitConfig, FitFailure, fit_all, fit_fixed_xmin, fit_with_xmin_scan


def ks_oracle(data, params, xmin):
    # plain-Python recount of both CDFs at each distinct tail value
    tail = sorted(x for x in data if x >= xmin)
    n = len(tail)
    worst = 0.0
    for x in sorted(set(tail)):
        emp = sum(1 for t in tail if t <= x) / n
        worst = max(worst, abs(emp - dist.cdf(params, xmin, x)))
    return worst


def scan_oracle(kind, data, config):
    best = None
    for xmin in sorted(set(data)):
        if sum(1 for x in data if x >= xmin) < config.min_tail:
            continue
        try:
            fitted = fit_fixed_xmin(kind, data, xmin, config)
        except (InsufficientDataError, DegenerateDataError):
            continue
        ks = ks_oracle(data, fitted.params, xmin)
        if best is None or ks < best[0] - 1e-12:
            best = (ks, xmin)
    return best


def test_poisson_small_sample_matches_grid_search():
    data = [10, 12, 14]
    fitted = fit_fixed_xmin("poisson", data, 1, FitConfig(min_tail=3))
    grid = np.arange(11.0, 13.0, 1e-4)
    ll = [dist.log_likelihood(dist.Poisson(r), 1, data) for r in grid]
    assert fitted.params.rate == pytest.approx(grid[int(np.argmax(ll))], abs=2e-4)
    assert abs(fitted.params.rate - 12.0) < 0.01


def test_power_law_regression_seed_42():
    data = dist.sample(PowerLaw(2.5), 1, 1000, 42).values
    fitted = fit_fixed_xmin("power_law", data, 1)
    assert 2.4 <= fitted.params.alpha <= 2.6
    assert fitted.params.alpha == pytest.approx(2.4938614246322683, abs=1e-6)
    assert fitted.n_tail == 1000


@pytest.mark.parametrize("kind", list(ModelKind))
def test_identical_tail_is_degenerate(kind):
    with pytest.raises(DegenerateDataError):
        fit_fixed_xmin(kind, [7] * 12, 1)


def test_short_tail_is_insufficient():
    with pytest.raises(InsufficientDataError):
        fit_fixed_xmin("power_law", [1, 2, 3, 4, 50], 3)
    with pytest.raises(InsufficientDataError):
        fit_with_xmin_scan("exponential", [1, 2, 3, 4])


def test_bad_data_rejected():
    for bad in ([0, 1, 2, 3, 4, 5], [1.5, 2, 3, 4, 5, 6], [1, 2, float("nan"), 4, 5, 6]):
        with pytest.raises(DomainError):
            fit_fixed_xmin("power_law", bad, 1)


def test_config_validation():
    with pytest.raises(DomainError):
        FitConfig(min_tail=1)
    with pytest.raises(DomainError):
        FitConfig(alpha_bounds=(3.0, 2.0))
    with pytest.raises(DomainError):
        FitConfig(optimizer_tolerance=0.0)


def test_stored_ks_matches_recomputation():
    data = dist.sample(Lognormal(1.5, 1.0), 1, 300, 3).values
    for fitted in fit_all(data):
        assert fitted.ks == pytest.approx(ks_oracle(data, fitted.params, fitted.xmin), abs=1e-12)
        assert 0.0 <= fitted.ks <= 1.0
        tail = data[data >= fitted.xmin]
        assert fitted.log_likelihood == pytest.approx(dist.log_likelihood(fitted.params, fitted.xmin, tail), rel=1e-12)


def _perturbations(params):
    values = dist._param_values(params)
    for i in range(len(values)):
        for step in (-1e-3, 1e-3):
            moved = list(values)
            moved[i] += step
            try:
                yield type(params)(*moved)
            except DomainError:
                continue


@pytest.mark.parametrize("kind,params,xmin", [
    ("power_law", PowerLaw(2.2), 1),
    ("power_law", PowerLaw(1.6), 3),
    ("lognormal", Lognormal(2.0, 0.9), 1),
    ("lognormal", Lognormal(0.5, 1.5), 2),
    ("exponential", Exponential(0.15), 1),
    ("poisson", dist.Poisson(8.0), 1),
])
def test_likelihood_optimality(kind, params, xmin):
    config = FitConfig()
    for seed in range(3):
        data = dist.sample(params, xmin, 400, 100 + seed).values
        fitted = fit_fixed_xmin(kind, data, xmin, config)
        for other in _perturbations(fitted.params):
            ll = dist.log_likelihood(other, xmin, data)
            assert ll <= fitted.log_likelihood + config.optimizer_tolerance


def test_exponential_closed_form():
    data = np.array([1, 2, 2, 3, 5, 8, 13])
    fitted = fit_fixed_xmin("exponential", data, 1)
    excess = data.mean() - 1
    assert fitted.params.lam == pytest.approx(math.log(1 + 1 / excess), rel=1e-12)


def test_mixed_data_scan_regression():
    model = dist.sample(PowerLaw(2.5), 5, 2000, 9).values
    noise = np.random.default_rng(9).integers(1, 5, 200)
    fitted = fit_with_xmin_scan("power_law", np.concatenate([model, noise]))
    assert fitted.xmin in (4, 5, 6)
    assert 2.35 <= fitted.params.alpha <= 2.65
    assert (fitted.xmin, round(fitted.params.alpha, 6)) == (6, 2.568845)


def test_scan_tie_goes_to_smallest_xmin(monkeypatch):
    import tailfit.fit as fit_module

    monkeypatch.setattr(fit_module, "_ks", lambda tail, params, xmin: 0.25)
    fitted = fit_with_xmin_scan("exponential", [2, 3, 5, 8, 13, 21, 34, 55, 89, 144])
    assert fitted.xmin == 2


def test_scan_with_exactly_min_tail_points():
    data = [3, 9, 4, 17, 5]
    fitted = fit_with_xmin_scan("power_law", data, FitConfig(min_tail=5))
    assert fitted.xmin == 3
    assert fitted.n_tail == 5


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=16, max_size=37), st.sampled_from(list(ModelKind)))
def test_scan_matches_brute_force(data, kind):
    config = FitConfig()
    if len(set(data)) < 2:
        return
    try:
        fitted = fit_with_xmin_scan(kind, data, config)
    except (InsufficientDataError, DegenerateDataError):
        assert scan_oracle(kind, data, config) is None
        return
    ks, xmin = scan_oracle(kind, data, config)
    assert fitted.ks == pytest.approx(ks, abs=1e-12)
    assert fitted.xmin == xmin


def test_fit_all_shape():
    data = dist.sample(PowerLaw(2.0), 1, 200, 4).values
    fits = fit_all(data)
    assert len(fits) == 8
    assert [(f.kind, f.scanned) for f in fits] == [(k, s) for k in ModelKind for s in (False, True)]
    no_scan = fits[0]
    assert no_scan.kind == ModelKind.POWER_LAW and no_scan.xmin == data.min()
    assert fits[1].n_tail <= no_scan.n_tail


def test_fit_all_records_failures():
    fits = fit_all([5] * 10)
    assert len(fits) == 8
    assert all(isinstance(f, FitFailure) and f.status == "degenerate" for f in fits)
    fits = fit_all([1, 2, 3])
    assert all(isinstance(f, FitFailure) and f.status == "insufficient-data" for f in fits)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 200), min_size=10, max_size=40), st.randoms(use_true_random=False))
def test_permutation_invariance(data, rnd):
    shuffled = list(data)
    rnd.shuffle(shuffled)
    a = fit_all(data)
    b = fit_all(shuffled)
    assert a == b
