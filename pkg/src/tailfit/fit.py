"""Maximum-likelihood fits at a fixed xmin and KS-driven xmin selection."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import optimize, special

from . import dist
from .dist import Exponential, Lognormal, ModelKind, Poisson, PowerLaw
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    FitError,
    InsufficientDataError,
)

__all__ = [
    "FitConfig",
    "FittedModel",
    "FitFailure",
    "as_data",
    "fit_fixed_xmin",
    "fit_with_xmin_scan",
    "fit_all",
]

# box for the lognormal optimiser, in (mu_log, log sigma_log)
_MU_BOUNDS = (-50.0, 50.0)
_LOG_SIGMA_BOUNDS = (math.log(1e-3), math.log(50.0))


@dataclass(frozen=True)
class FitConfig:
    min_tail: int = 5
    alpha_bounds: tuple = (1.000001, 20.0)
    optimizer_tolerance: float = 1e-8

    def __post_init__(self):
        if int(self.min_tail) != self.min_tail or self.min_tail < 2:
            raise DomainError(f"min_tail must be an integer >= 2, got {self.min_tail}")
        lo, hi = self.alpha_bounds
        if not 1.0 < lo < hi:
            raise DomainError(f"alpha_bounds must satisfy 1 < lo < hi, got {self.alpha_bounds}")
        if not self.optimizer_tolerance > 0:
            raise DomainError("optimizer_tolerance must be positive")


@dataclass(frozen=True)
class FittedModel:
    """A fitted distribution together with the tail it was fitted on.

    ``xmin_rule`` records how xmin was chosen: ``"fixed"`` (given by the
    caller), ``"min"`` (smallest observation) or ``"scan"`` (KS scan). The
    bootstrap applies the same rule to every replicate.
    """

    kind: ModelKind
    params: object
    xmin: int
    n_tail: int
    log_likelihood: float
    ks: float
    xmin_rule: str = "fixed"

    @property
    def scanned(self):
        return self.xmin_rule == "scan"

    @property
    def param_dict(self):
        return dist.params_to_dict(self.params)


@dataclass(frozen=True)
class FitFailure:
    kind: ModelKind
    scanned: bool
    status: str
    message: str = field(default="", compare=False)


def as_data(data):
    """Validate observations and return them as a sorted int64 array."""
    arr = np.asarray(data)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size == 0:
        return np.empty(0, dtype=np.int64)
    if not np.issubdtype(arr.dtype, np.number) or np.issubdtype(arr.dtype, np.complexfloating):
        raise DomainError("data must be numeric")
    if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)) or np.any(arr < 1):
        raise DomainError("data must be positive integers")
    return np.sort(arr.astype(np.int64), kind="stable")


def _ks(tail, params, xmin):
    # tail is sorted; evaluate both CDFs at each distinct observed value
    values, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts) / tail.size
    model = -np.expm1(params.log_upper(values + 1.0) - params.log_upper(xmin))
    return float(np.max(np.abs(empirical - model)))


def _fit_power_law(tail, xmin, config):
    n = tail.size
    log_sum = float(np.sum(np.log(tail)))
    xmin_f = float(xmin)

    def negll(alpha):
        return alpha * log_sum + n * math.log(dist._hurwitz_zeta(alpha, xmin_f))

    lo, hi = config.alpha_bounds
    res = optimize.minimize_scalar(
        negll, bounds=(lo, hi), method="bounded",
        options={"xatol": config.optimizer_tolerance, "maxiter": 500},
    )
    if not res.success:
        raise ConvergenceError(f"power-law alpha search failed: {res.message}")
    alpha = float(res.x)
    # bounded Brent never evaluates the end points themselves
    for edge in (lo, hi):
        if negll(edge) < negll(alpha):
            alpha = edge
    return PowerLaw(alpha)


def _fit_exponential(tail, xmin, config):
    # exact MLE of the geometric law: exp(-lam) = m / (1 + m), m = mean excess
    excess = float(np.mean(tail)) - xmin
    return Exponential(math.log1p(1.0 / excess))


def _fit_poisson(tail, xmin, config):
    # score equation: truncated mean equals the sample mean
    mean = float(np.mean(tail))

    def truncated_mean_gap(rate):
        log_ratio = dist._poisson_log_upper(xmin - 1, rate) - dist._poisson_log_upper(xmin, rate)
        return rate * math.exp(float(log_ratio)) - mean

    lo, hi = 1e-12, mean
    if truncated_mean_gap(lo) >= 0:
        raise DegenerateDataError("Poisson likelihood is maximised at rate -> 0")
    rate = optimize.brentq(truncated_mean_gap, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return Poisson(rate)


_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


def _lognormal_negll_and_grad(theta, x, counts, xmin):
    """Negative log-likelihood of the binned lognormal and its gradient in (mu, log sigma)."""
    mu, log_sigma = theta
    sigma = math.exp(log_sigma)
    params = Lognormal(mu, sigma)
    a = params._z(x - 0.5)
    b = params._z(x + 0.5)
    log_mass = params.logpmf(x, xmin) + float(params.log_upper(xmin))
    z0 = float(params._z(xmin - 0.5))
    log_norm = float(special.log_ndtr(-z0))
    value = -float(np.dot(counts, log_mass)) + counts.sum() * log_norm

    # densities relative to each bin's mass, kept in log space
    ra = np.exp(-0.5 * a * a - _LOG_SQRT_2PI - log_mass)
    rb = np.exp(-0.5 * b * b - _LOG_SQRT_2PI - log_mass)
    r0 = math.exp(-0.5 * z0 * z0 - _LOG_SQRT_2PI - log_norm)
    d_mu = np.dot(counts, ra - rb) / sigma - counts.sum() * r0 / sigma
    d_log_sigma = np.dot(counts, a * ra - b * rb) - counts.sum() * z0 * r0
    return value, -np.array([d_mu, d_log_sigma])


def _fit_lognormal(tail, xmin, config):
    values, counts = np.unique(tail, return_counts=True)
    x = values.astype(float)
    counts = counts.astype(float)
    logs = np.log(x)
    start = np.array([np.dot(counts, logs) / counts.sum(), 0.0])
    spread = math.sqrt(np.dot(counts, (logs - start[0]) ** 2) / counts.sum())
    start[1] = math.log(max(spread, 0.1))
    bounds = [_MU_BOUNDS, _LOG_SIGMA_BOUNDS]
    options = {"ftol": 1e-15, "gtol": 1e-9, "maxiter": 500}
    args = (x, counts, xmin)
    res = optimize.minimize(_lognormal_negll_and_grad, start, args=args, jac=True,
                            method="L-BFGS-B", bounds=bounds, options=options)
    # one restart: the quasi-Newton memory can stall on the long mu/sigma ridge
    res = optimize.minimize(_lognormal_negll_and_grad, res.x, args=args, jac=True,
                            method="L-BFGS-B", bounds=bounds, options=options)
    best_theta, best_value = res.x, res.fun
    if best_theta[0] < _MU_BOUNDS[0] + 10.0:
        # power-law-like tails push mu to its bound, where only sigma matters
        mu = _MU_BOUNDS[0]
        edge = optimize.minimize_scalar(
            lambda ls: _lognormal_negll_and_grad((mu, ls), *args)[0],
            bounds=_LOG_SIGMA_BOUNDS, method="bounded", options={"xatol": 1e-10},
        )
        if edge.fun < best_value:
            best_theta, best_value = np.array([mu, edge.x]), edge.fun
    if not np.isfinite(best_value):
        raise ConvergenceError(f"lognormal search failed: {res.message}")
    mu, log_sigma = best_theta
    return Lognormal(float(mu), math.exp(float(log_sigma)))


_FITTERS = {
    ModelKind.POWER_LAW: _fit_power_law,
    ModelKind.LOGNORMAL: _fit_lognormal,
    ModelKind.EXPONENTIAL: _fit_exponential,
    ModelKind.POISSON: _fit_poisson,
}


def _fit_sorted(kind, data, xmin, config, xmin_rule="fixed"):
    start = int(np.searchsorted(data, xmin, side="left"))
    tail = data[start:]
    if tail.size < config.min_tail:
        raise InsufficientDataError(
            f"{tail.size} observations >= xmin={xmin}, need at least {config.min_tail}"
        )
    if tail[0] == tail[-1]:
        raise DegenerateDataError(f"all {tail.size} observations >= xmin={xmin} are identical")
    params = _FITTERS[kind](tail, xmin, config)
    loglik = float(np.sum(params.logpmf(tail, xmin)))
    if not math.isfinite(loglik):
        raise ConvergenceError(f"non-finite log-likelihood for {params}")
    return FittedModel(kind, params, int(xmin), int(tail.size), loglik, _ks(tail, params, xmin), xmin_rule)


def fit_fixed_xmin(kind, data, xmin=None, config=None):
    """Fit ``kind`` by maximum likelihood to the observations >= xmin.

    With ``xmin=None`` the threshold is the smallest observation, so the
    whole sample is fitted.
    """
    config = config or FitConfig()
    kind = ModelKind(kind)
    data = as_data(data)
    if xmin is None:
        return _fit_at_min(kind, data, config)
    return _fit_sorted(kind, data, dist._check_xmin(xmin), config)


def _fit_at_min(kind, data, config):
    if data.size == 0:
        raise InsufficientDataError("no observations")
    return _fit_sorted(kind, data, int(data[0]), config, "min")


def fit_with_xmin_scan(kind, data, config=None):
    """Choose xmin among the observed values by minimising the KS distance.

    Every distinct value leaving at least ``config.min_tail`` observations in
    the tail is tried; candidates whose tail cannot be fitted are skipped.
    Ties go to the smallest xmin.
    """
    config = config or FitConfig()
    kind = ModelKind(kind)
    data = as_data(data)
    values = np.unique(data)
    tail_sizes = data.size - np.searchsorted(data, values, side="left")
    candidates = values[tail_sizes >= config.min_tail]
    if candidates.size == 0:
        raise InsufficientDataError(
            f"{data.size} observations, need at least {config.min_tail} for any xmin"
        )
    best, last_error = None, None
    for xmin in candidates:
        try:
            fitted = _fit_sorted(kind, data, int(xmin), config, "scan")
        except FitError as exc:
            last_error = exc
            continue
        if best is None or fitted.ks < best.ks:
            best = fitted
    if best is None:
        raise last_error
    return best


def fit_all(data, config=None) -> list[Union[FittedModel, FitFailure]]:
    """Fit every kind both at xmin = min(data) and with an xmin scan.

    Returns eight entries ordered by kind, fixed variant first. A fit that
    fails is reported as a :class:`FitFailure` in its slot.
    """
    config = config or FitConfig()
    data = as_data(data)
    if data.size == 0:
        raise InsufficientDataError("no observations")
    out = []
    for kind in ModelKind:
        for scanned in (False, True):
            try:
                if scanned:
                    out.append(fit_with_xmin_scan(kind, data, config))
                else:
                    out.append(_fit_at_min(kind, data, config))
            except FitError as exc:
                out.append(FitFailure(kind, scanned, exc.status, str(exc)))
    return out
