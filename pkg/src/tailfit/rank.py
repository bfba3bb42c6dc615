"""Classical rank-frequency laws and least-squares fits on log frequencies.

These reproduce the older regression-based comparisons (Zipf, a geometric
series, Whitworth's stick-breaking expectation, the negative-log law and a
Yule-Simon product form). R^2 on log frequencies is not evidence of
plausibility; use :mod:`tailfit.gof` for that.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .errors import DomainError, InsufficientDataError

__all__ = [
    "RankModelKind",
    "RankModelFit",
    "rank_spectrum",
    "expected_spectrum",
    "yule_simon_reductions_check",
    "fit_rank_model",
]


class RankModelKind(str, enum.Enum):
    ZIPF = "zipf"
    GEOMETRIC = "geometric_rank"
    WHITWORTH = "whitworth"
    NEGLOG = "neglog"
    YULE_SIMON = "yule_simon"

    def __str__(self):
        return self.value


PARAM_NAMES = {
    RankModelKind.ZIPF: ("alpha",),
    RankModelKind.GEOMETRIC: ("lambda",),
    RankModelKind.WHITWORTH: (),
    RankModelKind.NEGLOG: (),
    RankModelKind.YULE_SIMON: ("alpha", "lambda"),
}

# search boxes for the parameterised laws
_ALPHA_BOX = (0.0, 20.0)
_LAMBDA_BOX = (1e-9, 1.0)


@dataclass(frozen=True)
class RankModelFit:
    kind: RankModelKind
    params: dict
    r_squared: float
    expected: np.ndarray


def rank_spectrum(table):
    """Relative frequencies sorted in descending order.

    ``table`` is a FrequencyTable or any mapping of label -> count.
    """
    counts = table.counts if hasattr(table, "counts") else table
    values = np.fromiter(counts.values(), dtype=float, count=len(counts))
    if values.size == 0:
        raise DomainError("empty frequency table")
    if np.any(values <= 0):
        raise DomainError("counts must be positive")
    return np.sort(values)[::-1] / values.sum()


def _normalise_log_weights(logw):
    w = np.exp(logw - np.max(logw))
    return w / w.sum()


def _check_params(kind, params):
    names = PARAM_NAMES[kind]
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError(f"{kind} needs parameters {names}, missing {missing}")
    alpha = params.get("alpha", 0.0)
    lam = params.get("lambda", 1.0)
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be finite and >= 0, got {alpha}")
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lambda must lie in (0, 1], got {lam}")
    return alpha, lam


def _log_weights(kind, n, alpha, lam):
    k = np.arange(1, n + 1, dtype=float)
    if kind is RankModelKind.ZIPF:
        return -alpha * np.log(k)
    if kind is RankModelKind.GEOMETRIC:
        return k * math.log(lam)
    if kind is RankModelKind.YULE_SIMON:
        return -alpha * np.log(k) + k * math.log(lam)
    if kind is RankModelKind.WHITWORTH:
        # sum_{i=k}^{n} 1/i, already descending in k
        return np.log(np.cumsum(1.0 / k[::-1])[::-1])
    if kind is RankModelKind.NEGLOG:
        return np.log(-np.log(k / (n + 1)))
    raise DomainError(f"unknown rank model {kind!r}")


def expected_spectrum(kind, n, params=None):
    """Length-n descending spectrum of ``kind``, normalised to sum to 1."""
    kind = RankModelKind(kind)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    alpha, lam = _check_params(kind, params or {})
    return _normalise_log_weights(_log_weights(kind, int(n), alpha, lam))


def yule_simon_reductions_check(n, alpha, lam, atol=1e-12):
    """Check that Yule-Simon reduces to Zipf at lambda=1 and geometric at alpha=0."""
    zipf_case = np.allclose(
        expected_spectrum(RankModelKind.YULE_SIMON, n, {"alpha": alpha, "lambda": 1.0}),
        expected_spectrum(RankModelKind.ZIPF, n, {"alpha": alpha}),
        rtol=0.0, atol=atol,
    )
    geometric_case = np.allclose(
        expected_spectrum(RankModelKind.YULE_SIMON, n, {"alpha": 0.0, "lambda": lam}),
        expected_spectrum(RankModelKind.GEOMETRIC, n, {"lambda": lam}),
        rtol=0.0, atol=atol,
    )
    return bool(zipf_case and geometric_case)


def _r_squared(log_obs, log_exp):
    ss_res = float(np.sum((log_obs - log_exp) ** 2))
    ss_tot = float(np.sum((log_obs - log_obs.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res < 1e-24 else -math.inf
    return 1.0 - ss_res / ss_tot


def fit_rank_model(observed, kind):
    """Least-squares fit of ``kind`` to ln(observed) over ranks 1..n."""
    kind = RankModelKind(kind)
    observed = np.asarray(observed, dtype=float)
    names = PARAM_NAMES[kind]
    if observed.ndim != 1 or observed.size < (3 if names else 1):
        raise InsufficientDataError(f"{kind} needs at least {3 if names else 1} ranks")
    if np.any(observed <= 0):
        raise DomainError("observed relative frequencies must be positive")
    n = observed.size
    log_obs = np.log(observed)

    def log_expected(theta):
        alpha, lam = _check_params(kind, dict(zip(names, np.atleast_1d(theta))))
        logw = _log_weights(kind, n, alpha, lam)
        return logw - special.logsumexp(logw)

    def loss(theta):
        return float(np.sum((log_obs - log_expected(theta)) ** 2))

    if not names:
        theta = ()
    elif len(names) == 1:
        box = _ALPHA_BOX if names[0] == "alpha" else _LAMBDA_BOX
        res = optimize.minimize_scalar(loss, bounds=box, method="bounded", options={"xatol": 1e-10})
        theta = (float(res.x),)
    else:
        # start from the best of the two nested laws
        zipf = fit_rank_model(observed, RankModelKind.ZIPF).params["alpha"]
        geo = fit_rank_model(observed, RankModelKind.GEOMETRIC).params["lambda"]
        starts = [(zipf, 1.0 - 1e-6), (1e-6, geo)]
        best = min(starts, key=loss)
        res = optimize.minimize(
            loss, best, method="Nelder-Mead", bounds=[_ALPHA_BOX, _LAMBDA_BOX],
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
        )
        theta = tuple(float(v) for v in res.x) if res.fun <= loss(best) else best
    params = dict(zip(names, theta))
    expected = expected_spectrum(kind, n, params)
    return RankModelFit(kind, params, _r_squared(log_obs, log_expected(theta)), expected)
