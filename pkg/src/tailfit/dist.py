"""Discrete candidate distributions on the integer support {xmin, xmin+1, ...}.

Four families are available, each represented by a frozen parameter object:

========================  =====================================================
``PowerLaw(alpha)``        p(x) = x^-alpha / zeta(alpha, xmin)
``Lognormal(mu, sigma)``   continuous lognormal mass on (x-1/2, x+1/2],
                           renormalised over x >= xmin
``Exponential(lam)``       p(x) proportional to exp(-lam * x) (geometric)
``Poisson(rate)``          Poisson pmf truncated to x >= xmin
========================  =====================================================

The module-level functions (:func:`pmf`, :func:`cdf`, :func:`log_likelihood`,
:func:`sample`) validate the support and dispatch to the parameter object.
All of them accept scalars or integer arrays for ``x``.
"""
from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass, fields
from typing import Callable, ClassVar

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "ModelKind",
    "PowerLaw",
    "Lognormal",
    "Exponential",
    "Poisson",
    "Sample",
    "hurwitz_zeta",
    "logpmf",
    "pmf",
    "cdf",
    "sf",
    "log_likelihood",
    "make_sampler",
    "sample",
    "quantile",
    "params_from_dict",
]

# B_2j / (2j)! for j = 1..12
_BERNOULLI_OVER_FACTORIAL = [
    float(b) / math.factorial(2 * j)
    for j, b in enumerate(
        [
            1 / 6,
            -1 / 30,
            1 / 42,
            -1 / 30,
            5 / 66,
            -691 / 2730,
            7 / 6,
            -3617 / 510,
            43867 / 798,
            -174611 / 330,
            854513 / 138,
            -236364091 / 2730,
        ],
        start=1,
    )
]

_MAX_INT_DRAW = 2.0**62


def hurwitz_zeta(alpha, xmin):
    """Hurwitz zeta function ``sum_{k>=0} (xmin + k)^-alpha``.

    Evaluated as a partial sum followed by the Euler-Maclaurin tail
    (integral term, half term and Bernoulli corrections). The number of
    explicit terms grows with ``alpha`` so that the correction series
    converges geometrically; the result has a relative error of a few ulp.

    ``xmin`` may be an array, in which case the result has the same shape.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 1.0 + 1e-9:
        raise DomainError(f"hurwitz_zeta needs finite alpha > 1, got {alpha}")
    q = np.asarray(xmin, dtype=float)
    if not np.all(np.isfinite(q)) or np.any(q < 1):
        raise DomainError("hurwitz_zeta needs finite xmin >= 1")
    return _hurwitz_zeta(alpha, q)


def _hurwitz_zeta(s, q):
    if np.ndim(q) == 0:
        return _hurwitz_zeta_scalar(s, float(q))
    q = np.asarray(q, dtype=float)
    n_terms = max(10, int(math.ceil(s)) + 20)
    k = np.arange(n_terms, dtype=float)
    head = np.sum((q[:, None] + k[None, :]) ** -s, axis=1)
    w = q + n_terms
    tail = w ** (1.0 - s) / (s - 1.0) + 0.5 * w**-s
    # Bernoulli corrections: (B_2j/(2j)!) * s(s+1)...(s+2j-2) * w^(-s-2j+1)
    rising = s
    power = w ** (-s - 1.0)
    for j, coeff in enumerate(_BERNOULLI_OVER_FACTORIAL, start=1):
        term = coeff * rising * power
        tail = tail + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(head + tail)):
            break
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power = power / (w * w)
    return head + tail


def _hurwitz_zeta_scalar(s, q):
    # same scheme as the array path, in plain floats for the optimiser's inner loop
    n_terms = max(10, int(math.ceil(s)) + 20)
    head = math.fsum((q + k) ** -s for k in range(n_terms))
    w = q + n_terms
    tail = w ** (1.0 - s) / (s - 1.0) + 0.5 * w**-s
    rising = s
    power = w ** (-s - 1.0)
    for j, coeff in enumerate(_BERNOULLI_OVER_FACTORIAL, start=1):
        term = coeff * rising * power
        tail += term
        if abs(term) <= 1e-17 * abs(head + tail):
            break
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= w * w
    return head + tail


class ModelKind(str, enum.Enum):
    POWER_LAW = "power_law"
    LOGNORMAL = "lognormal"
    EXPONENTIAL = "exponential"
    POISSON = "poisson"

    def __str__(self):
        return self.value


def _check_real(name, value, low=None, strict=True):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise DomainError(f"{name} must be a real number")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    if low is not None and (value <= low if strict else value < low):
        raise DomainError(f"{name} must be {'>' if strict else '>='} {low}, got {value}")
    return value


@dataclass(frozen=True)
class PowerLaw:
    alpha: float

    kind: ClassVar[ModelKind] = ModelKind.POWER_LAW
    names: ClassVar[tuple] = ("alpha",)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_real("alpha", self.alpha, 1.0))

    def log_upper(self, x):
        # log of the unnormalised mass on {x, x+1, ...}
        return np.log(_hurwitz_zeta(self.alpha, np.asarray(x, dtype=float)))

    def logpmf(self, x, xmin):
        x = np.asarray(x, dtype=float)
        return -self.alpha * np.log(x) - math.log(_hurwitz_zeta(self.alpha, float(xmin)))

    def sampler(self, xmin, table_size=4096):
        alpha = self.alpha
        xs = np.arange(xmin, xmin + table_size, dtype=float)
        table = np.cumsum(np.exp(self.logpmf(xs, xmin)))
        cap = float(xmin + table_size)

        def ratio(x):
            # x^-alpha / integral_x^{x+1} y^-alpha dy, decreasing towards 1
            return (alpha - 1.0) / (x * -np.expm1((1.0 - alpha) * np.log1p(1.0 / x)))

        r_cap = ratio(cap)

        def draw(n, rng):
            u = rng.random(n)
            idx = np.searchsorted(table, u, side="left")
            out = (xmin + idx).astype(np.int64)
            pending = np.flatnonzero(idx >= table_size)
            while pending.size:
                v = rng.random(pending.size)
                y = np.minimum(cap * (1.0 - rng.random(pending.size)) ** (-1.0 / (alpha - 1.0)), _MAX_INT_DRAW)
                x = np.floor(y)
                accept = v * r_cap <= ratio(x)
                out[pending[accept]] = x[accept].astype(np.int64)
                pending = pending[~accept]
            return out

        return draw


@dataclass(frozen=True)
class Lognormal:
    mu_log: float
    sigma_log: float

    kind: ClassVar[ModelKind] = ModelKind.LOGNORMAL
    names: ClassVar[tuple] = ("mu_log", "sigma_log")

    def __post_init__(self):
        object.__setattr__(self, "mu_log", _check_real("mu_log", self.mu_log))
        object.__setattr__(self, "sigma_log", _check_real("sigma_log", self.sigma_log, 0.0))

    def _z(self, edge):
        return (np.log(edge) - self.mu_log) / self.sigma_log

    def log_upper(self, x):
        return special.log_ndtr(-self._z(np.asarray(x, dtype=float) - 0.5))

    def logpmf(self, x, xmin):
        x = np.asarray(x, dtype=float)
        a = self._z(x - 0.5)
        b = self._z(x + 0.5)
        # log(Phi(b) - Phi(a)), evaluated on whichever side of the mode is stable
        upper = a > 0
        hi = np.where(upper, special.log_ndtr(-a), special.log_ndtr(b))
        lo = np.where(upper, special.log_ndtr(-b), special.log_ndtr(a))
        with np.errstate(divide="ignore"):
            mass = hi + np.log1p(-np.exp(lo - hi))
        return mass - float(self.log_upper(xmin))

    def sampler(self, xmin):
        mu, sigma = self.mu_log, self.sigma_log
        log_s0 = float(special.log_ndtr(-self._z(xmin - 0.5)))

        def draw(n, rng):
            # conditional inverse of the continuous law above xmin - 1/2, then
            # rounding to the nearest integer reproduces the half-integer bins
            log_v = np.log1p(-rng.random(n))
            z = -special.ndtri_exp(log_v + log_s0)
            y = np.minimum(np.exp(mu + sigma * z), _MAX_INT_DRAW)
            return np.maximum(np.floor(y + 0.5), xmin).astype(np.int64)

        return draw


@dataclass(frozen=True)
class Exponential:
    """Discrete exponential; ``lam`` is the decay rate in exp(-lam * x)."""

    lam: float

    kind: ClassVar[ModelKind] = ModelKind.EXPONENTIAL
    names: ClassVar[tuple] = ("lambda",)

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_real("lambda", self.lam, 0.0))

    @property
    def ratio(self):
        """Successive-value ratio exp(-lam) of the rank-ratio form."""
        return math.exp(-self.lam)

    @classmethod
    def from_ratio(cls, ratio):
        if not 0.0 < ratio < 1.0:
            raise DomainError(f"ratio must lie in (0, 1), got {ratio}")
        return cls(-math.log(ratio))

    def log_upper(self, x):
        return -self.lam * np.asarray(x, dtype=float)

    def logpmf(self, x, xmin):
        x = np.asarray(x, dtype=float)
        return math.log(-math.expm1(-self.lam)) - self.lam * (x - xmin)

    def sampler(self, xmin):
        lam = self.lam

        def draw(n, rng):
            k = np.floor(-np.log1p(-rng.random(n)) / lam)
            return (xmin + np.minimum(k, _MAX_INT_DRAW)).astype(np.int64)

        return draw


def _poisson_log_upper(k, rate):
    """log P(X >= k) for X ~ Poisson(rate), elementwise in integer k."""
    k = np.asarray(k, dtype=float)
    out = np.zeros_like(k)
    pos = k > 0
    if not np.any(pos):
        return out
    kp = k[pos]
    with np.errstate(divide="ignore"):
        val = np.log(special.gammainc(kp, rate))
    # deep upper tail: leading term times a geometric bound on the remainder
    bad = ~np.isfinite(val) | (val < -700)
    if np.any(bad):
        kb = kp[bad]
        lead = kb * math.log(rate) - rate - special.gammaln(kb + 1)
        val[bad] = lead - np.log1p(-rate / (kb + 1))
    out[pos] = val
    return out


@dataclass(frozen=True)
class Poisson:
    rate: float

    kind: ClassVar[ModelKind] = ModelKind.POISSON
    names: ClassVar[tuple] = ("rate",)

    def __post_init__(self):
        object.__setattr__(self, "rate", _check_real("rate", self.rate, 0.0))

    def log_upper(self, x):
        return _poisson_log_upper(x, self.rate)

    def logpmf(self, x, xmin):
        x = np.asarray(x, dtype=float)
        raw = x * math.log(self.rate) - self.rate - special.gammaln(x + 1.0)
        return raw - float(_poisson_log_upper(xmin, self.rate))

    def sampler(self, xmin):
        hi = max(xmin, math.ceil(self.rate)) + math.ceil(40.0 * math.sqrt(self.rate + 1.0)) + 50
        xs = np.arange(xmin, hi + 1, dtype=float)
        table = np.cumsum(np.exp(self.logpmf(xs, xmin)))
        table /= table[-1]

        def draw(n, rng):
            idx = np.searchsorted(table, rng.random(n), side="left")
            return (xmin + np.minimum(idx, len(table) - 1)).astype(np.int64)

        return draw


_PARAM_TYPES = {cls.kind: cls for cls in (PowerLaw, Lognormal, Exponential, Poisson)}


def params_from_dict(kind, values):
    """Build a parameter object from a kind and a ``{name: value}`` mapping."""
    cls = _PARAM_TYPES[ModelKind(kind)]
    return cls(*(values[name] for name in cls.names))


def params_to_dict(params):
    return dict(zip(params.names, _param_values(params)))


def _param_values(params):
    return tuple(getattr(params, f.name) for f in fields(params))


def _check_params(params):
    if type(params) not in _PARAM_TYPES.values():
        raise DomainError(f"unknown parameter object {params!r}")


def _check_xmin(xmin):
    if isinstance(xmin, bool) or not isinstance(xmin, numbers.Integral):
        if isinstance(xmin, numbers.Real) and float(xmin).is_integer():
            xmin = int(xmin)
        else:
            raise DomainError(f"xmin must be an integer, got {xmin!r}")
    if xmin < 1:
        raise DomainError(f"xmin must be >= 1, got {xmin}")
    return int(xmin)


def _check_support(x, xmin):
    xmin = _check_xmin(xmin)
    arr = np.asarray(x)
    if arr.size and not np.all(np.isfinite(arr)):
        raise DomainError("x must be finite")
    if arr.size and np.any(arr != np.floor(arr)):
        raise DomainError("x must be integer valued")
    if arr.size and np.min(arr) < xmin:
        raise DomainError(f"x must be >= xmin = {xmin}")
    return arr, xmin


def _scalar_or_array(x, values):
    return float(values) if np.ndim(x) == 0 else values


def logpmf(params, xmin, x):
    _check_params(params)
    arr, xmin = _check_support(x, xmin)
    return _scalar_or_array(x, params.logpmf(arr, xmin))


def pmf(params, xmin, x):
    """P(X = x) under ``params`` on the support {xmin, xmin+1, ...}."""
    return _scalar_or_array(x, np.exp(logpmf(params, xmin, x)))


def sf(params, xmin, x):
    """P(X > x)."""
    _check_params(params)
    arr, xmin = _check_support(x, xmin)
    out = np.exp(params.log_upper(arr + 1.0) - params.log_upper(xmin))
    return _scalar_or_array(x, np.clip(out, 0.0, 1.0))


def cdf(params, xmin, x):
    """P(X <= x) = sum of the pmf from xmin to x."""
    _check_params(params)
    arr, xmin = _check_support(x, xmin)
    out = -np.expm1(params.log_upper(np.asarray(arr, dtype=float) + 1.0) - params.log_upper(xmin))
    return _scalar_or_array(x, np.clip(out, 0.0, 1.0))


def log_likelihood(params, xmin, data):
    """Sum of log pmf over ``data``."""
    _check_params(params)
    arr, xmin = _check_support(data, xmin)
    if arr.size == 0:
        raise DomainError("log_likelihood needs at least one observation")
    return float(np.sum(params.logpmf(arr.ravel(), xmin)))


@dataclass(frozen=True)
class Sample:
    values: np.ndarray
    seed: int


def _check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def make_sampler(params, xmin) -> Callable[[int, np.random.Generator], np.ndarray]:
    """Return ``draw(n, rng)`` producing n inverse-CDF draws.

    Any lookup table is built once here, so repeated draws from the same
    model (the bootstrap's use case) are cheap.
    """
    _check_params(params)
    return params.sampler(_check_xmin(xmin))


def sample(params, xmin, n, seed):
    """Draw ``n`` values reproducibly from ``seed``."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    seed = _check_seed(seed)
    rng = np.random.default_rng(seed)
    values = make_sampler(params, xmin)(int(n), rng) if n else np.empty(0, dtype=np.int64)
    return Sample(values, seed)


def quantile(params, xmin, q):
    """Smallest integer x >= xmin with cdf(x) >= q, elementwise."""
    xmin = _check_xmin(xmin)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    out = np.empty(q.shape, dtype=np.int64)
    for i, level in enumerate(q):
        if not 0.0 <= level < 1.0:
            raise DomainError(f"quantile level must lie in [0, 1), got {level}")
        lo, hi = xmin, xmin
        step = 1
        while cdf(params, xmin, hi) < level:
            lo, hi = hi + 1, hi + step
            step *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if cdf(params, xmin, mid) >= level:
                hi = mid
            else:
                lo = mid + 1
        out[i] = lo
    return out
