"""KS goodness of fit and semi-parametric bootstrap p-values."""
from __future__ import annotations

import math
import numbers
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dist
from .errors import DomainError, FitError, ProtocolError
from .fit import FitConfig, FittedModel, _fit_at_min, _fit_sorted, _ks, as_data, fit_with_xmin_scan

__all__ = [
    "BootstrapResult",
    "ks_distance",
    "empirical_p",
    "is_plausible",
    "replicate_rng",
    "bootstrap_p",
]

PLAUSIBILITY_THRESHOLD = 0.1
RETRY_BUDGET = 10


@dataclass(frozen=True)
class BootstrapResult:
    iterations: int
    observed_ks: float
    p_value: float
    seed: int
    refit_xmin: bool
    # replicates whose refit failed RETRY_BUDGET + 1 times; counted as exceeding observed_ks
    n_exhausted: int = 0
    replicate_ks: np.ndarray = field(default=None, repr=False, compare=False)

    def plausible(self, threshold=PLAUSIBILITY_THRESHOLD):
        return is_plausible(self.p_value, threshold)


def ks_distance(data_tail, params, xmin):
    """Largest gap between the empirical and model CDFs over observed values.

    Both CDFs are conditioned on x >= xmin and compared at every distinct
    value present in ``data_tail``.
    """
    arr, xmin = dist._check_support(data_tail, xmin)
    if arr.size == 0:
        raise DomainError("ks_distance needs a nonempty tail")
    dist._check_params(params)
    return _ks(np.sort(arr.astype(np.int64).ravel()), params, xmin)


def empirical_p(replicate_ks, observed_ks):
    """Fraction of replicate KS distances at or above the observed one."""
    replicate_ks = np.asarray(replicate_ks, dtype=float)
    if replicate_ks.size == 0:
        raise DomainError("need at least one replicate")
    return int(np.count_nonzero(replicate_ks >= observed_ks)) / replicate_ks.size


def is_plausible(p_value, threshold=PLAUSIBILITY_THRESHOLD):
    """Plausible iff p > threshold; p == threshold rejects."""
    return p_value is not None and p_value > threshold


def replicate_rng(seed, index):
    """Independent generator for replicate ``index`` of master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _replicate_ks(index, data, below, fitted, draw, seed, config):
    rng = replicate_rng(seed, index)
    n = data.size
    share = fitted.n_tail / n
    for _ in range(RETRY_BUDGET + 1):
        n_model = int(rng.binomial(n, share))
        parts = [draw(n_model, rng)]
        if n_model < n:
            parts.append(below[rng.integers(0, below.size, n - n_model)])
        replicate = np.sort(np.concatenate(parts))
        try:
            if fitted.xmin_rule == "scan":
                refit = fit_with_xmin_scan(fitted.kind, replicate, config)
            elif fitted.xmin_rule == "min":
                refit = _fit_at_min(fitted.kind, replicate, config)
            else:
                refit = _fit_sorted(fitted.kind, replicate, fitted.xmin, config)
        except FitError:
            continue
        return refit.ks
    return math.inf


def _run_chunk(indices, data, fitted, seed, config):
    below = data[data < fitted.xmin]
    draw = dist.make_sampler(fitted.params, fitted.xmin)
    return [_replicate_ks(i, data, below, fitted, draw, seed, config) for i in indices]


def bootstrap_p(data, fitted: FittedModel, iterations, seed, config=None, n_jobs=1):
    """Monte Carlo p-value for the hypothesis that ``fitted`` generated ``data``.

    Each replicate has the size of ``data``: with probability n_tail/n a
    point is drawn from the fitted model, otherwise it is resampled from the
    observed points below xmin. The replicate is refitted the same way the
    original was (same ``xmin_rule``: scanned, smallest value, or the fixed
    xmin) and its KS distance recorded. Replicate ``i`` draws from its own
    stream derived from ``(seed, i)``, so the result does not depend on
    ``n_jobs``.
    """
    config = config or FitConfig()
    if isinstance(iterations, bool) or not isinstance(iterations, numbers.Integral) or iterations < 1:
        raise DomainError(f"iterations must be a positive integer, got {iterations!r}")
    seed = dist._check_seed(seed)
    data = as_data(data)
    if int(np.count_nonzero(data >= fitted.xmin)) != fitted.n_tail:
        raise ProtocolError("fitted model was not produced from this data (tail size differs)")

    indices = list(range(int(iterations)))
    if n_jobs == 1:
        ks = _run_chunk(indices, data, fitted, seed, config)
    else:
        chunks = [c.tolist() for c in np.array_split(indices, max(1, min(n_jobs * 4, len(indices))))]
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            futures = [pool.submit(_run_chunk, c, data, fitted, seed, config) for c in chunks]
            ks = [v for f in futures for v in f.result()]
    ks = np.asarray(ks)
    return BootstrapResult(
        iterations=int(iterations),
        observed_ks=fitted.ks,
        p_value=empirical_p(ks, fitted.ks),
        seed=seed,
        refit_xmin=fitted.scanned,
        n_exhausted=int(np.count_nonzero(np.isinf(ks))),
        replicate_ks=ks,
    )
