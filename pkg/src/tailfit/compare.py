"""Vuong likelihood-ratio model selection between fitted models."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import DegenerateComparisonError, DomainError, ProtocolError
from .fit import FitConfig, FittedModel, _fit_sorted, as_data, fit_with_xmin_scan

__all__ = ["VuongResult", "vuong_test", "pairwise_with_shared_xmin", "bonferroni_adjust"]


@dataclass(frozen=True)
class VuongResult:
    """Normalised log-likelihood ratio; positive values favour model A.

    ``xmin`` and ``xmin_from`` are filled in by the shared-xmin protocol to
    record which model's threshold the comparison used.
    """

    statistic: float
    p_two_sided: float
    favored: str  # "A", "B" or "none"
    n: int
    kind_a: Optional[str] = None
    kind_b: Optional[str] = None
    xmin: Optional[int] = None
    xmin_from: Optional[str] = None

    @property
    def favored_kind(self):
        return {"A": self.kind_a, "B": self.kind_b}.get(self.favored)


def vuong_test(data_tail, fit_a: FittedModel, fit_b: FittedModel):
    if fit_a.xmin != fit_b.xmin:
        raise ProtocolError(f"models use different xmin ({fit_a.xmin} vs {fit_b.xmin})")
    tail = as_data(data_tail)
    if tail.size < 2:
        raise DomainError("Vuong test needs at least two observations")
    if tail[0] < fit_a.xmin:
        raise DomainError(f"data_tail contains values below xmin={fit_a.xmin}")
    ratios = fit_a.params.logpmf(tail, fit_a.xmin) - fit_b.params.logpmf(tail, fit_b.xmin)
    total = float(np.sum(ratios))
    spread = float(np.std(ratios))
    kinds = dict(kind_a=str(fit_a.kind), kind_b=str(fit_b.kind), xmin=fit_a.xmin)
    if spread == 0.0:
        if total == 0.0:
            return VuongResult(0.0, 1.0, "none", tail.size, **kinds)
        raise DegenerateComparisonError("log-likelihood ratios are constant and nonzero")
    statistic = total / (spread * math.sqrt(tail.size))
    p = float(special.erfc(abs(statistic) / math.sqrt(2.0)))
    favored = "A" if statistic > 0 else "B" if statistic < 0 else "none"
    return VuongResult(statistic, p, favored, tail.size, **kinds)


def pairwise_with_shared_xmin(data, kind_a, kind_b, config=None):
    """Two Vuong tests, one at each model's scanned xmin.

    For the first, A keeps its scanned fit and B is refitted at A's xmin;
    the second swaps the roles. Statistics are always oriented A versus B.
    """
    config = config or FitConfig()
    data = as_data(data)
    scan_a = fit_with_xmin_scan(kind_a, data, config)
    scan_b = fit_with_xmin_scan(kind_b, data, config)
    results = []
    for source, anchor in (("A", scan_a), ("B", scan_b)):
        xmin = anchor.xmin
        if source == "A":
            fa, fb = scan_a, _fit_sorted(scan_b.kind, data, xmin, config)
        else:
            fa, fb = _fit_sorted(scan_a.kind, data, xmin, config), scan_b
        tail = data[data >= xmin]
        res = vuong_test(tail, fa, fb)
        results.append(_annotate(res, source))
    return tuple(results)


def _annotate(res, source):
    return VuongResult(res.statistic, res.p_two_sided, res.favored, res.n,
                       res.kind_a, res.kind_b, res.xmin, source)


def bonferroni_adjust(p_values, m):
    """min(1, p * m) for each p."""
    if m is None or int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    p = np.asarray(p_values, dtype=float)
    if p.size > m:
        raise DomainError(f"m={m} is smaller than the number of tests ({p.size})")
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise DomainError("p-values must lie in [0, 1]")
    return np.minimum(1.0, p * m).tolist()
