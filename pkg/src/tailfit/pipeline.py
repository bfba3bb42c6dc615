"""Batch analysis across languages, summary tables and plot data."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import dist
from .dist import ModelKind
from .errors import DomainError, FitError
from .fit import FitConfig, _fit_at_min, as_data, fit_with_xmin_scan
from .gof import PLAUSIBILITY_THRESHOLD, bootstrap_p

__all__ = [
    "RunConfig",
    "AnalysisRow",
    "SummaryRow",
    "derive_seed",
    "run_batch",
    "summarize",
    "emit_plot_data",
    "rows_to_csv",
    "rows_to_json",
    "PRIMARY_PARAM",
]

PRIMARY_PARAM = {
    ModelKind.POWER_LAW: "alpha",
    ModelKind.LOGNORMAL: "mu_log",
    ModelKind.EXPONENTIAL: "lambda",
    ModelKind.POISSON: "rate",
}
PARAM_COLUMNS = ("alpha", "mu_log", "sigma_log", "lambda", "rate")


@dataclass(frozen=True)
class RunConfig:
    iterations: int = 10000
    seed: int = 0
    threshold: float = PLAUSIBILITY_THRESHOLD
    fit: FitConfig = field(default_factory=FitConfig)
    kinds: tuple = tuple(ModelKind)
    variants: tuple = (False, True)  # scan xmin?
    n_jobs: int = 1


@dataclass
class AnalysisRow:
    language_id: str
    kind: str
    used_xmin_scan: bool
    status: str
    n_types: int
    params: dict = field(default_factory=dict)
    xmin: Optional[int] = None
    n_tail: Optional[int] = None
    prop_fitted: Optional[float] = None
    ks: Optional[float] = None
    p_value: Optional[float] = None
    iterations: Optional[int] = None
    seed: Optional[int] = None
    n_exhausted: Optional[int] = None
    message: str = ""

    def flat(self):
        out = asdict(self)
        params = out.pop("params")
        for name in PARAM_COLUMNS:
            out[name] = params.get(name)
        return out


def derive_seed(master, *keys):
    """64-bit seed from a master seed and string/integer keys.

    Keys are hashed, so adding a language never changes another's seed.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for key in keys:
        h.update(b"\x1f" + str(key).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def _analyse(table, kind, scanned, config):
    data = as_data(table.values())
    seed = derive_seed(config.seed, table.language_id, kind.value, int(scanned))
    row = AnalysisRow(table.language_id, kind.value, scanned, "ok", table.n_types, seed=seed)
    try:
        if scanned:
            fitted = fit_with_xmin_scan(kind, data, config.fit)
        else:
            fitted = _fit_at_min(kind, data, config.fit)
    except FitError as exc:
        row.status, row.message = exc.status, str(exc)
        return row
    row.params = fitted.param_dict
    row.xmin, row.n_tail, row.ks = fitted.xmin, fitted.n_tail, fitted.ks
    row.prop_fitted = fitted.n_tail / table.n_types
    boot = bootstrap_p(data, fitted, config.iterations, seed, config.fit, n_jobs=config.n_jobs)
    row.iterations, row.n_exhausted = boot.iterations, boot.n_exhausted
    if boot.n_exhausted:
        row.status = "non-converged"
        row.message = f"{boot.n_exhausted} replicates could not be refitted"
    else:
        row.p_value = boot.p_value
    return row


def run_batch(tables, run_config=None):
    """Fit and bootstrap every (language, kind, variant) combination.

    Rows come back sorted by language, kind and variant. Failures are
    recorded in ``status`` rather than raised.
    """
    config = run_config or RunConfig()
    tables = list(tables)
    if not tables:
        raise DomainError("run_batch needs at least one frequency table")
    ids = [t.language_id for t in tables]
    if len(set(ids)) != len(ids):
        raise DomainError("language identifiers must be unique")
    kind_order = {k: i for i, k in enumerate(ModelKind)}
    kinds = sorted((ModelKind(k) for k in config.kinds), key=kind_order.get)
    rows = [
        _analyse(table, kind, scanned, config)
        for table in sorted(tables, key=lambda t: t.language_id)
        for kind in kinds
        for scanned in sorted(config.variants)
    ]
    return rows


@dataclass
class SummaryRow:
    kind: str
    used_xmin_scan: bool
    n_languages: int
    n_ok: int
    plausible_count: int
    plausible_pct: float
    param_name: str
    param_mean: Optional[float]
    param_sd: Optional[float]
    param_min: Optional[float]
    param_max: Optional[float]
    ks_mean: Optional[float]
    ks_sd: Optional[float]
    p_mean: Optional[float]
    p_sd: Optional[float]
    prop_fitted_mean: Optional[float]
    sd_defined: bool


def _stats(values):
    if not values:
        return None, None, None, None, False
    arr = np.asarray(values, dtype=float)
    sd_defined = arr.size > 1
    sd = float(np.std(arr, ddof=1)) if sd_defined else 0.0
    return float(arr.mean()), sd, float(arr.min()), float(arr.max()), sd_defined


def summarize(rows, threshold=PLAUSIBILITY_THRESHOLD):
    """One summary line per (kind, variant) present in ``rows``.

    A row is plausible when its p-value exceeds ``threshold``. Parameter,
    KS and prop-fitted statistics use the rows whose fit succeeded; SDs are
    sample SDs and are reported as 0 with ``sd_defined`` False when only
    one value is available.
    """
    groups = {}
    for row in rows:
        groups.setdefault((row.kind, row.used_xmin_scan), []).append(row)
    kind_order = {k.value: i for i, k in enumerate(ModelKind)}
    out = []
    for (kind, scanned), group in sorted(groups.items(), key=lambda kv: (kind_order.get(kv[0][0], 99), kv[0][1])):
        fitted = [r for r in group if r.params]
        name = PRIMARY_PARAM[ModelKind(kind)]
        n_languages = len({r.language_id for r in group})
        plausible = sum(1 for r in group if r.status == "ok" and r.p_value is not None and r.p_value > threshold)
        pm, psd, pmin, pmax, sd_defined = _stats([r.params[name] for r in fitted])
        ks_mean, ks_sd, *_ = _stats([r.ks for r in fitted])
        p_mean, p_sd, *_ = _stats([r.p_value for r in group if r.p_value is not None])
        prop_mean = _stats([r.prop_fitted for r in fitted])[0]
        out.append(SummaryRow(
            kind, scanned, n_languages, sum(r.status == "ok" for r in group), plausible,
            100.0 * plausible / n_languages if n_languages else 0.0,
            name, pm, psd, pmin, pmax, ks_mean, ks_sd, p_mean, p_sd, prop_mean, sd_defined,
        ))
    return out


def _records(rows):
    return [r.flat() if isinstance(r, AnalysisRow) else asdict(r) for r in rows]


def rows_to_csv(rows, stream=None):
    records = _records(rows)
    out = stream if stream is not None else io.StringIO()
    if records:
        writer = csv.DictWriter(out, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: ("" if v is None else v) for k, v in rec.items()})
    if stream is None:
        return out.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def rows_to_json(rows, stream=None):
    records = [{k: _json_safe(v) for k, v in rec.items()} for rec in _records(rows)]
    text = json.dumps(records, indent=2, ensure_ascii=False)
    if stream is None:
        return text
    stream.write(text + "\n")


def _fit_label(fitted):
    return f"expected_{fitted.kind.value}_xmin{fitted.xmin}"


def emit_plot_data(table, fits=()):
    """Rank-frequency TSV for external plotting.

    Columns: rank, segment, frequency, log10_rank, log10_frequency, then
    one expected-frequency column per fit. A fit's expected frequency at
    tail rank k is the model quantile at 1 - (k - 1/2) / n_tail; rows whose
    observed frequency lies below the fit's xmin are left blank.
    """
    if not table.counts:
        raise DomainError("empty frequency table")
    items = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    columns = ["rank", "segment", "frequency", "log10_rank", "log10_frequency"]
    columns += [_fit_label(f) for f in fits]
    expected = []
    for fitted in fits:
        n_tail = sum(1 for _, c in items if c >= fitted.xmin)
        levels = 1.0 - (np.arange(1, n_tail + 1) - 0.5) / n_tail
        expected.append(dist.quantile(fitted.params, fitted.xmin, levels) if n_tail else [])
    lines = ["\t".join(columns)]
    for rank, (segment, count) in enumerate(items, start=1):
        cells = [str(rank), segment, str(count), repr(math.log10(rank)), repr(math.log10(count))]
        for fitted, exp in zip(fits, expected):
            cells.append(str(int(exp[rank - 1])) if count >= fitted.xmin else "")
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"
