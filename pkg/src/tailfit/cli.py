"""Command-line interface: ``tailfit <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager

from . import corpus, pipeline
from .compare import bonferroni_adjust, pairwise_with_shared_xmin, vuong_test
from .dist import ModelKind
from .errors import FitError, TailfitError
from .fit import FitConfig, FitFailure, as_data, fit_all, fit_fixed_xmin, fit_with_xmin_scan
from .generate import (
    BirthDeathConfig,
    UrnConfig,
    simulate_birth_death,
    simulate_preferential_attachment,
    simulate_stick_breaking,
)

log = logging.getLogger("tailfit")

KIND_CHOICES = [k.value for k in ModelKind]


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _read_tables(path):
    if path == "-":
        return corpus.parse_frequency_table(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return corpus.parse_frequency_table(fh)


def _write_records(rows, fmt, path):
    with _open_out(path) as out:
        if fmt == "json":
            pipeline.rows_to_json(rows, out)
        else:
            pipeline.rows_to_csv(rows, out)


def _fit_config(args):
    return FitConfig(min_tail=args.min_tail)


def _variants(name):
    return {"fixed": (False,), "scan": (True,), "both": (False, True)}[name]


def cmd_ingest(args):
    if args.input == "-":
        lists = corpus.parse_wordlist(sys.stdin)
    else:
        with open(args.input, encoding="utf-8") as fh:
            lists = corpus.parse_wordlist(fh)
    kept = corpus.filter_min_words(lists, args.min_words)
    for wl in lists:
        if wl not in kept:
            log.warning("dropping %s: %d words < %d", wl.language_id, len(wl), args.min_words)
    with _open_out(args.output) as out:
        corpus.write_frequency_table([corpus.count_segments(wl) for wl in kept], out)


def _fit_record(language_id, n_types, fitted):
    rec = {"language_id": language_id, "kind": str(fitted.kind), "used_xmin_scan": fitted.scanned}
    if isinstance(fitted, FitFailure):
        rec.update(status=fitted.status, message=fitted.message)
        return rec
    rec.update(status="ok", xmin=fitted.xmin, n_tail=fitted.n_tail,
               prop_fitted=fitted.n_tail / n_types, log_likelihood=fitted.log_likelihood, ks=fitted.ks)
    for name in pipeline.PARAM_COLUMNS:
        rec[name] = fitted.param_dict.get(name)
    return rec


def cmd_fit(args):
    config = _fit_config(args)
    rows = []
    for table in sorted(_read_tables(args.input), key=lambda t: t.language_id):
        for fitted in fit_all(table.values(), config):
            rows.append(_fit_record(table.language_id, table.n_types, fitted))
    _write_dicts(rows, args.format, args.output)


def _write_dicts(rows, fmt, path):
    columns = []
    for row in rows:
        columns += [k for k in row if k not in columns]
    with _open_out(path) as out:
        if fmt == "json":
            json.dump(rows, out, indent=2, ensure_ascii=False)
            out.write("\n")
        else:
            writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: ("" if row.get(k) is None else row[k]) for k in columns})


def _run_config(args, kinds, variants):
    return pipeline.RunConfig(
        iterations=args.iterations, seed=args.seed, threshold=args.threshold,
        fit=_fit_config(args), kinds=tuple(kinds), variants=variants, n_jobs=args.jobs,
    )


def cmd_gof(args):
    kinds = args.kind or KIND_CHOICES
    rows = pipeline.run_batch(_read_tables(args.input), _run_config(args, kinds, _variants(args.variant)))
    _write_records(rows, args.format, args.output)


def cmd_batch(args):
    tables = _read_tables(args.input)
    rows = pipeline.run_batch(tables, _run_config(args, KIND_CHOICES, (False, True)))
    _write_records(rows, args.format, args.output)
    summary = pipeline.summarize(rows, args.threshold)
    if args.summary is None:
        pipeline.rows_to_csv(summary, sys.stderr)
    else:
        _write_records(summary, args.format, args.summary)


def _vuong_record(language_id, scheme, res, error=None):
    rec = {"language_id": language_id, "scheme": scheme}
    if error is not None:
        rec.update(status=getattr(error, "status", "failed"), message=str(error))
        return rec
    rec.update(status="ok", kind_a=res.kind_a, kind_b=res.kind_b, xmin=res.xmin,
               xmin_from=res.xmin_from, n=res.n, statistic=res.statistic,
               p_two_sided=res.p_two_sided, favored=res.favored_kind or "none")
    return rec


def cmd_compare(args):
    config = _fit_config(args)
    kind_a, kind_b = args.kinds
    tables = sorted(_read_tables(args.input), key=lambda t: t.language_id)
    rows = []
    for table in tables:
        data = as_data(table.values())
        try:
            fa = fit_fixed_xmin(kind_a, data, None, config)
            fb = fit_fixed_xmin(kind_b, data, None, config)
            rows.append(_vuong_record(table.language_id, "whole", vuong_test(data, fa, fb)))
        except TailfitError as exc:
            rows.append(_vuong_record(table.language_id, "whole", None, exc))
        try:
            for res in pairwise_with_shared_xmin(data, kind_a, kind_b, config):
                rows.append(_vuong_record(table.language_id, f"xmin_from_{res.xmin_from}", res))
        except TailfitError as exc:
            rows.append(_vuong_record(table.language_id, "shared_xmin", None, exc))
    # one Bonferroni family per scheme, sized by the number of languages
    m = max(1, len(tables))
    for scheme in sorted({r["scheme"] for r in rows}):
        ok = [r for r in rows if r["scheme"] == scheme and r["status"] == "ok"]
        for row, adj in zip(ok, bonferroni_adjust([r["p_two_sided"] for r in ok], m)):
            row["p_bonferroni"] = adj
            row["significant"] = adj < args.alpha
    _write_dicts(rows, args.format, args.output)


def cmd_simulate(args):
    if args.process == "stick":
        spectra = simulate_stick_breaking(args.n, args.runs, args.seed)
        with _open_out(args.output) as out:
            out.write("run\t" + "\t".join(f"rank{k}" for k in range(1, args.n + 1)) + "\n")
            for i, row in enumerate(spectra, start=1):
                out.write(f"{i}\t" + "\t".join(repr(float(v)) for v in row) + "\n")
        return
    tables = []
    for run in range(args.runs):
        seed = pipeline.derive_seed(args.seed, args.process, run)
        name = f"{args.prefix}{run + 1:03d}"
        if args.process == "urn":
            cfg = UrnConfig(args.n, args.balls, seed)
            tables.append(simulate_preferential_attachment(cfg, name))
        else:
            cfg = BirthDeathConfig(args.birth, args.death, args.n, args.steps, seed)
            tables.append(simulate_birth_death(cfg, name))
    with _open_out(args.output) as out:
        corpus.write_frequency_table(tables, out)


def cmd_plot(args):
    tables = {t.language_id: t for t in _read_tables(args.input)}
    if args.language not in tables:
        raise TailfitError(f"language {args.language!r} not found in {args.input}")
    table = tables[args.language]
    config = _fit_config(args)
    fits = []
    for kind in args.kind or KIND_CHOICES:
        for scanned in _variants(args.variant):
            try:
                if scanned:
                    fits.append(fit_with_xmin_scan(kind, table.values(), config))
                else:
                    fits.append(fit_fixed_xmin(kind, table.values(), None, config))
            except FitError as exc:
                log.warning("skipping %s (%s): %s", kind, "scan" if scanned else "fixed", exc)
    with _open_out(args.output) as out:
        out.write(pipeline.emit_plot_data(table, fits))


def build_parser():
    parser = argparse.ArgumentParser(prog="tailfit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeds=False):
        p.add_argument("input", help="frequency TSV (language, segment, count); '-' for stdin")
        p.add_argument("-o", "--output", default="-", help="output path (default stdout)")
        p.add_argument("--min-tail", type=int, default=5)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        if seeds:
            p.add_argument("--iterations", type=int, default=10000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--threshold", type=float, default=0.1)
            p.add_argument("--jobs", type=int, default=1, help="worker processes for the bootstrap")

    p = sub.add_parser("ingest", help="wordlist TSV -> frequency TSV")
    p.add_argument("input", help="wordlist TSV (language, word); '-' for stdin")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--min-words", type=int, default=corpus.MIN_WORDS)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="maximum-likelihood fits, every kind and variant")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("gof", help="fits plus bootstrapped p-values")
    common(p, seeds=True)
    p.add_argument("--kind", action="append", choices=KIND_CHOICES)
    p.add_argument("--variant", choices=["fixed", "scan", "both"], default="both")
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("compare", help="Vuong tests between two kinds")
    common(p)
    p.add_argument("--kinds", nargs=2, choices=KIND_CHOICES, default=["exponential", "lognormal"])
    p.add_argument("--alpha", type=float, default=0.05, help="significance level after correction")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("batch", help="full analysis: all kinds, both variants, plus summary")
    common(p, seeds=True)
    p.add_argument("--summary", default=None, help="summary output path (default: stderr)")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("simulate", help="synthetic frequency data")
    p.add_argument("process", choices=["urn", "birth-death", "stick"])
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--n", type=int, default=25, help="urns / types / stick parts")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--balls", type=int, default=10000)
    p.add_argument("--birth", type=float, default=2.0)
    p.add_argument("--death", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=100000)
    p.add_argument("--prefix", default="sim")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", help="rank-frequency plot data for one language")
    common(p)
    p.add_argument("--language", required=True)
    p.add_argument("--kind", action="append", choices=KIND_CHOICES)
    p.add_argument("--variant", choices=["fixed", "scan", "both"], default="scan")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (TailfitError, OSError) as exc:
        print(f"tailfit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
