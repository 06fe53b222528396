"""Command-line front end.

Subcommands: ``fit``, ``sample``, ``test``, ``simulate``, ``power``,
``reproduce`` and ``verify``. Exit status is 0 on success, 1 when a
reproduction or verification check fails, 2 on malformed input or
out-of-domain parameters and 3 when the data carry no information (every
observation zero).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import experiments as exp
from .data import DATASETS, CountData, FrequencyFileError, default_gof_bins, format_frequency_text, parse_bin
from .data import read_frequency_file
from .distribution import RSGParams, SGParams
from .estimation import DegenerateDataError
from .inference import gof, lr_test
from .models import MODELS, fit_model
from .reference import POWER_BETAS, POWER_P_GRID
from .sampling import RngStream, sample

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3


class UsageError(Exception):
    """Bad input; reported on stderr with exit status 2."""


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def fmt(x, digits: int = 6) -> str:
    """``x`` to ``digits`` significant digits, rounding half to even."""
    if x is None:
        return "-"
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    if x == 0.0:
        return "0"
    d = Decimal(repr(x))
    exponent = d.adjusted()
    q = Decimal(1).scaleb(exponent - digits + 1)
    r = d.quantize(q, rounding=ROUND_HALF_EVEN).normalize()
    if -5 <= exponent < 16:
        return format(r, "f")
    return format(r, "e")


def _table(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(str(c).rjust(w) for c, w in zip(r, widths)) for r in rows)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _load_data(spec: str) -> CountData:
    if spec in DATASETS and not os.path.exists(spec):
        return DATASETS[spec]()
    try:
        return read_frequency_file(spec)
    except FrequencyFileError as exc:
        raise UsageError(f"{spec}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc.strerror}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not (0 <= v < 2 ** 64):
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _bins(text: Optional[str], data: CountData):
    if text is None:
        return default_gof_bins(data)
    try:
        return [parse_bin(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"--bins: {exc}") from None


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------


def fit_report(data: CountData, model: str, resolution: float, bins=None, seed=None, exhaustive=False) -> dict:
    """Fit ``model`` and assemble the JSON report."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = fit_model(model, data, resolution=resolution, exhaustive=exhaustive)
        g = gof(data, model, fit.params, bins=bins)
        lr = lr_test(data, resolution=resolution, mle=fit.mle) if model == "rsg" else None
    disp = fit.dispersion
    return {
        "schema_version": SCHEMA_VERSION,
        "model": model,
        "params": {"p": fit.params[0], "beta": fit.params[1]},
        "loglik": fit.loglik,
        "aic": fit.aic,
        "converged": fit.converged,
        "n": data.n,
        "gof": {
            "chi2": g.chi2,
            "df": g.df,
            "p_value": g.p_value,
            "bins": [{"bin": b, "observed": o, "expected": e} for b, o, e in g.rows()],
        },
        "lr": None if lr is None else {"lambda": lr.lam, "reject": lr.reject_at_5pct, "p_tilde": lr.p_tilde},
        "dispersion": {"var_p": float(disp[0, 0]), "var_beta": float(disp[1, 1]), "cov": float(disp[0, 1])},
        "meta": {"seed": seed, "resolution": resolution, "exhaustive": exhaustive, "version": __version__},
        "warnings": sorted({str(w.message) for w in caught}),
    }


def _fit_text(rep: dict) -> str:
    lines = [f"model {rep['model']}   n = {rep['n']}", ""]
    rows = [("x", "observed", "expected")]
    rows += [(b["bin"], fmt(b["observed"]), fmt(b["expected"])) for b in rep["gof"]["bins"]]
    lines.append(_table(rows))
    g = rep["gof"]
    d = rep["dispersion"]
    lines += [
        "",
        f"chi2      {fmt(g['chi2'])}",
        f"df        {g['df']}",
        f"p-value   {fmt(g['p_value'])}",
        f"p         {fmt(rep['params']['p'])}",
        f"beta      {fmt(rep['params']['beta'])}",
        f"var(p)    {fmt(d['var_p'])}",
        f"var(beta) {fmt(d['var_beta'])}",
        f"cov       {fmt(d['cov'])}",
        f"loglik    {fmt(rep['loglik'])}",
        f"AIC       {fmt(rep['aic'])}",
    ]
    if rep["lr"] is not None:
        dec = "H0 rejected" if rep["lr"]["reject"] else "H0 accepted"
        lines.append(f"LR lambda {fmt(rep['lr']['lambda'])}  ({dec})")
    if not rep["converged"]:
        lines.append("note: maximum on the edge of the search lattice")
    for w in rep["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def cmd_fit(args) -> int:
    data = _load_data(args.data)
    bins = _bins(args.bins, data)
    rep = fit_report(data, args.model, args.resolution, bins=bins, exhaustive=args.exhaustive)
    _write(args.output, exp.to_json(rep) if args.format == "json" else _fit_text(rep))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    try:
        params = RSGParams(args.p, args.beta) if args.beta is not None else SGParams(args.p, args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 1:
        raise UsageError("--n must be positive")
    x = sample(params, args.n, RngStream(args.seed, args.stream),
               method="root" if args.method == "paper" else args.method)
    if args.summary:
        text = format_frequency_text(CountData.from_observations(x))
    else:
        text = "\n".join(str(int(v)) for v in x) + "\n"
    _write(args.output, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# test
# ---------------------------------------------------------------------------


def cmd_test(args) -> int:
    data = _load_data(args.data)
    rep = lr_test(data, resolution=args.resolution)
    if args.format == "json":
        out = {
            "schema_version": SCHEMA_VERSION,
            "lambda": rep.lam,
            "p_tilde": rep.p_tilde,
            "p_hat": rep.p_hat,
            "beta_hat": rep.beta_hat,
            "p_value": rep.p_value,
            "critical": rep.critical,
            "reject": rep.reject_at_5pct,
            "decision": rep.decision,
            "meta": {"seed": None, "resolution": args.resolution, "version": __version__},
        }
        _write(args.output, exp.to_json(out))
    else:
        _write(
            args.output,
            f"lambda     {fmt(rep.lam)}\n"
            f"p_tilde    {fmt(rep.p_tilde)}\n"
            f"(p, beta)  ({fmt(rep.p_hat)}, {fmt(rep.beta_hat)})\n"
            f"critical   {fmt(rep.critical)}\n"
            f"decision   {rep.decision}\n",
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate / power
# ---------------------------------------------------------------------------


def _perf_rows(ps, betas, sizes, reps, seed, resolution):
    rows = []
    for p in ps:
        for b in betas:
            for n in sizes:
                try:
                    cell = exp.SimCell(p, b, n, reps, seed)
                except ValueError as exc:
                    raise UsageError(str(exc)) from None
                rows.append(exp.mle_performance(cell, resolution=resolution))
    return rows


def cmd_simulate(args) -> int:
    rows = _perf_rows([args.p], [args.beta], args.sizes, args.reps, args.seed, args.resolution)
    _write(args.output, exp.performance_csv(rows))
    if args.json:
        meta = {"seed": args.seed, "resolution": args.resolution, "reps": args.reps, "version": __version__}
        _write(args.json, exp.to_json({"schema_version": SCHEMA_VERSION, "meta": meta,
                                       "rows": [r.as_dict() for r in rows]}))
    return EXIT_OK


def _power(p_grid, betas, sizes, reps, level, seed, resolution):
    try:
        return [exp.power_study(p, betas, sizes, reps, level=level, seed=seed, resolution=resolution) for p in p_grid]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _power_json(results, args) -> str:
    return exp.to_json({
        "schema_version": SCHEMA_VERSION,
        "meta": {
            "seed": args.seed,
            "reps": args.reps,
            "level": args.level,
            "resolution": args.resolution,
            "version": __version__,
            "assumptions": "p grid and replication count are choices of this run, not published values",
        },
        "results": [
            {"p": r.p, "betas": list(r.betas), "sizes": list(r.sizes), "critical": r.critical, "rates": r.rates}
            for r in results
        ],
    })


def cmd_power(args) -> int:
    results = _power(args.p_grid, args.betas, args.sizes, args.reps, args.level, args.seed, args.resolution)
    _write(args.output, exp.power_csv(results))
    if args.json:
        _write(args.json, _power_json(results, args))
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------


def _report_checks(checks, notes=()) -> int:
    for c in checks:
        print(c.line())
    for n in notes:
        print(f"note: {n}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def _table_text(rep) -> str:
    names = list(MODELS)
    rows = [["x", "observed"] + names]
    for k, b in enumerate(rep.gofs["rsg"].bins):
        rows.append([str(b), fmt(rep.gofs["rsg"].observed[k])] + [fmt(rep.gofs[m].expected[k]) for m in names])
    rows.append(["chi2", ""] + [fmt(rep.gofs[m].chi2) for m in names])
    rows.append(["df", ""] + [str(rep.gofs[m].df) for m in names])
    rows.append(["p-value", ""] + [fmt(rep.gofs[m].p_value) for m in names])
    rows.append(["param 1", ""] + [fmt(rep.fits[m].params[0]) for m in names])
    rows.append(["param 2", ""] + [fmt(rep.fits[m].params[1]) for m in names])
    rows.append(["var 1", ""] + [fmt(rep.fits[m].variances[0]) for m in names])
    rows.append(["var 2", ""] + [fmt(rep.fits[m].variances[1]) for m in names])
    rows.append(["cov", ""] + [fmt(rep.fits[m].cov) for m in names])
    rows.append(["AIC", ""] + [fmt(rep.fits[m].aic) for m in names])
    lr = rep.lr
    tail = f"\nLR lambda = {fmt(lr.lam)}, {lr.decision}\nAIC ranking: {' < '.join(rep.ranking)}\n"
    return f"{rep.dataset} (n = {rep.data.n})\n\n" + _table(rows) + "\n" + tail


def cmd_reproduce(args) -> int:
    outdir = args.outdir
    if outdir:
        os.makedirs(outdir, exist_ok=True)
    if args.table in ("2", "3"):
        dataset = "claims" if args.table == "2" else "ticks"
        rep = exp.reproduce_table(dataset, resolution=args.resolution or exp.TABLE_RESOLUTION)
        print(_table_text(rep))
        for name, v in rep.variants.items():
            print(f"rsg variant {name}: p={fmt(v['p'])} beta={fmt(v['beta'])} AIC={fmt(v['aic'])} "
                  f"lambda={fmt(v['lambda'])}")
        if outdir:
            _write(os.path.join(outdir, f"table{args.table}.json"), exp.to_json(rep.as_dict()))
        return _report_checks(rep.checks, rep.notes)

    resolution = args.resolution or exp.SIM_RESOLUTION
    if args.table == "1":
        rows = _perf_rows(args.p_grid or (0.2, 0.5, 0.8), args.betas or (0.2, 0.5, 0.8),
                          args.sizes or (50, 100, 200, 300, 400, 500), args.reps, args.seed, resolution)
        text = exp.performance_csv(rows)
        if outdir:
            _write(os.path.join(outdir, "table1.csv"), text)
        else:
            sys.stdout.write(text)
        return _report_checks(exp.performance_checks(rows))

    results = _power(args.p_grid or POWER_P_GRID, args.betas or POWER_BETAS, args.sizes or (50, 100, 200, 300),
                     args.reps, args.level, args.seed, resolution)
    text = exp.power_csv(results)
    if outdir:
        _write(os.path.join(outdir, "power.csv"), text)
        args.resolution = resolution
        _write(os.path.join(outdir, "power.json"), _power_json(results, args))
    else:
        sys.stdout.write(text)
    return _report_checks(exp.power_checks(results))


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    from . import distribution as dist
    from .oracles import run_oracles

    pmf = None
    if args.perturb_pmf:
        eps = args.perturb_pmf

        def pmf(params, x):
            return dist.pmf(params, x) * (1.0 + eps)

    results = run_oracles(dense=args.grid == "dense", pmf=pmf)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed))
        return EXIT_CHECK_FAILED
    print(f"all {len(results)} checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="skewgeom", description="Skewed geometric count models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_arg(p):
        p.add_argument("--data", required=True, help="bin,count file or a built-in dataset (claims, ticks)")

    p = sub.add_parser("fit", help="fit a model to a frequency file")
    data_arg(p)
    p.add_argument("--model", default="rsg", choices=list(MODELS))
    p.add_argument("--resolution", type=float, default=1e-4)
    p.add_argument("--exhaustive", action="store_true", help="evaluate every lattice point (slow at 1e-4)")
    p.add_argument("--bins", help="comma-separated goodness-of-fit bins, e.g. 0,1,2,3,4+")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", help="draw random counts")
    p.add_argument("--p", type=float, required=True)
    shape = p.add_mutually_exclusive_group(required=True)
    shape.add_argument("--beta", type=float)
    shape.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--stream", type=_seed, default=0)
    # "paper" is an accepted alias of "root"
    p.add_argument("--method", choices=("inverse", "root", "grid", "paper"), default="inverse")
    p.add_argument("--summary", action="store_true", help="emit a bin,count frequency table")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("test", help="likelihood ratio test of the geometric sub-model")
    data_arg(p)
    p.add_argument("--resolution", type=float, default=1e-4)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="bias, MSE and interval of the MLE by simulation")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--sizes", type=_ints, default=[50, 100, 200, 300, 400, 500])
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--resolution", type=float, default=exp.SIM_RESOLUTION)
    p.add_argument("--output", "-o", help="CSV destination (default stdout)")
    p.add_argument("--json", help="also write JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power", help="rejection rate of the likelihood ratio test")
    p.add_argument("--p-grid", type=_floats, default=list(POWER_P_GRID))
    p.add_argument("--betas", type=_floats, default=list(POWER_BETAS))
    p.add_argument("--sizes", type=_ints, default=[50, 100, 200, 300])
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--resolution", type=float, default=exp.SIM_RESOLUTION)
    p.add_argument("--output", "-o", help="CSV destination (default stdout)")
    p.add_argument("--json", help="also write JSON here")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("reproduce", help="rerun a published table and compare")
    p.add_argument("--table", required=True, choices=("1", "2", "3", "power"))
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=_seed, default=20240501)
    p.add_argument("--resolution", type=float)
    p.add_argument("--p-grid", type=_floats)
    p.add_argument("--betas", type=_floats)
    p.add_argument("--sizes", type=_ints)
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("verify", help="check closed forms against independent computations")
    p.add_argument("--grid", choices=("default", "dense"), default="default")
    p.add_argument("--perturb-pmf", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"skewgeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDataError as exc:
        print(f"skewgeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"skewgeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
