"""Command-line interface: ``fracx {eval, dist-table, sample, verify, asym}``.

Tables are CSV with a header row, '.' decimals and 17 significant digits;
metadata goes into '#'-prefixed comment rows.  Exit codes: 0 success,
1 failed verification, 2 domain error, 3 non-convergence (the rows computed
so far are flushed, followed by a comment row naming the failure).
The environment variable FRACX_PRECISION_BITS caps the working precision.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import stats

from . import dist, mc, specfun, verify
from .errors import DomainError, EnvelopeViolated, MissingTail, NonConvergent, NotARandomVariable, \
    QuadratureFailure
from .specfun import EvalConfig, KSParams

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_NONCONV = 0, 1, 2, 3
_DOMAIN_ERRORS = (DomainError, MissingTail, NotARandomVariable, EnvelopeViolated)
_NONCONV_ERRORS = (NonConvergent, QuadratureFailure)


@dataclass
class CommandConfig:
    command: str
    flags: dict = field(default_factory=dict)
    seed: Optional[int] = None
    output: Optional[str] = None
    format: str = "csv"


def jsonable(obj):
    """Convert numpy scalars/arrays to Python types; non-finite floats become strings
    so the output is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return "%.17g" % float(v)


class _Table:
    """Row sink that writes CSV (or collects JSON) and can be flushed
    partially when a later row fails."""

    def __init__(self, stream, columns: list[str], fmt: str, meta: dict):
        self.stream, self.columns, self.fmt, self.meta = stream, columns, fmt, meta
        self.rows: list[list] = []
        self.trailer: list[str] = []
        self._started = False

    def _header(self):
        # written lazily so that a domain error on the first row leaves no output
        if self.fmt == "csv" and not self._started:
            for k, v in self.meta.items():
                self.stream.write(f"# {k}: {v}\n")
            self.stream.write(",".join(self.columns) + "\n")
        self._started = True

    def add(self, row: list):
        self._header()
        self.rows.append(row)
        if self.fmt == "csv":
            self.stream.write(",".join(_fmt(v) for v in row) + "\n")

    def comment(self, text: str):
        self._header()
        self.trailer.append(text)
        if self.fmt == "csv":
            self.stream.write(f"# {text}\n")

    def close(self):
        self._header()
        if self.fmt == "json":
            doc = jsonable({"meta": self.meta, "columns": self.columns, "rows": self.rows})
            if self.trailer:
                doc["comments"] = self.trailer
            json.dump(doc, self.stream, indent=2, sort_keys=True, allow_nan=False)
            self.stream.write("\n")
        self.stream.flush()


def eval_config(target: float, **kw) -> EvalConfig:
    cap = os.environ.get("FRACX_PRECISION_BITS")
    bits = EvalConfig().max_precision_bits
    if cap:
        try:
            bits = min(bits, int(cap))
        except ValueError:
            raise DomainError(f"FRACX_PRECISION_BITS={cap!r} is not an integer")
    return EvalConfig(target_rel_error=target, max_precision_bits=bits, **kw)


def _x_values(args) -> list[float]:
    if args.x is not None:
        return [float(v) for v in args.x]
    if args.xmin is None or args.xmax is None:
        raise DomainError("give --x or --xmin/--xmax")
    if args.log:
        if not (args.xmin > 0 and args.xmax > 0):
            raise DomainError("--log needs a positive range")
        return [float(v) for v in np.geomspace(args.xmin, args.xmax, args.count)]
    return [float(v) for v in np.linspace(args.xmin, args.xmax, args.count)]


def _run_rows(table: _Table, items: Iterable, compute: Callable[[float], list]) -> int:
    try:
        for x in items:
            table.add(compute(x))
    except _NONCONV_ERRORS as exc:
        table.comment(f"error: {type(exc).__name__}: {exc}")
        table.close()
        return EXIT_NONCONV
    table.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# commands

def cmd_eval(args, out) -> int:
    cfg = eval_config(args.target)
    fn = args.fn
    if fn == "mittag_leffler":
        beta = 1.0 if args.beta is None else args.beta
        f = lambda x: specfun.mittag_leffler(args.alpha, beta, x, cfg)
        params = {"alpha": args.alpha, "beta": beta}
    elif fn == "kilbas_saigo":
        if args.m is None or args.l is None:
            raise DomainError("kilbas_saigo needs --m and --l")
        p = KSParams(args.alpha, args.m, args.l)
        f = lambda x: specfun.kilbas_saigo(p, x, cfg)
        params = {"alpha": args.alpha, "m": args.m, "l": args.l}
    else:
        f = lambda x: specfun.le_roy(args.alpha, x, cfg)
        params = {"alpha": args.alpha}
    xs = _x_values(args)
    meta = {"command": "eval", "function": fn, "params": json.dumps(params, sort_keys=True),
            "target_rel_error": args.target}
    table = _Table(out, ["x", "value", "abs_error_bound", "terms"], args.format, meta)

    def row(x):
        r = f(x)
        return [x, r.value, r.abs_error_bound, r.terms_used]

    return _run_rows(table, xs, row)


def _make_dist(args) -> dist.DistDescriptor:
    return dist.make_dist(args.kind, args.alpha, args.lam, args.rho)


def cmd_dist_table(args, out) -> int:
    d = _make_dist(args)
    cfg = dataclasses.replace(dist.DIST_CFG, max_precision_bits=eval_config(1e-10).max_precision_bits)
    cols = [c.strip() for c in args.columns.split(",") if c.strip()]
    for c in cols:
        if c not in ("sf", "cdf", "pdf", "quantile"):
            raise DomainError(f"unknown column {c!r}")
    xs = _x_values(args)
    meta = {"command": "dist-table", "dist": f"{d.kind}(alpha={d.alpha}, lambda={d.lam}, rho={d.rho})",
            "quantile_column": "quantile(cdf(x)), a round trip of x"}
    header = ["x"]
    for c in cols:
        header += [c] if c == "quantile" else [c, f"{c}_abs_error_bound"]
    table = _Table(out, header, args.format, meta)

    def row(x):
        r = [x]
        for c in cols:
            if c == "quantile":
                p = dist.cdf(d, x, cfg).value
                r.append(dist.quantile(d, p, cfg) if 0.0 < p < 1.0 else math.nan)
            else:
                res = getattr(dist, c)(d, x, cfg)
                r += [res.value, res.abs_error_bound]
        return r

    return _run_rows(table, xs, row)


def _oracles(args) -> dict:
    kind = args.kind
    if kind in mc.FUNCTIONALS:
        rho = 1.0 if args.rho is None else args.rho
        return {"mean": mc.functional_moment(kind, args.alpha, rho, 1),
                "second_moment": mc.functional_moment(kind, args.alpha, rho, 2)}
    if kind == "T":
        return {"mean": 1.0, "second_moment": mc.moment_oracle("T_mellin", (args.a, args.b, args.c), 2.0)}
    if kind == "stable":
        return {"laplace_at_1": math.exp(-1.0)}
    return {}


def cmd_sample(args, out) -> int:
    rng = mc.RngState(args.seed)
    cfgs = mc.SamplerConfig(mc.ProductConfig(n_factors=args.n_factors),
                            mc.PathConfig(step=args.step))
    kind = args.kind
    n = args.n
    rho = 1.0 if args.rho is None else args.rho
    method = args.method
    if kind in mc.FUNCTIONALS:
        batch = mc.sample_functional(kind, args.alpha, rho, method, cfgs, rng, n, return_batch=True)
        values = batch.values
    elif kind == "stable":
        values = mc.sample_stable(args.alpha, rng, n)
    elif kind == "T":
        values = mc.sample_beta_product(args.a, args.b, args.c, cfgs.product, rng, n)
    else:
        values = mc.sample_dist(_make_dist(args), n, rng, method, cfgs).values
    values = np.asarray(values, dtype=float)
    se = lambda v: float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else math.nan
    summary = {"n": n, "mean": float(values.mean()), "mean_se": se(values),
               "second_moment": float((values ** 2).mean()), "second_moment_se": se(values ** 2)}
    if kind == "stable":
        summary["laplace_at_1"] = float(np.exp(-values).mean())
        summary["laplace_at_1_se"] = se(np.exp(-values))
    for k, v in _oracles(args).items():
        summary[f"oracle_{k}"] = v
    if "oracle_mean" in summary:
        summary["mean_z"] = abs(summary["mean"] - summary["oracle_mean"]) / summary["mean_se"]
    if kind in mc.FUNCTIONALS and method in ("path", "beta_product") and not args.no_compare:
        other = "beta_product" if method == "path" else "path"
        m = min(n, args.compare_n)
        ref = mc.sample_functional(kind, args.alpha, rho, other, cfgs, rng.spawn(1), m)
        ks = stats.ks_2samp(values, ref)
        summary[f"ks_vs_{other}_pvalue"] = float(ks.pvalue)
        summary[f"ks_vs_{other}_pass_1pct"] = bool(ks.pvalue > 0.01)
    meta = {"command": "sample", "kind": kind, "alpha": args.alpha, "rho": args.rho, "lambda": args.lam,
            "method": method, "seed": args.seed, "n_factors": args.n_factors, "path_step": args.step}
    if args.format == "json":
        json.dump(jsonable({"meta": meta, "summary": summary,
                            "values": None if args.summary_only else values}),
                  out, indent=2, sort_keys=True, allow_nan=False)
        out.write("\n")
        return EXIT_OK
    for k, v in meta.items():
        out.write(f"# {k}: {v}\n")
    for k, v in summary.items():
        out.write(f"# summary {k}: {_fmt(v) if not isinstance(v, bool) else v}\n")
    if not args.summary_only:
        out.write("value\n")
        out.write("\n".join("%.17g" % v for v in values))
        out.write("\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    report = verify.run_suite(args.suite, quick=args.quick)
    if not args.timings:
        report.pop("elapsed_seconds", None)
        report.pop("suite_seconds", None)
    json.dump(jsonable(report), out, indent=2, sort_keys=True, allow_nan=False)
    out.write("\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


_KS_FAMILIES = ("weibull_ks", "frechet_ks", "leroy")


def cmd_asym(args, out) -> int:
    family = args.family
    xs = [float(v) for v in args.x]
    # precision-escalated series only: the ratio is meant to test the series itself
    cfg = eval_config(args.target, allow_fallback=False, fast_series_seconds=1e9)
    meta = {"command": "asym", "family": family, "alpha": args.alpha}
    if family in _KS_FAMILIES:
        m = 1.0 if args.m is None else args.m
        spec = specfun.leading_asymptote(family, args.alpha, m)
        meta.update({"m": m, "asymptote": f"{spec.constant!r} x^-{spec.power} (log x)^-{spec.log_power}"})

        def value(x):
            if family == "weibull_ks":
                r = specfun.kilbas_saigo(KSParams(args.alpha, m, m - 1.0), -x, cfg)
            elif family == "frechet_ks":
                r = specfun.kilbas_saigo(KSParams(args.alpha, m, m - 1.0 / args.alpha), -x, cfg)
            else:
                r = specfun.le_roy(args.alpha, -x, cfg)
            return r.value, r.method

        asym = spec.evaluate
    else:
        d = dist.make_dist(family, args.alpha, args.lam, args.rho)
        da = dist.support_asymptote(d, args.end)
        meta.update({"lambda": d.lam, "rho": d.rho, "end": args.end,
                     "asymptote": f"tail mass of {da.constant!r} |x|^{da.power} exp(-{da.exp_rate}|x|)",
                     "route": args.route, "seed": args.seed, "n": args.n})
        upper = args.end == "upper"
        series_side = (d.kind == "ffrechet") != upper     # side given by the series directly

        def value(x):
            if args.route == "mc":
                if not series_side:
                    raise DomainError("the Monte Carlo route estimates the series-side tail only")
                est, _se = mc.conditional_tail(d, x, args.n, mc.RngState(args.seed, int(abs(x) * 1e6) % 2**31))
                return est, "mc"
            r = dist.sf(d, x) if upper else dist.cdf(d, x)
            return r.value, r.method

        asym = da.tail_mass
    table = _Table(out, ["x", "value", "asymptote", "ratio", "method"], args.format, meta)

    def row(x):
        v, method = value(x)
        a = asym(x)
        return [x, v, a, v / a, method]

    return _run_rows(table, xs, row)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracx", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, xs=True):
        sp.add_argument("--output", "-o", help="output file (default: standard output)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if xs:
            sp.add_argument("--x", type=float, nargs="+", help="explicit abscissae")
            sp.add_argument("--xmin", type=float)
            sp.add_argument("--xmax", type=float)
            sp.add_argument("--count", type=int, default=11)
            sp.add_argument("--log", action="store_true", help="log-spaced grid")

    sp = sub.add_parser("eval", help="evaluate a special function on a grid")
    sp.add_argument("--fn", required=True, choices=("mittag_leffler", "kilbas_saigo", "le_roy"))
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--m", type=float)
    sp.add_argument("--l", type=float)
    sp.add_argument("--target", type=float, default=EvalConfig().target_rel_error)
    common(sp)

    sp = sub.add_parser("dist-table", help="tabulate sf/cdf/pdf/quantile of a fractional extreme law")
    sp.add_argument("--kind", required=True, choices=dist.KINDS)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--columns", default="sf,cdf,pdf")
    common(sp)

    sp = sub.add_parser("sample", help="Monte Carlo draws with a moment summary")
    sp.add_argument("--kind", required=True,
                    choices=mc.FUNCTIONALS + dist.KINDS + ("stable", "T"))
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--n", type=int, default=10_000)
    sp.add_argument("--method", choices=mc.METHODS, default="beta_product")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n-factors", type=int, default=mc.ProductConfig().n_factors)
    sp.add_argument("--step", type=float, default=mc.PathConfig().step)
    sp.add_argument("--compare-n", type=int, default=20_000,
                    help="draws of the other method for the two-sample KS note")
    sp.add_argument("--no-compare", action="store_true")
    sp.add_argument("--summary-only", action="store_true")
    common(sp, xs=False)

    sp = sub.add_parser("verify", help="run verification suites, JSON report")
    sp.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    sp.add_argument("--quick", action="store_true", help="reduced grids and sample sizes")
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
    sp.add_argument("--output", "-o")

    sp = sub.add_parser("asym", help="compare values with leading asymptotes")
    sp.add_argument("--family", required=True, choices=_KS_FAMILIES + dist.KINDS)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--m", type=float)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--end", choices=("lower", "upper"), default="upper")
    sp.add_argument("--route", choices=("series", "mc"), default="series")
    sp.add_argument("--n", type=int, default=200_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--target", type=float, default=1e-12)
    sp.add_argument("--x", type=float, nargs="+", required=True)
    sp.add_argument("--output", "-o")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


_COMMANDS = {"eval": cmd_eval, "dist-table": cmd_dist_table, "sample": cmd_sample,
             "verify": cmd_verify, "asym": cmd_asym}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cc = CommandConfig(args.command, vars(args), getattr(args, "seed", None), args.output,
                       getattr(args, "format", "json"))
    out = open(cc.output, "w", newline="") if cc.output else sys.stdout
    try:
        return _COMMANDS[cc.command](args, out)
    except _DOMAIN_ERRORS as exc:
        print(f"fracx: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except _NONCONV_ERRORS as exc:
        print(f"fracx: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    finally:
        if cc.output:
            out.close()


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
