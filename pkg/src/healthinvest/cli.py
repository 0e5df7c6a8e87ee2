"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or validation
error, 3 the solver found no solution (no FOC root, no threshold).

Precedence for every value: built-in defaults < config file (``--config``
or ``$HEALTHINVEST_CONFIG``) < command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import oracle, sim, stage1, stage2, stage3
from .config import load_config, with_overrides
from .errors import ConfigError, DomainError, NoRootError, NoThresholdError, RangeError
from .params import Stage1Params, Stage2Params, Stage3Params, params_from_mapping
from .shocks import generate_path
from .svg import line_chart

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NOSOLUTION = 0, 1, 2, 3

_PARAM_CLASSES = {"stage1": Stage1Params, "stage2": Stage2Params, "stage3": Stage3Params}


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_param_flags(parser, stage):
    for f in dataclasses.fields(_PARAM_CLASSES[stage]):
        flag = "--" + f.name.replace("_", "-")
        parser.add_argument(flag, dest=f"param_{f.name}", type=float, default=None,
                            help=f"override {stage}.{f.name}")


def _stage_params(args, cfg, stage):
    overrides = {
        f.name: getattr(args, f"param_{f.name}")
        for f in dataclasses.fields(_PARAM_CLASSES[stage])
        if getattr(args, f"param_{f.name}", None) is not None
    }
    base = cfg.params_for(int(stage[-1]))
    return params_from_mapping(stage, overrides, base=base)


def _print_table(pairs):
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        print(f"{k:<{width}}  {_fmt(v) if not isinstance(v, float) else f'{v:.10g}'}")


# ---------------------------------------------------------------- solve


def cmd_solve(args):
    cfg = load_config(args.config)
    p = _stage_params(args, cfg, args.stage)
    if args.stage == "stage1":
        lam = args.lam if args.lam is not None else cfg.lambda0
        L = args.L if args.L is not None else cfg.L0
        pol = stage1.solve_stage1(p, lam, args.a, L)
        pairs = [("x*", pol.x_star), ("y*", pol.y_star), ("n*", pol.n_star),
                 ("c*", pol.c_star), ("regime", pol.regime.value)]
        try:
            pairs.append(("g", stage1.population_threshold_g(p, lam, args.a)))
        except NoThresholdError:
            pairs.append(("g", "none"))
    elif args.stage == "stage2":
        L = args.L if args.L is not None else cfg.L0
        pol = stage2.optimal_policy2(p, L)
        pairs = [("x*", pol.x_star), ("y*", pol.y), ("n*", pol.n_star), ("c*", pol.c_star)]
        if args.delta is not None:
            st = stage2.steady_state(p, args.delta)
            pairs += [("L_tilde", st.L_tilde), ("L_tilde_prime", st.L_tilde_prime), ("factor", st.factor)]
    else:
        sol = stage3.solve_health_investment3(p)
        pairs = [("x*", sol.x_star), ("y*", stage3.production3(p, sol.x_star)), ("n*", sol.n_star),
                 ("utility", sol.utility_value), ("roots", len(sol.root_candidates)),
                 ("n>=1", sol.n_at_least_one), ("corner_utility", sol.corner_utility),
                 ("corner_dominates", sol.corner_dominates)]
    _print_table(pairs)
    if args.csv:
        sys.stdout.write(_csv_text([k for k, _ in pairs], [[v for _, v in pairs]]))
    return EXIT_OK


# ------------------------------------------------------------- simulate


def cmd_simulate(args):
    cfg = load_config(args.config)
    stage = int(args.stage[-1]) if args.stage else cfg.stage
    shocks = cfg.shocks if args.seed is None else dataclasses.replace(cfg.shocks, seed=args.seed)
    cfg = with_overrides(cfg, stage=stage, T=args.T, L0=args.L0, lambda0=args.lambda0, shocks=shocks)
    path = generate_path(cfg.shocks, cfg.T)
    if stage == 1:
        series = sim.run_stage1(cfg.stage1, path, cfg.L0, cfg.lambda0)
    elif stage == 2:
        series = sim.run_stage2(cfg.stage2, path, cfg.L0)
    else:
        raise CliError("stage 3 has no population dynamics to simulate")
    out = args.out or cfg.out
    text = sim.series_to_csv(series)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {len(series.records)} records to {out}")
    else:
        sys.stdout.write(text)
    summary = sim.summarize(series)
    print(f"termination: {series.termination}", file=sys.stderr)
    print(" ".join(f"{k}={_fmt(v)}" for k, v in summary.items()), file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- sweep

_SWEEP_STATE = {"stage1": ("a", "lambda", "L"), "stage2": ("delta", "a", "L"), "stage3": ()}


def _sweep_rows(args, cfg, p):
    values = np.linspace(args.lo, args.hi, args.steps)
    fields = {f.name for f in dataclasses.fields(p)}
    name = args.param
    if name not in fields and name not in _SWEEP_STATE[args.stage]:
        raise CliError(f"cannot sweep {name!r} for {args.stage}; choose from "
                       f"{sorted(fields | set(_SWEEP_STATE[args.stage]))}")
    rows = []
    if args.stage == "stage1":
        header = ["value", "x", "y", "n", "regime", "g"]
        for v in values:
            v = float(v)
            q = params_from_mapping("stage1", {name: v}, base=p) if name in fields else p
            lam = v if name == "lambda" else (args.lam if args.lam is not None else cfg.lambda0)
            a = v if name == "a" else args.a
            L = v if name == "L" else (args.L if args.L is not None else cfg.L0)
            pol = stage1.solve_stage1(q, lam, a, L)
            try:
                g = stage1.population_threshold_g(q, lam, a)
            except NoThresholdError:
                g = None
            rows.append([v, pol.x_star, pol.y_star, pol.n_star, pol.regime.value, g])
    elif args.stage == "stage2":
        header = ["value", "x", "y", "n", "c", "delta", "L_tilde", "L_tilde_prime"]
        for v in values:
            v = float(v)
            q = params_from_mapping("stage2", {name: v}, base=p) if name in fields else p
            L = v if name == "L" else (args.L if args.L is not None else cfg.L0)
            if name == "delta":
                delta = v
            elif name == "a":
                delta = stage2.mortality(q, v)
            else:
                delta = args.delta if args.delta is not None else stage2.mortality(q, args.a)
            pol = stage2.optimal_policy2(q, L)
            st = stage2.steady_state(q, delta)
            rows.append([v, pol.x_star, pol.y, pol.n_star, pol.c_star, delta, st.L_tilde, st.L_tilde_prime])
    else:
        header = ["value", "x", "n", "utility", "roots", "corner_dominates", "dx_dgamma", "dx_dalpha"]
        for v in values:
            v = float(v)
            q = params_from_mapping("stage3", {name: v}, base=p)
            try:
                sol = stage3.solve_health_investment3(q)
            except NoRootError:
                rows.append([v, None, None, None, 0, None, None, None])
                continue
            derivs = []
            for which in ("gamma", "alpha"):
                try:
                    derivs.append(stage3.comparative_statics3(q, which))
                except (NoRootError, stage3.PerturbationError, RangeError):
                    derivs.append(None)
            rows.append([v, sol.x_star, sol.n_star, sol.utility_value, len(sol.root_candidates),
                         sol.corner_dominates, *derivs])
    return header, rows


def cmd_sweep(args):
    if args.steps < 2:
        raise CliError("--steps must be >= 2")
    cfg = load_config(args.config)
    p = _stage_params(args, cfg, args.stage)
    header, rows = _sweep_rows(args, cfg, p)
    _emit(_csv_text(header, rows), args.out)
    if args.stage == "stage3" and args.param in ("gamma", "alpha"):
        col = header.index(f"dx_d{args.param}")
        sm = stage3.SignMap(args.param, tuple(r[0] for r in rows), tuple(r[col] for r in rows),
                            tuple("" for _ in rows))
        if sm.finding:
            print(f"finding: {sm.finding}", file=sys.stderr)
        else:
            print(f"positive dx*/d{args.param} on {sm.positive_intervals}", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------- verify


def verification_suite(stages, tolerance=None, grid1=10**6, grid2=1001, grid3=10**6):
    """Oracle reports on the built-in fixtures for the selected stages."""
    reports = []
    if 1 in stages:
        p = Stage1Params()
        for lam, a in ((1.0, 0.0), (2.0, 0.5), (1.0, 0.5), (1.0, 0.99)):
            reports.append(oracle.grid_argmax_stage1(p, lam, a, 1.0, grid1, bound=tolerance))
            reports.append(_with_bound(oracle.bisect_threshold(p, lam, a), tolerance))
    if 2 in stages:
        p = Stage2Params()
        for L in (1.0, 100.0):
            reports.extend(oracle.grid_argmax_utility2(p, L, grid2, bound=tolerance))
        for delta in (0.3, 0.5):
            reports.append(_with_bound(oracle.bisect_steady_state(p, delta), tolerance))
    if 3 in stages:
        for A in (1.0, 7.389, 20.0, 50.0):
            reports.append(oracle.grid_argmax_utility3(Stage3Params(A=A), grid3, bound=tolerance))
    return reports


def _with_bound(report, bound):
    if bound is None:
        return report
    return dataclasses.replace(report, bound=bound, passed=bool(report.abs_error <= bound))


def cmd_verify(args):
    stages = {"1": {1}, "2": {2}, "3": {3}, "all": {1, 2, 3}}[args.stage]
    reports = verification_suite(stages, args.tolerance)
    _emit(oracle.reports_to_csv(reports), args.out)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} oracle checks passed", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_VERIFY


# ----------------------------------------------------------------- plot


def read_series_csv(path):
    """Columns of a simulation CSV as ``{name: [float|None, ...]}``."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise CliError(f"{path}: no header row")
    reader = csv.reader(lines)
    header = next(reader)
    cols = {h: [] for h in header}
    for row in reader:
        for h, cell in zip(header, row):
            try:
                cols[h].append(float(cell) if cell != "" else None)
            except ValueError:
                cols[h].append(None)
    return cols


def cmd_plot(args):
    try:
        cols = read_series_csv(args.input)
    except FileNotFoundError:
        raise CliError(f"input not found: {args.input}") from None
    wanted = [c.strip() for c in args.columns.split(",") if c.strip()]
    missing = [c for c in wanted + [args.x] if c not in cols]
    if missing:
        raise CliError(f"missing column(s): {', '.join(missing)}")
    x = cols[args.x]
    if not x or any(v is None for v in x):
        raise CliError("empty series")
    series = {c: cols[c] for c in wanted}
    if all(v is None or not math.isfinite(v) for vals in series.values() for v in vals):
        raise CliError("empty series")
    svg = line_chart(x, series, title=args.title or ", ".join(wanted), xlabel=args.x)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


# --------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(prog="healthinvest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML run configuration (default: $HEALTHINVEST_CONFIG)")

    solve = sub.add_parser("solve", help="optimal policy for one period")
    solve_sub = solve.add_subparsers(dest="stage", required=True)
    for stage in ("stage1", "stage2", "stage3"):
        sp = solve_sub.add_parser(stage)
        common(sp)
        _add_param_flags(sp, stage)
        if stage == "stage1":
            sp.add_argument("--a", type=float, default=0.0, help="adversity")
            sp.add_argument("--lambda", dest="lam", type=float, default=None, help="health productivity")
        if stage in ("stage1", "stage2"):
            sp.add_argument("--L", type=float, default=None, help="population")
        if stage == "stage2":
            sp.add_argument("--delta", type=float, default=None, help="child mortality for the steady state")
        sp.add_argument("--csv", action="store_true", help="also print a CSV row")
        sp.set_defaults(func=cmd_solve)

    simulate = sub.add_parser("simulate", help="run a trajectory and write CSV")
    simulate.add_argument("stage", nargs="?", choices=("stage1", "stage2"))
    common(simulate)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--T", type=int)
    simulate.add_argument("--L0", type=float)
    simulate.add_argument("--lambda0", type=float)
    simulate.add_argument("--out")
    simulate.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", help="policies over a parameter grid")
    sweep_sub = sweep.add_subparsers(dest="stage", required=True)
    for stage in ("stage1", "stage2", "stage3"):
        sp = sweep_sub.add_parser(stage)
        common(sp)
        _add_param_flags(sp, stage)
        sp.add_argument("--param", required=True)
        sp.add_argument("--from", dest="lo", type=float, required=True)
        sp.add_argument("--to", dest="hi", type=float, required=True)
        sp.add_argument("--steps", type=int, default=11)
        sp.add_argument("--out")
        if stage in ("stage1", "stage2"):
            sp.add_argument("--a", type=float, default=0.0)
        if stage == "stage1":
            sp.add_argument("--lambda", dest="lam", type=float, default=None)
        if stage in ("stage1", "stage2"):
            sp.add_argument("--L", type=float, default=None)
        if stage == "stage2":
            sp.add_argument("--delta", type=float, default=None)
        sp.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run the brute-force oracle suite")
    verify.add_argument("--stage", choices=("1", "2", "3", "all"), default="all")
    verify.add_argument("--tolerance", type=float, default=None,
                        help="absolute error bound replacing the default per-check bounds")
    verify.add_argument("--out")
    verify.set_defaults(func=cmd_verify)

    plot = sub.add_parser("plot", help="render CSV columns as an SVG line chart")
    plot.add_argument("--input", required=True)
    plot.add_argument("--columns", required=True, help="comma-separated column names")
    plot.add_argument("--x", default="t", help="abscissa column (default t)")
    plot.add_argument("--title")
    plot.add_argument("--out", required=True)
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RangeError, ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoRootError, NoThresholdError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOSOLUTION


if __name__ == "__main__":
    sys.exit(main())
