"""Command-line front end: ``hh-bounds <subcommand> ...``.

Exit status is 0 when every emitted row satisfies its invariant, 1 when some
row violates one (negative slack, identity residual above the gate, or a
consistency failure), and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .bounds import SLACK_TOL, THEOREMS, bound_t2, bound_t3, sarikaya_bounds, sarikaya_g2_branches, verify_bound
from .coeffs import Params, coefficient_set, defining_integrals, selected_closed_forms
from .errors import HHBoundsError, HypothesisError, ParameterError
from .funcspace import Interval, catalog_lookup
from .identity import identity_residual, lhs_functional, reference_lhs
from .means import FAMILIES, VARIANTS, mean_inequality
from .quadrules import RuleSpec, composite_certified

CSV_HEADER = "# hh-bounds v1"
IDENTITY_GATE = 1e-8
COEFF_GATE = 1e-10
REDUCE_GATE = 1e-10
QUAD_SLACK = 1e-12
DEFAULT_TOL = 1e-12

IDENTITY_COLUMNS = ["alpha", "lambda", "a", "b", "function", "lhs", "rhs", "residual", "oracle_error"]
BOUND_COLUMNS = ["theorem", "alpha", "lambda", "q", "a", "b", "function", "lhs_abs", "bound", "slack", "regime", "hypothesis_ok"]
MEANS_COLUMNS = ["family", "variant", "a", "b", "q", "n", "lhs", "rhs", "slack"]
REDUCE_COLUMNS = [
    "lambda", "q", "f2_abs_a", "f2_abs_b", "t2", "g2", "t2_diff", "t3", "g3", "t3_diff",
    "lhs_new", "lhs_ref", "lhs_relation", "match",
]


def oracle_tol() -> float:
    raw = os.environ.get("HH_BOUNDS_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ParameterError(f"HH_BOUNDS_TOL must be a number, got {raw!r}") from None
    if not tol > 0:
        raise ParameterError("HH_BOUNDS_TOL must be positive")
    return tol


# --- formatting ----------------------------------------------------------------

def fmt(value) -> str:
    """Locale-free text for one CSV cell; floats get 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(out, columns: Sequence[str], rows: Iterable[dict], trailer: Sequence[str] = ()) -> None:
    out.write(CSV_HEADER + "\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(fmt(row.get(c)) for c in columns) + "\n")
    for line in trailer:
        out.write(f"# {line}\n")


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def write_json(out, payload) -> None:
    json.dump(_jsonable(payload), out, indent=2, sort_keys=False)
    out.write("\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _name_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _grid(n: int) -> list[float]:
    if n < 2:
        raise ParameterError("grid needs at least 2 points")
    return [float(x) for x in np.linspace(0.0, 1.0, n)]


# --- subcommands -----------------------------------------------------------------

def _points(args) -> tuple[list[float], list[float]]:
    if args.grid is not None:
        g = _grid(args.grid)
        return g, g
    return args.alpha, args.lam


def cmd_identity(args, out) -> int:
    f = catalog_lookup(args.function)
    iv = Interval(args.a, args.b)
    alphas, lams = _points(args)
    rows = []
    bad = 0
    for alpha in alphas:
        for lam in lams:
            rep = identity_residual(f, iv, alpha, lam, args.tol)
            row = rep.to_dict()
            if rep.residual >= IDENTITY_GATE:
                bad += 1
                row["violation"] = True
            rows.append(row)
    if args.format == "json":
        write_json(out, rows[0] if len(rows) == 1 else rows)
    else:
        write_csv(out, IDENTITY_COLUMNS + (["violation"] if bad else []), rows,
                  [f"summary rows={len(rows)} residual_gate={IDENTITY_GATE:g} violations={bad}"])
    return 1 if bad else 0


def cmd_coeffs(args, out) -> int:
    cs = coefficient_set(args.alpha[0], args.lam[0], args.q)
    payload = cs.to_dict()
    status = 0
    if args.check:
        oracle = defining_integrals(cs.alpha, cs.lam, cs.q, args.tol)
        closed = selected_closed_forms(cs)
        diffs = {k: abs(closed[k] - oracle[k]) for k in oracle}
        worst = max(diffs.values())
        payload["oracle_max_abs_diff"] = worst
        payload["oracle_ok"] = worst <= COEFF_GATE
        status = 0 if worst <= COEFF_GATE else 1
    write_json(out, payload)
    return status


def _bound_task(task):
    name, a, b, alpha, lam, q, theorem, tol, inject = task
    f = catalog_lookup(name)
    params = Params(alpha, lam, q)
    cs = None
    if inject:
        # deliberately corrupt one coefficient family to exercise the failure path
        cs = coefficient_set(alpha, lam, q)
        cs = dataclasses.replace(cs, gamma=tuple(0.5 * g for g in cs.gamma))
    return verify_bound(f, Interval(a, b), params, theorem, tol, coefficients=cs).to_dict()


def _theorems_for(q: float, theorems: Sequence[str]) -> list[str]:
    return [t for t in theorems if not (t == "T4" and q <= 1)]


def cmd_bounds(args, out) -> int:
    catalog_lookup(args.function)  # fail fast on unknown names
    tasks = [
        (args.function, args.a, args.b, args.alpha[0], args.lam[0], args.q, th, args.tol, args.inject_fault)
        for th in _theorems_for(args.q, args.theorem)
    ]
    if not tasks:
        raise ParameterError("no applicable theorem (T4 needs q > 1)")
    rows = [_bound_task(t) for t in tasks]
    bad = sum(1 for r in rows if r["hypothesis_ok"] and r["slack"] < -SLACK_TOL)
    if args.format == "csv":
        write_csv(out, BOUND_COLUMNS, rows)
    else:
        write_json(out, rows[0] if len(rows) == 1 else rows)
    return 1 if bad else 0


def cmd_sweep(args, out) -> int:
    grid = _grid(args.grid)
    functions = sorted(args.functions)
    for name in functions:
        catalog_lookup(name)
    tasks = []
    for name in functions:
        for alpha in grid:
            for lam in grid:
                for q in sorted(args.q):
                    for th in _theorems_for(q, sorted(args.theorems)):
                        tasks.append((name, args.a, args.b, alpha, lam, q, th, args.tol, args.inject_fault))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bound_task, tasks, chunksize=16))
    else:
        rows = [_bound_task(t) for t in tasks]

    checked = [r for r in rows if r["hypothesis_ok"]]
    bad = [r for r in checked if r["slack"] < -SLACK_TOL]
    summary = {"rows": len(rows), "hypothesis_failures": len(rows) - len(checked), "violations": len(bad)}
    if checked:
        worst = min(checked, key=lambda r: r["slack"])
        summary.update(min_slack=worst["slack"], argmin={k: worst[k] for k in ("function", "alpha", "lambda", "q", "theorem")})
    else:
        summary.update(min_slack=None, argmin=None)

    if args.format == "json":
        write_json(out, {"rows": rows, "summary": summary})
    else:
        line = (f"summary rows={summary['rows']} hypothesis_failures={summary['hypothesis_failures']} "
                f"violations={summary['violations']}")
        if summary["argmin"]:
            am = summary["argmin"]
            line += (f" min_slack={fmt(summary['min_slack'])} at function={am['function']} "
                     f"alpha={fmt(am['alpha'])} lambda={fmt(am['lambda'])} q={fmt(am['q'])} theorem={am['theorem']}")
        write_csv(out, BOUND_COLUMNS, rows, [line])
    return 1 if bad else 0


def cmd_quadrature(args, out) -> int:
    f = catalog_lookup(args.function)
    rule = RuleSpec.parse(args.rule)
    try:
        res = composite_certified(f, Interval(args.a, args.b), args.cells, rule, args.q, args.theorem,
                                  oracle=args.oracle, tol=args.tol)
    except HypothesisError as exc:
        print(f"hh-bounds: {exc}", file=sys.stderr)
        return 1
    payload = {"value": res.value, "error_bound": res.error_bound, "cells": res.cells,
               "theorem": res.theorem_used, "q": res.q, "rule": rule.name,
               "alpha": rule.alpha, "lambda": rule.lam}
    status = 0
    if args.oracle:
        payload["true_error"] = res.true_error
        payload["certified"] = res.true_error <= res.error_bound + QUAD_SLACK
        status = 0 if payload["certified"] else 1
    write_json(out, payload)
    return status


def cmd_means(args, out) -> int:
    families = FAMILIES if args.family == "all" else (args.family,)
    variants = VARIANTS if args.variant == "all" else (args.variant,)
    rows = []
    for fam in families:
        for var in variants:
            rep = mean_inequality(fam, var, args.a, args.b, args.q, args.n if fam == "pow_n" else None)
            rows.append(rep.to_dict())
    bad = sum(1 for r in rows if r["slack"] < -SLACK_TOL)
    if args.format == "json":
        write_json(out, rows)
    else:
        write_csv(out, MEANS_COLUMNS, rows, [f"summary rows={len(rows)} violations={bad}"])
    return 1 if bad else 0


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def cmd_reduce_check(args, out) -> int:
    f = catalog_lookup(args.function)
    iv = Interval(args.a, args.b)
    fa, fb = f.abs_f2_endpoints(iv)
    rows = []
    for lam in args.lam:
        new_lhs = lhs_functional(f, iv, 0.5, lam, args.tol)
        ref_lhs = reference_lhs(f, iv, lam, args.tol)
        if _close(new_lhs, ref_lhs, REDUCE_GATE):
            relation = "equal"
        elif _close(new_lhs, -ref_lhs, REDUCE_GATE):
            relation = "negated"
        else:
            relation = "unrelated"
        for q in args.q:
            t2 = bound_t2(fa, fb, iv, 0.5, lam)
            t3 = bound_t3(fa, fb, iv, 0.5, lam, q)
            g2, g3 = sarikaya_bounds(fa, fb, iv, lam, q)
            match = _close(t2, g2, REDUCE_GATE) and _close(t3, g3, REDUCE_GATE) and relation != "unrelated"
            rows.append({"lambda": lam, "q": q, "f2_abs_a": fa, "f2_abs_b": fb, "t2": t2, "g2": g2,
                         "t2_diff": t2 - g2, "t3": t3, "g3": g3, "t3_diff": t3 - g3,
                         "lhs_new": new_lhs, "lhs_ref": ref_lhs, "lhs_relation": relation, "match": match})
    low, high = sarikaya_g2_branches(fa, fb, iv, 0.5)
    trailer = [
        f"g2 branch continuity at lambda=0.5: low={fmt(low)} high={fmt(high)} diff={fmt(low - high)}",
        f"mismatches={sum(1 for r in rows if not r['match'])}",
    ]
    if args.format == "json":
        write_json(out, {"rows": rows, "notes": trailer})
    else:
        write_csv(out, REDUCE_COLUMNS, rows, trailer)
    return 0 if all(r["match"] for r in rows) else 1


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hh-bounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default):
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        p.add_argument("--tol", type=float, default=None, help="oracle tolerance (env HH_BOUNDS_TOL, default 1e-12)")

    def interval(p, a=1.0, b=2.0):
        p.add_argument("--a", type=float, default=a)
        p.add_argument("--b", type=float, default=b)

    def point(p, required=True):
        p.add_argument("--alpha", type=_float_list, required=required)
        p.add_argument("--lambda", dest="lam", type=_float_list, required=required)

    p = sub.add_parser("identity", help="left/right side of the integral identity")
    common(p, "csv")
    p.add_argument("--function", required=True)
    interval(p)
    point(p, required=False)
    p.add_argument("--grid", type=int, default=None, help="use an N x N (alpha, lambda) grid on [0,1]^2")
    p.set_defaults(handler=cmd_identity)

    p = sub.add_parser("coeffs", help="all closed-form coefficients at one (alpha, lambda, q)")
    common(p, "json")
    point(p)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--check", action="store_true", help="compare against quadrature of the defining integrals")
    p.set_defaults(handler=cmd_coeffs)

    p = sub.add_parser("bounds", help="bound reports for one function and parameter point")
    common(p, "json")
    p.add_argument("--function", required=True)
    interval(p)
    point(p)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--theorem", type=_name_list, default=list(THEOREMS))
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("sweep", help="bound reports over an (alpha, lambda, q) grid")
    common(p, "csv")
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--functions", type=_name_list, default=["square", "recip", "log"])
    p.add_argument("--q", type=_float_list, default=[1.0, 2.0])
    p.add_argument("--theorems", type=_name_list, default=list(THEOREMS))
    interval(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("quadrature", help="composite rule with a certified error bound")
    common(p, "json")
    p.add_argument("--function", required=True)
    interval(p)
    p.add_argument("--rule", default="simpson", help="midpoint|trapezoid|simpson|custom:alpha,lambda")
    p.add_argument("--cells", type=int, default=1)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--theorem", choices=THEOREMS, default="T4")
    p.add_argument("--oracle", action="store_true", help="also report the true error")
    p.set_defaults(handler=cmd_quadrature)

    p = sub.add_parser("means", help="special-mean inequalities")
    common(p, "csv")
    p.add_argument("--family", choices=(*FAMILIES, "all"), default="all")
    p.add_argument("--variant", choices=(*VARIANTS, "all"), default="all")
    interval(p)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(handler=cmd_means)

    p = sub.add_parser("reduce-check", help="alpha = 1/2 comparison with the lambda-only bounds")
    common(p, "csv")
    p.add_argument("--function", default="recip")
    interval(p)
    p.add_argument("--lambda", dest="lam", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p.add_argument("--q", type=_float_list, default=[1.0, 2.0])
    p.set_defaults(handler=cmd_reduce_check)
    return parser


def run_command(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = stdout if stdout is not None else sys.stdout
    try:
        if args.tol is None:
            args.tol = oracle_tol()
        if args.command == "identity" and args.grid is None and not (args.alpha and args.lam):
            parser.error("identity needs --alpha and --lambda, or --grid")
        buffer = io.StringIO()
        status = args.handler(args, buffer)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (HHBoundsError, ValueError) as exc:
        print(f"hh-bounds: error: {exc}", file=sys.stderr)
        return 2
    text = buffer.getvalue()
    if args.output in (None, "-"):
        out.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return status


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
