"""Command-line front end: ``solitonlab {zoo,verify,bounds,growth,length}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import bounds as B
from . import lorentz_graphs as L
from .soliton_zoo import (
    build_example_curve,
    directrix_length,
    example_curve_checks,
    grim_reaper,
    growth_ratio_r,
    growth_ratio_rM,
    solve_profile_ode,
)
from .suite import VerifyConfig, run_verify

NUM_FMT = "%.12e"


def _positive(kind):
    def parse(s):
        v = kind(s)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"{s} must be positive")
        return v

    return parse


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return NUM_FMT % float(v)
    return str(v)


def _csv_text(columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_json_value(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _json_text(obj) -> str:
    return json.dumps(_json_value(obj), indent=2, sort_keys=True) + "\n"


def _table_json(columns, rows) -> dict:
    return {"columns": list(columns), "rows": [[_json_value(v) for v in row] for row in rows]}


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_out(args, columns, rows, extra: Optional[dict] = None) -> None:
    rows = [list(r) for r in rows]
    if args.format == "json":
        obj = _table_json(columns, rows)
        if extra:
            obj.update(extra)
        _emit(args, _json_text(obj))
    else:
        _emit(args, _csv_text(columns, rows))


# ------------------------------------------------------------------- zoo
def cmd_zoo(args) -> int:
    if args.member == "s7":
        p = solve_profile_ode(delta=args.delta)
        lim = 1.0 - args.delta
        ys = np.linspace(-lim, lim, args.points)
        t = p.table(ys)
        cols = ["y", "z", "f", "w", "H", "phi", "K"]
        _table_out(args, cols, zip(*(t[c] for c in cols)))
        return 0
    eps = -1 if args.member == "grim-lorentz" else 1
    rng = args.range if args.range is not None else (5.0 if eps == -1 else 1.5)
    if eps == 1 and rng >= math.pi / 2:
        print("error: the Riemannian grim reaper lives on |x1| < pi/2", file=sys.stderr)
        return 2
    g = grim_reaper(eps)
    rows = []
    for x in np.linspace(-rng, rng, args.points):
        pt = g.at((float(x), 0.0))
        rows.append((x, float(pt.uJ.value), pt.H0, float(pt.W.value), L.soliton_residual(g, (float(x), 0.0))))
    _table_out(args, ["x1", "u", "H", "W", "residual"], rows)
    return 0


# ---------------------------------------------------------------- verify
def cmd_verify(args) -> int:
    cfg = VerifyConfig(seed=args.seed, samples=args.samples, lemma_pairs=args.pairs, grid=args.grid,
                       delta=args.delta, tol=args.tol)
    checks = run_verify(cfg)
    failed = [c.check for c in checks if not c.passed]
    if args.format == "json":
        report = {
            "config": {"seed": cfg.seed, "samples": cfg.samples, "pairs": cfg.lemma_pairs, "grid": cfg.grid,
                       "delta": cfg.delta, "tol": cfg.tol},
            "checks": [c.as_dict() for c in checks],
            "failed": failed,
            "pass": not failed,
        }
        _emit(args, _json_text(report))
    else:
        cols = ["check", "paper_ref", "samples", "max_residual", "tolerance", "pass"]
        _emit(args, _csv_text(cols, [[getattr(c, k) if k != "pass" else c.passed for k in cols] for c in checks]))
    for name in failed:
        print(f"FAILED: {name}", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------- bounds
def cmd_bounds(args) -> int:
    try:
        G = B.parse_bound_spec(args.g)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = B.classify_conditions(G)
    ss = np.linspace(0.0, args.smax, args.points)
    cols = ["s", "G"]
    data = [ss, np.asarray(G(ss))]
    if args.gm:
        try:
            GM = B.build_GM(G)
        except B.PreconditionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        cols.append("GM")
        data.append(np.asarray(GM(ss)))
    extra = {"bound": G.describe(), "conditions": rep.as_dict()}
    if args.format == "csv":
        print(f"# {G.describe()}: {rep.as_dict()}", file=sys.stderr)
    _table_out(args, cols, zip(*data), extra)
    return 0


# ---------------------------------------------------------------- growth
def cmd_growth(args) -> int:
    p = solve_profile_ode(delta=args.delta)
    tr = growth_ratio_r(p, w_max=args.wmax, num=args.points)
    tm = growth_ratio_rM(p, y_max=1.0 - args.delta, num=args.points)
    if args.format == "json":
        _emit(args, _json_text({"r": _table_json(tr.columns, tr.rows), "r_M": _table_json(tm.columns, tm.rows)}))
    elif args.table == "r":
        _emit(args, _csv_text(tr.columns, tr.rows))
    else:
        _emit(args, _csv_text(tm.columns, tm.rows))
    return 0


# ---------------------------------------------------------------- length
def cmd_length(args) -> int:
    if args.curve == "directrix":
        S = args.S
        _table_out(args, ["S", "length"], [(S, directrix_length(S))])
        return 0
    curve = build_example_curve(args.periods)
    rep = example_curve_checks(curve)
    rows = [(w["n"], w["x_n"], w["udot"], w["G"], w["lower"], w["ok"]) for w in rep["witnesses"]]
    extra = {"length": rep["length"], "interval": rep["length_interval"], "max_abs_udot": rep["max_abs_udot"]}
    if args.format == "csv":
        print(f"# length over {rep['length_interval']}: {rep['length']!r}", file=sys.stderr)
    _table_out(args, ["n", "x_n", "udot", "G", "lower", "ok"], rows, extra)
    return 0 if all(r[-1] for r in rows) and rep["max_abs_udot"] < 1 else 1


# ---------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solitonlab", description="Spacelike translating solitons: constructions and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    z = sub.add_parser("zoo", help="tabulate a zoo member")
    z.add_argument("--member", choices=("s7", "grim-lorentz", "grim-riemann"), required=True)
    z.add_argument("--range", type=_positive(float), default=None, help="half-width in x1 for grim reapers")
    z.add_argument("--delta", type=_positive(float), default=1e-6, help="profile truncation margin")
    z.add_argument("--points", type=_positive(int), default=201)
    common(z)
    z.set_defaults(func=cmd_zoo)

    v = sub.add_parser("verify", help="run the identity and inequality suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=_positive(int), default=100)
    v.add_argument("--pairs", type=_positive(int), default=10_000, help="random (nu, X) pairs")
    v.add_argument("--grid", type=_positive(int), default=80, help="grid cells per axis for distances")
    v.add_argument("--delta", type=_positive(float), default=1e-6)
    v.add_argument("--tol", type=_positive(float), default=None, help="override every tolerance")
    common(v, "json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="classify a bound function and tabulate it")
    b.add_argument("--g", required=True, help="affine:A,B | power:p,s | rlogk:A,B,k | logaffine:A,B | csv:<path>")
    b.add_argument("--gm", action="store_true", help="also tabulate G^M")
    b.add_argument("--smax", type=_positive(float), default=100.0)
    b.add_argument("--points", type=_positive(int), default=101)
    common(b)
    b.set_defaults(func=cmd_bounds)

    g = sub.add_parser("growth", help="growth ratios of H on the strip soliton")
    g.add_argument("--member", choices=("s7",), default="s7")
    g.add_argument("--wmax", type=_positive(float), default=100.0)
    g.add_argument("--delta", type=_positive(float), default=1e-6)
    g.add_argument("--points", type=_positive(int), default=12)
    g.add_argument("--table", choices=("r", "rM"), default="r", help="which table to write as CSV")
    common(g)
    g.set_defaults(func=cmd_growth)

    ln = sub.add_parser("length", help="curve lengths")
    ln.add_argument("--curve", choices=("directrix", "example"), required=True)
    ln.add_argument("--S", type=float, default=20.0, help="directrix half-length parameter")
    ln.add_argument("--periods", type=_positive(int), default=10)
    common(ln)
    ln.set_defaults(func=cmd_length)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
