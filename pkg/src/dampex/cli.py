"""Command-line interface: moments, solve, expansion, norm, report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, DampexError
from .expansion import build_expansion
from .experiments import default_config, load_config, run_report
from .initial_data import (datum_or_pair_sum, moment_table, pair_from_config)
from .norms import FrequencyRegion, residual_norm
from .spectral import REPRESENTATIONS, SpectralSolution


def _read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON config {path}: {exc}") from exc


def _emit(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_floats(text):
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"bad float list {text!r}") from exc


def _parse_region(text, dimension):
    kind, _, rest = text.partition(":")
    try:
        if kind == "full":
            return FrequencyRegion.full(dimension)
        if kind == "ball":
            return FrequencyRegion.ball(float(rest), dimension)
        if kind == "ext":
            return FrequencyRegion.exterior(float(rest), dimension)
        if kind == "annulus":
            a, b = (float(x) for x in rest.split(","))
            return FrequencyRegion.annulus(a, b, dimension)
    except ValueError as exc:
        raise ConfigError(f"bad region spec {text!r}: {exc}") from exc
    raise ConfigError(f"bad region spec {text!r}; use "
                      "ball:r | annulus:a,b | ext:r | full")


def _parse_xi_grid(text, dimension):
    kind, _, rest = text.partition(":")
    if kind != "lin":
        raise ConfigError(f"bad xi grid {text!r}; use lin:lo,hi,count")
    try:
        lo, hi, count = rest.split(",")
        axis = np.linspace(float(lo), float(hi), int(count))
    except ValueError as exc:
        raise ConfigError(f"bad xi grid {text!r}: {exc}") from exc
    grids = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def cmd_moments(args):
    datum = datum_or_pair_sum(_read_json(args.data))
    gammas = _parse_floats(args.gammas) if args.gammas else []
    table = moment_table(datum, args.max_order, gammas=gammas)
    entries = [{"alpha": list(alpha),
                "value": table.moment(alpha),
                "raw": table.raw(alpha),
                "exact_zero": table.is_exact_zero(alpha)}
               for alpha in table.indices()]
    _emit({"dimension": table.dimension, "order": table.order,
           "entries": entries,
           "weighted_norms": {str(g): val for g, val in
                              sorted(table.weighted_norms.items())}},
          args.out)
    return 0


def cmd_solve(args):
    u0, u1 = pair_from_config(_read_json(args.data))
    sol = SpectralSolution(u0=u0, u1=u1)
    ts = _parse_floats(args.t)
    pts = _parse_xi_grid(args.xi_grid, sol.dimension)
    rep = None if args.rep == "auto" else args.rep
    rows = ["t," + ",".join(f"xi{j + 1}" for j in range(sol.dimension))
            + ",re,im"]
    for t in ts:
        vals = sol.evaluate(t, pts, rep=rep)
        for p, val in zip(pts, vals):
            coords = ",".join(repr(float(c)) for c in p)
            rows.append(f"{t!r},{coords},{float(val.real)!r},{float(val.imag)!r}")
    text = "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_expansion(args):
    datum = datum_or_pair_sum(_read_json(args.data))
    table = moment_table(datum, max(args.k, 0))
    poly = build_expansion(args.kind, args.k, table)
    if args.print == "terms":
        payload = {"kind": poly.kind, "order": poly.order,
                   "dimension": poly.dimension,
                   "terms": [{"re": t.coefficient.real,
                              "im": t.coefficient.imag,
                              "radial_power": t.radial_power,
                              "monomial": list(t.monomial)}
                             for t in poly.terms]}
    else:
        payload = {"kind": poly.kind, "order": poly.order,
                   "dimension": poly.dimension,
                   "canonical": [{"monomial": list(mono),
                                  "re": c.real, "im": c.imag}
                                 for mono, c in poly.canonical],
                   "structurally_zero": poly.is_structurally_zero}
    _emit(payload, args.out)
    return 0


def cmd_norm(args):
    u0, u1 = pair_from_config(_read_json(args.data))
    sol = SpectralSolution(u0=u0, u1=u1)
    region = _parse_region(args.region, sol.dimension)
    rows = []
    for t in _parse_floats(args.t):
        res = residual_norm(sol, t, args.k, region, tol=args.tol)
        rows.append({"t": t, "norm": res.value,
                     "error_estimate": res.error_estimate,
                     "evaluations": res.evaluations})
    if args.out and args.out.endswith(".csv"):
        lines = ["t,norm,error_estimate,evaluations"]
        lines += [f"{r['t']!r},{r['norm']!r},{r['error_estimate']!r},"
                  f"{r['evaluations']}" for r in rows]
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        _emit({"k": args.k, "region": args.region, "results": rows}, args.out)
    return 0


def cmd_report(args):
    cfg = load_config(args.config) if args.config else default_config()
    if args.seed is not None:
        cfg["seed"] = args.seed
    bundle = run_report(cfg, args.out_dir)
    sys.stdout.write(f"wrote {bundle.out_dir / 'summary.json'} "
                     f"({bundle.summary['n_failed']} failed)\n")
    return 0 if bundle.passed else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dampex",
        description="Verify diffusion-type expansions and decay bounds for a "
                    "doubly damped wave equation at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="emit a moment table as JSON")
    p.add_argument("--data", required=True, help="datum or pair config (JSON)")
    p.add_argument("--max-order", type=int, required=True, dest="max_order")
    p.add_argument("--gammas", default="", help="comma list of weights")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("solve", help="evaluate the transformed solution on a grid")
    p.add_argument("--data", required=True, help="pair config (JSON)")
    p.add_argument("--t", required=True, help="comma list of times")
    p.add_argument("--xi-grid", required=True, dest="xi_grid",
                   help="lin:lo,hi,count (tensorized per axis)")
    p.add_argument("--rep", default="auto", choices=("auto",) + REPRESENTATIONS)
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("expansion", help="build an expansion polynomial")
    p.add_argument("--data", required=True)
    p.add_argument("--kind", required=True, choices=("A", "B", "C"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--print", default="terms", choices=("terms", "canonical"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("norm", help="region L2 norms of the expansion residual")
    p.add_argument("--data", required=True, help="pair config (JSON)")
    p.add_argument("--t", required=True, help="comma list of times")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--region", default="full",
                   help="ball:r | annulus:a,b | ext:r | full")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None, help=".json or .csv path")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("report", help="run a verification campaign")
    p.add_argument("--config", default=None,
                   help="campaign config JSON (bundled default if omitted)")
    p.add_argument("--out-dir", required=True, dest="out_dir")
    p.add_argument("--seed", type=int, default=None,
                   help="override the frequency-sample seed")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except DampexError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
