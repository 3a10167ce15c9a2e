"""Command-line front end: ``agingmeans <subcommand> ...``.

Subcommands
-----------
analyze    profile of one model on a grid (CSV or JSON)
classify   aging-class verdicts of one model (JSON array)
compare    stochastic orders between two models (JSON)
system     series-system bounds for repeated ``--component`` specs (JSON)
estimate   kernel hazard estimate and plug-in profile from ``time,status`` data
simulate   Monte Carlo bias/MSE study from a ``key=value`` config file

Exit status is 0 on success, 1 on a domain error (the message names the
error class) and 2 on a usage error.  ``AGINGMEANS_SEED`` replaces the
built-in default seed of ``simulate``; a ``base_seed`` in the config file
or ``--seed`` on the command line take precedence over it.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import classification, orders, systems
from .errors import AgingError, DivergentFunctional
from .estimation import DEFAULT_GRID_SIZE, estimated_profile, ingest, kernel_hazard
from .functionals import profile
from .models import parse_model
from .simstudy import parse_config, run_study

SEED_ENV = "AGINGMEANS_SEED"


class UsageError(Exception):
    """Bad command-line input detected after argparse (names the flag)."""

    def __init__(self, flag, message):
        super().__init__(f"argument {flag}: {message}")


def parse_grid(spec: str, left: float) -> np.ndarray:
    """``start:stop:points[:log|:linear]``; log spacing by default when ``left == 0``."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise UsageError("--grid", f"expected start:stop:points[:log|:linear], got {spec!r}")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError("--grid", f"non-numeric value in {spec!r}") from None
    spacing = parts[3].lower() if len(parts) == 4 else ("log" if left == 0.0 else "linear")
    if spacing not in ("log", "linear", "lin"):
        raise UsageError("--grid", f"spacing must be 'log' or 'linear', got {parts[3]!r}")
    if points < 2 or not stop > start:
        raise UsageError("--grid", "need stop > start and at least 2 points")
    if not start > left:
        raise UsageError("--grid", f"start {start:g} must exceed the support left endpoint {left:g}")
    if spacing == "log":
        if start <= 0:
            raise UsageError("--grid", "log spacing needs a positive start")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def _write(args, text: str):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


def _dump(obj) -> str:
    return json.dumps(_clean(obj), indent=1, sort_keys=False) + "\n"


def _clean(obj):
    if isinstance(obj, float):
        if not np.isfinite(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _clean(obj.item())
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_clean(v) for v in (sorted(obj) if isinstance(obj, (set, frozenset)) else obj)]
    return obj


def _split(values):
    if values is None:
        return None
    items = [v.strip() for chunk in values for v in chunk.split(",") if v.strip()]
    return None if items in ([], ["all"]) else [v.upper() for v in items]


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args):
    model = parse_model(args.model)
    grid = parse_grid(args.grid, model.left)
    prof = profile(model, grid, rtol=args.rtol)
    _write(args, prof.to_csv() if args.format == "csv" else prof.to_json())


def cmd_classify(args):
    model = parse_model(args.model)
    grid = parse_grid(args.grid, model.left)
    targets = _split(args.targets)
    explicit = targets is not None
    targets = targets or list(classification.TARGETS)
    for t in targets:
        if t not in classification.TARGETS:
            raise UsageError("--targets", f"unknown target {t!r}; expected {', '.join(classification.TARGETS)}")
    if grid.size < classification.MIN_GRID:
        raise UsageError("--grid", f"classification needs at least {classification.MIN_GRID} points")
    prof = profile(model, grid)
    out = []
    for target in targets:
        try:
            out.append(classification.classify_profile(prof, args.tol, [target])[0].to_dict())
        except DivergentFunctional:
            if explicit:
                raise
            out.append({"target": target, "label": "Divergent", "witness": None, "tolerance": args.tol})
    if args.bounds:
        out = {"verdicts": out, "bounds": classification.check_bounds(prof, args.tol).to_dict()}
    _write(args, _dump(out))


def cmd_compare(args):
    x, y = parse_model(args.x), parse_model(args.y)
    grid = parse_grid(args.grid, x.left)
    kinds = _split(args.orders)
    explicit = kinds is not None
    for k in kinds or ():
        if k not in orders.ORDER_KINDS:
            raise UsageError("--orders", f"unknown order {k!r}; expected {', '.join(orders.ORDER_KINDS)}")
    if explicit:
        reports = orders.check_orders(x, y, kinds, grid, args.tol)
        out = {"x": repr(x), "y": repr(y), "orders": {k: r.to_dict() for k, r in reports.items()}}
    else:
        imp = orders.verify_implications(x, y, grid, args.tol)
        out = {"x": repr(x), "y": repr(y), **imp.to_dict()}
        for k in imp.skipped:
            out["orders"][k] = {"kind": k, "direction": "Divergent", "witness_xy": None, "witness_yx": None}
    _write(args, _dump(out))


def cmd_system(args):
    comps = [parse_model(c) for c in args.component]
    system = systems.series(comps)
    grid = parse_grid(args.grid, system.composite.left)
    report = systems.verify_series_bounds(system, grid, args.rtol)
    out = {"components": [repr(c) for c in comps], **report.to_dict()}
    if "hfr_dhm" not in report.skipped:
        out["gaps"] = systems.theorem_gaps(system, grid)
    _write(args, _dump(out))


def cmd_estimate(args):
    bandwidth = args.bandwidth if args.bandwidth == "auto" else _positive_float("--bandwidth", args.bandwidth)
    sample = ingest(Path(args.data).read_bytes())
    est = kernel_hazard(sample, bandwidth, args.grid_size)
    prof = estimated_profile(est)
    if args.rates_out:
        Path(args.rates_out).write_text(est.to_csv())
    if args.format == "csv":
        text = prof.to_csv()
    else:
        payload = json.loads(prof.to_json())
        payload.update({"bandwidth": est.bandwidth, "kernel": est.kernel, "floor": est.floor, "n": sample.n})
        text = _dump(payload)
    _write(args, text)


def _positive_float(flag, value):
    try:
        v = float(value)
    except ValueError:
        raise UsageError(flag, f"expected a number or 'auto', got {value!r}") from None
    if not v > 0:
        raise UsageError(flag, "must be positive")
    return v


def cmd_simulate(args):
    text = Path(args.config).read_text() if args.config else ""
    config = parse_config(text)
    if args.seed is not None:
        config = dataclasses.replace(config, base_seed=args.seed)
    elif "base_seed" not in _keys(text) and os.environ.get(SEED_ENV):
        try:
            config = dataclasses.replace(config, base_seed=int(os.environ[SEED_ENV]))
        except ValueError:
            raise UsageError(SEED_ENV, f"must be an integer, got {os.environ[SEED_ENV]!r}") from None
    report = run_study(config, workers=args.workers)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    _write(args, report.to_json())


def _keys(text):
    return {line.split("#", 1)[0].split("=", 1)[0].strip() for line in text.splitlines() if "=" in line}


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="agingmeans", description="Mean failure rates and aging intensities.")
    sub = p.add_subparsers(dest="command", required=True, metavar="subcommand")

    def common(sp, fmt=False):
        sp.add_argument("--out", "-o", help="output path (default: stdout)")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    grid_help = "start:stop:points[:log|:linear]"
    a = sub.add_parser("analyze", help="profile of one model")
    a.add_argument("--model", required=True, help="e.g. weibull:alpha=0.5,beta=1.5")
    a.add_argument("--grid", required=True, help=grid_help)
    a.add_argument("--rtol", type=float, default=1e-9)
    common(a, fmt=True)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="aging-class verdicts")
    c.add_argument("--model", required=True)
    c.add_argument("--grid", required=True, help=grid_help)
    c.add_argument("--targets", action="append", help="comma list or 'all' (default)")
    c.add_argument("--tol", type=float, default=classification.ANALYTIC_TOL)
    c.add_argument("--bounds", action="store_true", help="also report the intensity chain checks")
    common(c)
    c.set_defaults(func=cmd_classify)

    o = sub.add_parser("compare", help="stochastic orders between two models")
    o.add_argument("--x", required=True)
    o.add_argument("--y", required=True)
    o.add_argument("--orders", action="append", help="comma list or 'all' (default; adds implication checks)")
    o.add_argument("--grid", default="0.05:5:64", help=grid_help)
    o.add_argument("--tol", type=float, default=orders.ANALYTIC_TOL)
    common(o)
    o.set_defaults(func=cmd_compare)

    s = sub.add_parser("system", help="series-system bounds")
    s.add_argument("--component", action="append", required=True, help="repeat once per component")
    s.add_argument("--grid", default="0.05:5:32", help=grid_help)
    s.add_argument("--rtol", type=float, default=1e-8)
    common(s)
    s.set_defaults(func=cmd_system)

    e = sub.add_parser("estimate", help="kernel hazard estimate from time,status CSV")
    e.add_argument("--data", required=True)
    e.add_argument("--bandwidth", default="auto")
    e.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    e.add_argument("--rates-out", help="also write t,rhat,clamped here")
    common(e, fmt=True)
    e.set_defaults(func=cmd_estimate)

    m = sub.add_parser("simulate", help="Monte Carlo bias/MSE study")
    m.add_argument("--config", help="key=value file (defaults to the published settings)")
    m.add_argument("--seed", type=int)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--csv", help="also write the long-format functional,n,bias,mse table here")
    common(m)
    m.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"agingmeans {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except AgingError as exc:
        print(f"agingmeans {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"agingmeans {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
