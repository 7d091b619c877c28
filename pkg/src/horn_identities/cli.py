"""Command line entry point: eval, verify and sweep."""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import sys

import numpy as np

from . import harness as hz
from .errors import HornError, NotFound
from .registry import EXPECTED, REGISTRY, lookup, select
from .series import Point, evaluate, make_params


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _trunc(text: str | None):
    if text is None:
        return None
    vals = [int(v) for v in text.split(",")]
    return (vals[0], vals[0]) if len(vals) == 1 else tuple(vals)


def cmd_eval(args) -> int:
    p = make_params(args.family, _floats(args.params))
    x, y = _floats(args.point)
    v = evaluate(p, Point(x, y), _trunc(args.trunc))
    print(f"value          {v.value:.17g}")
    print(f"terms_used     {v.terms_used}")
    print(f"tail_estimate  {v.tail_estimate:.3e}")
    print(f"converged      {v.converged}")
    return 0 if v.converged else 3


def _summary(verdicts: dict[str, str], out) -> int:
    bad = hz.mismatches(verdicts)
    for k, v in verdicts.items():
        exp = EXPECTED.get(k, "?")
        flag = "" if k not in bad else "   MISMATCH"
        print(f"{k:34s} {v:9s} expected {exp}{flag}", file=out)
    print(f"{len(verdicts)} identities, {len(bad)} verdict mismatches", file=out)
    return 1 if bad else 0


def cmd_verify(args, config) -> int:
    if args.all:
        entries = list(REGISTRY.values())
    else:
        entries = select(args.id)
    reports = hz.run_suite(entries, count=args.count, seed=args.seed, config=config)
    text = hz.emit_report(reports, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return _summary(hz.aggregate(reports), sys.stderr if args.out is None else sys.stdout)


def parse_grid(text: str) -> dict[str, list]:
    """``x=0.01:0.05:5;ell=1|2|3`` -> {"x": [...], "ell": [1, 2, 3]}.

    ``lo:hi:n`` is an inclusive linear range of n points, ``a|b|c`` a list."""
    out: dict[str, list] = {}
    for part in filter(None, (s.strip() for s in text.split(";"))):
        key, _, spec = part.partition("=")
        key = key.strip()
        if not spec:
            raise ValueError(f"grid entry {part!r} has no values")
        if ":" in spec:
            lo, hi, n = spec.split(":")
            vals = [float(v) for v in np.linspace(float(lo), float(hi), int(n))]
        else:
            vals = [float(v) for v in spec.split("|")]
        if key == "ell":
            vals = [int(round(v)) for v in vals]
        out[key] = vals
    return out


def sweep_cases(identity_id: str, grid: dict[str, list], seed: int, config):
    """Cartesian product of the grid applied to one sampled base case."""
    entry = lookup(identity_id)
    base = hz.sample_cases(entry.id, config.domain, 1, seed, config)[0]
    keys = sorted(grid)
    for combo in itertools.product(*(grid[k] for k in keys)):
        upd = dict(zip(keys, combo))
        x, y = upd.pop("x", base.point.x), upd.pop("y", base.point.y)
        fields = {k: upd.pop(k) for k in ("ell", "t") if k in upd}
        params = base.params.shifted(**{k: v - getattr(base.params, k) for k, v in upd.items()})
        yield dataclasses.replace(base, params=params, point=Point(x, y), **fields)


def cmd_sweep(args, config) -> int:
    grid = parse_grid(args.grid)
    reports = []
    for i, case in enumerate(sweep_cases(args.id, grid, args.seed, config)):
        reports.append(hz.evaluate_case(case, args.seed, i, config.truncation))
    text = hz.emit_report(reports, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="horn-identities", description=__doc__)
    ap.add_argument("--config", help="JSON file overriding sampling boxes, truncation, tolerances")
    sub = ap.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate G1, G2 or G3 at one point")
    e.add_argument("--family", required=True, choices=["g1", "g2", "g3"])
    e.add_argument("--params", required=True, help="comma separated, e.g. 0.3,0.4,0.5")
    e.add_argument("--point", required=True, help="x,y")
    e.add_argument("--trunc", help="M,N (default: automatic)")

    v = sub.add_parser("verify", help="sample and classify identities")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--id", help="identity id, group, equation or glob")
    g.add_argument("--all", action="store_true")
    v.add_argument("--count", type=int, help="cases per identity (default: per identity)")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--format", choices=["csv", "json"], default="csv")
    v.add_argument("--out")

    s = sub.add_parser("sweep", help="residual table over a parameter/point grid")
    s.add_argument("--id", required=True)
    s.add_argument("--grid", required=True, help='e.g. "x=0.01:0.05:5;ell=1|2|3"')
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = hz.load_config(args.config)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "verify":
            return cmd_verify(args, config)
        return cmd_sweep(args, config)
    except NotFound as exc:
        print(f"error: unknown identity {exc.args[0]!r}", file=sys.stderr)
        return 2
    except (HornError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
