"""Run every registered identity once and print a per-identity summary.

    python scripts/run_all.py --seed 1 --out results.csv
"""
import argparse
import sys
import time

from horn_identities import harness as hz
from horn_identities.registry import EXPECTED, REGISTRY


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--count", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    t0 = time.time()
    reports = hz.run_suite(list(REGISTRY.values()), count=args.count, seed=args.seed)
    if args.out:
        hz.emit_report(reports, "csv", args.out)
    agg = hz.aggregate(reports)
    worst: dict[str, float] = {}
    for r in reports:
        if r.verdict != "EXCLUDED":
            worst[r.id] = max(worst.get(r.id, 0.0), r.rel_residual)
    for key in sorted(agg):
        flag = "" if agg[key] == EXPECTED[key] or agg[key] == "EXCLUDED" else "  <-- expected " + EXPECTED[key]
        print(f"{key:34s} {agg[key]:8s} worst rel {worst.get(key, float('nan')):.2e}{flag}")
    bad = hz.mismatches(agg)
    print(f"{len(reports)} cases, {len(agg)} identities, {len(bad)} mismatches, {time.time() - t0:.0f} s",
          file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
