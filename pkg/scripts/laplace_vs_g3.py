"""Compare the two-dimensional Laplace-type integral with G3 on a small grid.

The integral and the series disagree well beyond quadrature error; this
prints both so the gap can be inspected directly.

    python scripts/laplace_vs_g3.py --alpha 1.2 --beta 1.5
"""
import argparse

import numpy as np

from horn_identities.integral_ops import laplace_integral_g3
from horn_identities.series import G3Params, Point, horn


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=1.2)
    ap.add_argument("--beta", type=float, default=1.5)
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args()

    p = G3Params(args.alpha, args.beta)
    print(f"{'x':>8s} {'y':>8s} {'integral':>14s} {'G3':>14s} {'rel gap':>9s}")
    for x in np.linspace(-0.05, -0.01, args.n):
        for y in np.linspace(-0.05, -0.01, args.n):
            q = laplace_integral_g3(p.alpha, p.beta, Point(float(x), float(y)))
            g = horn(p, float(x), float(y))
            print(f"{x:8.4f} {y:8.4f} {q:14.10f} {g:14.10f} {abs(q - g) / abs(g):9.2e}")


if __name__ == "__main__":
    main()
