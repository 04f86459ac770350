"""Uncertainty curves of star graphs seen from the hub.

Traces the curve for several star sizes, reports how far each lies from
the ellipse (s - 1)^2 + (2g - 1)^2 = 1 and from the smallest star's
curve, and writes the curve CSV and an SVG plot for the largest size.

    python3 scripts/star_curve.py --out results/star_curve
"""

import argparse
import time
from pathlib import Path

import numpy as np

from graphspread import gen_star, uncertainty_curve
from graphspread import io
from graphspread.cli import CURVE_HEADER, curve_rows
from graphspread.svgplot import render_svg


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 8, 10])
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--out", type=Path, default=Path("results/star_curve"))
    args = parser.parse_args()

    grid = np.linspace(0.0, 1.0, 1001)
    ref = None
    curve = None
    print(f"{'N':>4} {'points':>7} {'gap':>10} {'ellipse':>10} {'vs first':>10} {'sec':>6}")
    for n in args.sizes:
        t0 = time.perf_counter()
        curve = uncertainty_curve(gen_star(n), 0, args.tol)
        elapsed = time.perf_counter() - t0
        s, g = curve.s, curve.g
        ellipse = np.max(np.abs((s - 1) ** 2 + (2 * g - 1) ** 2 - 1))
        upper = curve.upper(grid)
        ref = upper if ref is None else ref
        print(
            f"{n:>4} {len(curve.points):>7} {curve.gap:>10.2e} {ellipse:>10.2e} "
            f"{np.max(np.abs(upper - ref)):>10.2e} {elapsed:>6.2f}"
        )

    args.out.mkdir(parents=True, exist_ok=True)
    n = args.sizes[-1]
    io.atomic_write_text(args.out / f"star{n}_center.csv", io.rows_to_csv(CURVE_HEADER, curve_rows(curve)))
    svg = render_svg(curve.s, curve.g, title=f"star, N = {n}, hub as center")
    io.atomic_write_text(args.out / f"star{n}_center.svg", svg)
    print(f"wrote {args.out}/star{n}_center.csv and .svg")


if __name__ == "__main__":
    main()
