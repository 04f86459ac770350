"""Reduced-sphere sampling of a star seen from a leaf, against its curve.

Samples the three-coordinate reduced space on a grid, extracts the
lower-left frontier and compares it with the sandwich curve, for one
or more grid steps. The deviation shrinks with the step, which shows
how much of it is grid resolution.

    python3 scripts/star_leaf_sampling.py --steps 0.05 0.01 0.005
"""

import argparse
import time
from pathlib import Path

import numpy as np

from graphspread import find_block_structure, gen_star, sample_cloud, uncertainty_curve
from graphspread import io
from graphspread.cli import CLOUD_HEADER, CURVE_HEADER, curve_rows
from graphspread.reduction import pareto_indices
from graphspread.svgplot import render_svg


def deviation(fs, fg, curve, s_min=0.0):
    lo, hi = max(fs[0], curve.s_range[0], s_min), min(fs[-1], curve.s_range[1])
    keep = (fs >= lo) & (fs <= hi)
    d = fg[keep] - curve.upper(fs[keep])
    return float(np.max(np.abs(d))), float(np.min(d))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--steps", type=float, nargs="+", default=[0.05])
    parser.add_argument("--out", type=Path, default=Path("results/star_leaf"))
    args = parser.parse_args()

    g = gen_star(args.n)
    uc = 1
    part = find_block_structure(g, uc)
    curve = uncertainty_curve(g, uc)
    print(f"partition {part.form()}, curve points {len(curve.points)}, gap {curve.gap:.2e}")
    print(f"{'step':>8} {'samples':>9} {'frontier':>9} {'max |dev|':>10} {'s>=0.1':>10} {'min dev':>10} {'sec':>6}")
    cloud = None
    for step in args.steps:
        t0 = time.perf_counter()
        cloud = sample_cloud(g, uc, part, step)
        idx = pareto_indices(cloud.s, cloud.g)
        elapsed = time.perf_counter() - t0
        fs, fg = cloud.s[idx], cloud.g[idx]
        worst, below = deviation(fs, fg, curve)
        mid, _ = deviation(fs, fg, curve, s_min=0.1)
        print(
            f"{step:>8g} {len(cloud):>9} {idx.size:>9} {worst:>10.2e} {mid:>10.2e} {below:>10.2e} {elapsed:>6.2f}"
        )

    args.out.mkdir(parents=True, exist_ok=True)
    io.atomic_write_text(args.out / "curve.csv", io.rows_to_csv(CURVE_HEADER, curve_rows(curve)))
    io.atomic_write_text(args.out / "cloud.csv", io.rows_to_csv(CLOUD_HEADER, zip(cloud.s, cloud.g)))
    svg = render_svg(curve.s, curve.g, cloud.s, cloud.g, title=f"star, N = {args.n}, leaf as center")
    io.atomic_write_text(args.out / "leaf_sampling.svg", svg)
    print(f"wrote {args.out}/curve.csv, cloud.csv, leaf_sampling.svg (cloud of the last step)")


if __name__ == "__main__":
    main()
