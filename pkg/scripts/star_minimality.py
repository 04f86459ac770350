"""Left-end graph spread of several graph families, best center per graph.

The left end of a curve is the first Laplacian eigenvector, so this is
the smallest graph spread any zero-spectral-spread signal can reach.

    python3 scripts/star_minimality.py --sizes 4 5 6 7 8
"""

import argparse

from graphspread import (
    curve_endpoints,
    distance_matrix,
    gen_complete,
    gen_cycle,
    gen_path,
    gen_star,
    normalized_laplacian,
)

FAMILIES = {"star": gen_star, "complete": gen_complete, "path": gen_path, "cycle": gen_cycle}


def best_left_spread(g):
    lap = normalized_laplacian(g)
    values = [curve_endpoints(distance_matrix(g, uc), lap, uc)[0].g for uc in range(g.n)]
    # symmetric centers differ only by rounding; report the lowest label
    best = next(u for u, v in enumerate(values) if v <= min(values) + 1e-12)
    return values[best], best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    args = parser.parse_args()
    print(f"{'N':>3} " + " ".join(f"{name:>16}" for name in FAMILIES) + "  smallest")
    for n in args.sizes:
        row = {name: best_left_spread(gen(n)) for name, gen in FAMILIES.items()}
        cells = " ".join(f"{v:>10.6f} (u={u + 1:>2})" for v, u in row.values())
        print(f"{n:>3} {cells}  {min(row, key=lambda k: row[k][0])}")


if __name__ == "__main__":
    main()
