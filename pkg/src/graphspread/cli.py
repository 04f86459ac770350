"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 graph precondition
violated (disconnected graph, isolated node), 4 curve refinement did not
converge. Node labels on the command line are 1-based.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import ConvergenceError, GraphError, GraphspreadError, InvalidArgumentError
from .graph_core import GENERATORS, distance_matrix, normalized_laplacian
from .reduction import find_block_structure, pareto_indices, sample_cloud
from .svgplot import render_svg
from .uncertainty import UncertaintyCurve, sandwich_curve

EXIT_OK, EXIT_USAGE, EXIT_GRAPH, EXIT_CONVERGENCE = 0, 2, 3, 4

CURVE_HEADER = ("alpha", "spectral_spread", "graph_spread", "lower_gap")
CLOUD_HEADER = ("spectral_spread", "graph_spread")


class UsageError(InvalidArgumentError):
    pass


def curve_rows(curve: UncertaintyCurve) -> list:
    """CSV rows; ``lower_gap`` is the bound gap of the segment to the right."""
    gaps = list(curve.segment_gaps) + [0.0]
    return [(pt.alpha, pt.s, pt.g, gap) for pt, gap in zip(curve.points, gaps)]


def _emit(text: str, out) -> None:
    if out:
        io.atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _info(msg: str, to_stderr: bool) -> None:
    print(msg, file=sys.stderr if to_stderr else sys.stdout)


def _load(args):
    g = io.read_graph(args.graph)
    if not 1 <= args.uc <= g.n:
        raise UsageError(f"--uc {args.uc} out of range 1..{g.n}")
    return g, args.uc - 1


def cmd_gen(args) -> int:
    fn = GENERATORS[args.family]
    if args.family == "random":
        g = fn(args.n, args.p, args.seed)
    else:
        g = fn(args.n)
    if args.out:
        io.write_graph(g, args.out)
    else:
        sys.stdout.write(io.graph_to_edgelist(g))
    _info(f"N {g.n} edges {g.n_edges}", to_stderr=not args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    g, uc = _load(args)
    p = distance_matrix(g, uc)
    lap = normalized_laplacian(g)
    try:
        curve = sandwich_curve(p, lap, uc, args.tol)
        code = EXIT_OK
    except ConvergenceError as exc:
        curve = exc.partial
        code = EXIT_CONVERGENCE
        print(f"error: {exc}", file=sys.stderr)
    _emit(io.rows_to_csv(CURVE_HEADER, curve_rows(curve)), args.out)
    _info(f"gap {io.fmt(curve.gap)} points {len(curve.points)}", to_stderr=not args.out)
    return code


def cmd_reduce(args) -> int:
    g, uc = _load(args)
    part = find_block_structure(g, uc)
    _emit(json.dumps(part.to_json()) + "\n", args.out)
    _info(f"M {part.reduced_dim} form {part.form()}", to_stderr=not args.out)
    return EXIT_OK


def _frontier_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(f"{p.stem}.frontier{p.suffix or '.csv'}")


def cmd_sample(args) -> int:
    g, uc = _load(args)
    if not args.step > 0:
        raise UsageError(f"--step must be positive, got {args.step}")
    part = find_block_structure(g, uc)
    cloud = sample_cloud(g, uc, part, args.step)
    idx = pareto_indices(cloud.s, cloud.g)
    frontier_out = args.frontier or _frontier_path(args.out)
    io.atomic_write_text(args.out, io.rows_to_csv(CLOUD_HEADER, zip(cloud.s, cloud.g)))
    io.atomic_write_text(frontier_out, io.rows_to_csv(CLOUD_HEADER, zip(cloud.s[idx], cloud.g[idx])))
    print(f"M {part.reduced_dim} samples {len(cloud)} frontier {idx.size}")
    return EXIT_OK


def cmd_plot(args) -> int:
    curve = io.read_csv_columns(args.curve, ("spectral_spread", "graph_spread"))
    if curve["spectral_spread"].size == 0:
        raise UsageError(f"{args.curve}: no curve rows")
    cs = cg = None
    if args.cloud:
        cloud = io.read_csv_columns(args.cloud, ("spectral_spread", "graph_spread"))
        cs, cg = cloud["spectral_spread"], cloud["graph_spread"]
    order = np.argsort(curve["spectral_spread"], kind="stable")
    svg = render_svg(curve["spectral_spread"][order], curve["graph_spread"][order], cs, cg, args.title)
    io.atomic_write_text(args.out, svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphspread", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path; .json selects JSON, anything else an edge list")
    p.set_defaults(func=cmd_gen)

    def graph_args(q):
        q.add_argument("--graph", required=True)
        q.add_argument("--uc", type=int, required=True, help="center node, 1-based")

    p = sub.add_parser("curve", help="uncertainty curve by sandwich refinement")
    graph_args(p)
    p.add_argument("--tol", type=_positive(float), default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("reduce", help="detect symmetric tails")
    graph_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sample", help="sample the reduced sphere and extract its frontier")
    graph_args(p)
    p.add_argument("--step", type=_positive(float), default=0.05)
    p.add_argument("--out", required=True, help="cloud CSV")
    p.add_argument("--frontier", help="frontier CSV (default: <out stem>.frontier.csv)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("plot", help="render curve (and cloud) CSVs to SVG")
    p.add_argument("--curve", required=True)
    p.add_argument("--cloud")
    p.add_argument("--title", default="")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except (GraphspreadError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
