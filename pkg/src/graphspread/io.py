"""File formats: graphs (edge list / JSON), CSV tables, atomic writes.

All on-disk node labels are 1-based.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .graph_core import Graph


def fmt(x: float) -> str:
    """17 significant digits; enough to round-trip any double."""
    return format(float(x), ".17g")


def _fmt_weight(w: float) -> str:
    # shortest repr round-trips and keeps "0.1" as "0.1"
    r = repr(float(w))
    return r[:-2] if r.endswith(".0") else r


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def graph_to_edgelist(g: Graph) -> str:
    lines = [f"N {g.n}"]
    lines += [f"{u + 1} {v + 1} {_fmt_weight(w)}" for u, v, w in g.edges()]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> str:
    edges = [[u + 1, v + 1, int(w) if w == int(w) else w] for u, v, w in g.edges()]
    return json.dumps({"n": g.n, "edges": edges}) + "\n"


def parse_edgelist(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "N":
                raise InvalidArgumentError(f"line {lineno}: expected header 'N <n>'")
            n = _parse_int(parts[1], lineno)
            continue
        if len(parts) != 3:
            raise InvalidArgumentError(f"line {lineno}: expected '<u> <v> <w>'")
        u, v = _parse_int(parts[0], lineno), _parse_int(parts[1], lineno)
        try:
            w = float(parts[2])
        except ValueError:
            raise InvalidArgumentError(f"line {lineno}: bad weight {parts[2]!r}") from None
        edges.append((u - 1, v - 1, w))
    if n is None:
        raise InvalidArgumentError("empty graph file")
    return _build(n, edges)


def parse_json_graph(text: str) -> Graph:
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        edges = [(int(u) - 1, int(v) - 1, float(w)) for u, v, w in obj["edges"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed JSON graph: {exc}") from None
    return _build(n, edges)


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InvalidArgumentError(f"line {lineno}: bad integer {tok!r}") from None


def _build(n: int, edges) -> Graph:
    for u, v, w in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidArgumentError(f"edge ({u + 1}, {v + 1}) out of range for N={n}")
        if w <= 0:
            raise InvalidArgumentError(f"edge ({u + 1}, {v + 1}) has nonpositive weight {w}")
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise InvalidArgumentError(str(exc)) from None


def read_graph(path) -> Graph:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_json_graph(text)
    return parse_edgelist(text)


def write_graph(g: Graph, path) -> None:
    path = Path(path)
    text = graph_to_json(g) if path.suffix.lower() == ".json" else graph_to_edgelist(g)
    atomic_write_text(path, text)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def read_csv_columns(path, required) -> dict[str, np.ndarray]:
    """Read a numeric CSV into named float columns.

    Raises:
        InvalidArgumentError: missing columns or non-numeric fields.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidArgumentError(f"{path}: empty CSV") from None
        missing = [c for c in required if c not in header]
        if missing:
            raise InvalidArgumentError(f"{path}: missing columns {missing}")
        rows = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise InvalidArgumentError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                raise InvalidArgumentError(f"{path}:{lineno}: non-numeric field") from None
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
