"""Weighted undirected graphs, standard generators and distance matrices.

Nodes are 0-based in the Python API. File formats and the command line use
1-based labels; conversion happens in :mod:`graphspread.io` and the CLI.
"""

from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateDegreeError,
    DisconnectedGraphError,
    GraphError,
    InvalidArgumentError,
    InvalidSizeError,
)

MAX_RANDOM_ATTEMPTS = 1000


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph given by its symmetric weight matrix."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GraphError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise InvalidSizeError("a graph needs at least 2 nodes")
        if not np.all(np.isfinite(w)):
            raise GraphError("weights must be finite")
        if np.any(w < 0):
            raise GraphError("negative weights are not supported")
        if np.any(np.diag(w) != 0):
            raise GraphError("self-loops are not allowed")
        if not np.array_equal(w, w.T):
            raise GraphError("weight matrix must be symmetric")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges ``(u, v, w)`` with ``u < v``, in lexicographic order."""
        iu, iv = np.nonzero(np.triu(self.weights, 1))
        return [(int(u), int(v), float(self.weights[u, v])) for u, v in zip(iu, iv)]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def neighbors(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.weights[u])

    def has_integer_weights(self) -> bool:
        return bool(np.all(self.weights == np.round(self.weights)))

    def permuted(self, perm) -> "Graph":
        """Relabel so that new node ``i`` is old node ``perm[i]``."""
        perm = np.asarray(perm)
        return Graph(self.weights[np.ix_(perm, perm)])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.n, self.weights.tobytes()))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        w = np.zeros((n, n))
        for u, v, wt in edges:
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} nodes")
            w[u, v] = w[v, u] = wt
        return cls(w)


def _check_center(g: Graph, uc: int) -> int:
    uc = int(uc)
    if not 0 <= uc < g.n:
        raise InvalidArgumentError(f"center node {uc} out of range for {g.n} nodes")
    return uc


def gen_star(n: int) -> Graph:
    """Star with node 0 as the hub."""
    if n < 3:
        raise InvalidSizeError(f"a star needs n >= 3, got {n}")
    return Graph.from_edges(n, [(0, v, 1.0) for v in range(1, n)])


def gen_complete(n: int) -> Graph:
    if n < 2:
        raise InvalidSizeError(f"a complete graph needs n >= 2, got {n}")
    return Graph(np.ones((n, n)) - np.eye(n))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidSizeError(f"a cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def gen_path(n: int) -> Graph:
    if n < 2:
        raise InvalidSizeError(f"a path needs n >= 2, got {n}")
    return Graph.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def gen_random(n: int, p: float, seed: int = 0) -> Graph:
    """Connected Erdos-Renyi graph, resampled until connected.

    Raises:
        InvalidArgumentError: ``n < 2``, ``p`` outside ``(0, 1]``, or no
            connected sample within ``MAX_RANDOM_ATTEMPTS`` draws.
    """
    if n < 2:
        raise InvalidSizeError(f"a random graph needs n >= 2, got {n}")
    if not 0 < p <= 1:
        raise InvalidArgumentError(f"edge probability must be in (0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    for _ in range(MAX_RANDOM_ATTEMPTS):
        w = np.zeros((n, n))
        w[iu] = (rng.random(iu[0].size) < p).astype(float)
        w = w + w.T
        g = Graph(w)
        if is_connected(g):
            return g
    raise InvalidArgumentError(
        f"no connected G({n}, {p}) sample in {MAX_RANDOM_ATTEMPTS} attempts"
    )


GENERATORS: dict[str, Callable[..., Graph]] = {
    "star": gen_star,
    "complete": gen_complete,
    "cycle": gen_cycle,
    "path": gen_path,
    "random": gen_random,
}


def bfs_hops(g: Graph, source: int) -> np.ndarray:
    """Hop counts from ``source``; unreachable nodes get -1."""
    hops = np.full(g.n, -1, dtype=int)
    hops[source] = 0
    queue = deque([source])
    adj = g.weights > 0
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            if hops[v] < 0:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops


def is_connected(g: Graph) -> bool:
    return bool(np.all(bfs_hops(g, 0) >= 0))


def geodesic_distances(g: Graph, uc: int) -> np.ndarray:
    """Hop distance from ``uc`` to every node; weights are ignored."""
    uc = _check_center(g, uc)
    hops = bfs_hops(g, uc)
    if np.any(hops < 0):
        missing = np.flatnonzero(hops < 0)
        raise DisconnectedGraphError(
            f"nodes {missing.tolist()} are unreachable from node {uc}"
        )
    return hops


def weighted_distances(g: Graph, uc: int) -> np.ndarray:
    """Shortest-path lengths from ``uc`` using edge weights as lengths."""
    from scipy.sparse.csgraph import dijkstra

    uc = _check_center(g, uc)
    d = dijkstra(g.weights, directed=False, indices=uc)
    if not np.all(np.isfinite(d)):
        raise DisconnectedGraphError(f"graph is disconnected from node {uc}")
    return d


def _squared_hops(g: Graph, uc: int) -> np.ndarray:
    return geodesic_distances(g, uc).astype(float) ** 2


def _hops(g: Graph, uc: int) -> np.ndarray:
    return geodesic_distances(g, uc).astype(float)


def _squared_weighted(g: Graph, uc: int) -> np.ndarray:
    return weighted_distances(g, uc) ** 2


DISTANCE_KINDS: dict[str, Callable[[Graph, int], np.ndarray]] = {
    "squared_geodesic": _squared_hops,
    "geodesic": _hops,
    "squared_weighted": _squared_weighted,
}


@dataclass(frozen=True, eq=False)
class DistanceDiagonal:
    """Diagonal of the distance matrix ``P`` relative to center ``uc``."""

    entries: np.ndarray
    uc: int
    distance_kind: str = "squared_geodesic"

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def matrix(self) -> np.ndarray:
        return np.diag(self.entries)


def distance_matrix(g: Graph, uc: int, distance_kind: str = "squared_geodesic") -> DistanceDiagonal:
    """Distances from ``uc`` under ``distance_kind``.

    ``distance_kind`` is a key of :data:`DISTANCE_KINDS` or a callable
    ``(graph, uc) -> array`` returning distances with a zero at ``uc``.
    """
    uc = _check_center(g, uc)
    if callable(distance_kind):
        fn, kind = distance_kind, getattr(distance_kind, "__name__", "custom")
    else:
        try:
            fn, kind = DISTANCE_KINDS[distance_kind], distance_kind
        except KeyError:
            raise InvalidArgumentError(f"unknown distance kind {distance_kind!r}") from None
    entries = np.asarray(fn(g, uc), dtype=float)
    if entries.shape != (g.n,) or entries[uc] != 0 or np.any(entries < 0):
        raise InvalidArgumentError("distance function must be nonnegative with zero at the center")
    return DistanceDiagonal(entries, uc, kind)


def normalized_laplacian(g: Graph) -> np.ndarray:
    """``I - D^{-1/2} W D^{-1/2}``.

    Raises:
        DegenerateDegreeError: some node has zero degree.
    """
    deg = g.degrees
    if np.any(deg <= 0):
        raise DegenerateDegreeError(f"isolated nodes: {np.flatnonzero(deg <= 0).tolist()}")
    # sqrt of the product keeps the result bitwise symmetric
    lap = -g.weights / np.sqrt(np.outer(deg, deg))
    np.fill_diagonal(lap, 1.0)
    return lap
