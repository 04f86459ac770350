"""Block structure of ``M(alpha)`` and the reduced search space it implies.

A *tail* is a set of nodes, all at the same distance from the center, on
which the Laplacian block is circulant and every other node sees a constant
Laplacian row. For such a set the minimizing eigenvector of
``P - alpha L`` takes one common value on the whole tail, so curve-attaining
signals live in a space with one coordinate per group.
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InvalidArgumentError
from .graph_core import Graph, distance_matrix, normalized_laplacian
from .spectral import _diag_entries, spreads, sym_eig
from .uncertainty import SpreadPoint, m_alpha


def is_circulant(m: np.ndarray, tol: float = 0.0) -> bool:
    """True iff ``m[i, j]`` depends only on ``(j - i) mod k``, within ``tol``."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    k = m.shape[0]
    if k <= 1:
        return True
    idx = (np.arange(k)[None, :] - np.arange(k)[:, None]) % k
    return bool(np.all(np.abs(m - m[0][idx]) <= tol))


def is_constant_by_row(b: np.ndarray, tol: float = 0.0) -> bool:
    """True iff every row of ``b`` has all entries equal within ``tol``."""
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if b.size == 0:
        return True
    return bool(np.all(np.abs(b - b[:, :1]) <= tol))


@dataclass(frozen=True)
class BlockPartition:
    """Node groups in block order: free nodes first, tails last.

    Node ids are 0-based labels of the original graph. ``ordering[i]`` is
    the original node placed at position ``i``; within a tail the order
    is one that makes its Laplacian block circulant.
    """

    ordering: tuple
    groups: tuple

    def __post_init__(self):
        flat = [v for grp in self.groups for v in grp]
        if tuple(flat) != tuple(self.ordering):
            raise InvalidArgumentError("ordering must be the concatenation of groups")
        if sorted(flat) != list(range(len(flat))):
            raise InvalidArgumentError("groups must partition the nodes 0..n-1")

    @property
    def n(self) -> int:
        return len(self.ordering)

    @property
    def reduced_dim(self) -> int:
        return len(self.groups)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(grp) for grp in self.groups])

    @property
    def tails(self) -> list:
        return [grp for grp in self.groups if len(grp) > 1]

    def expansion_matrix(self) -> np.ndarray:
        """``n x M`` 0/1 matrix mapping reduced coordinates to node values."""
        e = np.zeros((self.n, self.reduced_dim))
        for i, grp in enumerate(self.groups):
            e[list(grp), i] = 1.0
        return e

    def form(self) -> str:
        parts = []
        for i, grp in enumerate(self.groups, 1):
            parts.append(f"x{i}" if len(grp) == 1 else f"x{i} ×{len(grp)}")
        return "{" + "; ".join(parts) + "}"

    def to_json(self) -> dict:
        return {
            "ordering": [v + 1 for v in self.ordering],
            "groups": [[v + 1 for v in grp] for grp in self.groups],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BlockPartition":
        groups = tuple(tuple(int(v) - 1 for v in grp) for grp in obj["groups"])
        ordering = tuple(int(v) - 1 for v in obj["ordering"])
        return cls(ordering, groups)

    @classmethod
    def trivial(cls, n: int) -> "BlockPartition":
        return cls(tuple(range(n)), tuple((v,) for v in range(n)))


@dataclass(frozen=True, eq=False)
class ReducedSignal:
    coords: np.ndarray
    partition: BlockPartition


def _structure_tol(g: Graph) -> float:
    if g.has_integer_weights():
        return DEFAULT_TOLERANCES.structure_exact
    return DEFAULT_TOLERANCES.structure_float


def _fingerprints(g: Graph, dist: np.ndarray, digits: int = 9) -> list:
    deg = g.degrees
    out = []
    for v in range(g.n):
        nbrs = sorted(
            (round(dist[u], digits), round(deg[u], digits), round(g.weights[v, u], digits))
            for u in g.neighbors(v)
        )
        out.append((round(dist[v], digits), round(deg[v], digits), tuple(nbrs)))
    return out


def circulant_ordering(block: np.ndarray, labels: Sequence[int], tol: float) -> Optional[list]:
    """Order ``labels`` so that ``block`` (indexed like ``labels``) is circulant.

    The first node is fixed to the lowest label. Each choice of second node
    fixes a rotation step, and the remaining nodes are placed greedily
    (lowest label among those matching every placed node). Returns None if
    no choice of second node yields a circulant block.
    """
    k = len(labels)
    if k <= 2:
        return list(labels) if is_circulant(block, tol) else None
    pos = {lab: i for i, lab in enumerate(labels)}
    start = min(labels)
    for second in sorted(lab for lab in labels if lab != start):
        order = [start, second]
        first_row = [block[pos[start], pos[start]], block[pos[start], pos[second]]]
        used = {start, second}
        ok = True
        while len(order) < k:
            step = len(order)
            pick = None
            for cand in sorted(lab for lab in labels if lab not in used):
                c = pos[cand]
                # placed node m sits (step - m) positions before the candidate
                if all(
                    abs(block[pos[order[m]], c] - first_row[step - m]) <= tol
                    for m in range(1, step)
                ):
                    pick = cand
                    break
            if pick is None:
                ok = False
                break
            order.append(pick)
            used.add(pick)
            first_row.append(block[pos[start], pos[pick]])
        if ok:
            idx = [pos[lab] for lab in order]
            if is_circulant(block[np.ix_(idx, idx)], tol):
                return order
    return None


def _try_tail(lap: np.ndarray, dist: np.ndarray, members: list, tol: float) -> list:
    """Valid tails contained in ``members``, each as a circulant ordering."""
    if len(members) < 2:
        return []
    n = lap.shape[0]
    idx = np.array(members)
    if np.ptp(dist[idx]) > tol:
        return []
    outside = np.setdiff1d(np.arange(n), idx)
    cross = lap[np.ix_(outside, idx)]
    if not is_constant_by_row(cross, tol):
        # split by the columns seen from outside and retry each part
        parts = defaultdict(list)
        for j, v in enumerate(members):
            key = tuple(np.round(cross[:, j] / max(tol, 1e-15)).astype(np.int64))
            parts[key].append(v)
        if len(parts) == 1:
            return []
        found = []
        for part in parts.values():
            found.extend(_try_tail(lap, dist, part, tol))
        return found
    order = circulant_ordering(lap[np.ix_(idx, idx)], members, tol)
    return [order] if order is not None else []


def find_block_structure(g: Graph, uc: int, tol: Optional[float] = None, distance_kind: str = "squared_geodesic") -> BlockPartition:
    """Detect symmetric tails for center ``uc``.

    Candidates are nodes sharing a fingerprint (distance to ``uc``, degree,
    multiset of neighbor distance/degree/weight). A candidate failing the
    constant-cross-row test is split by its cross columns and retried. The
    largest valid tail is accepted (ties go to the lowest minimum label)
    and the search repeats on the remaining nodes; every condition is
    checked against the whole graph, not just the remaining block.
    """
    p = distance_matrix(g, uc, distance_kind)
    lap = normalized_laplacian(g)
    dist = p.entries
    if tol is None:
        tol = _structure_tol(g)
    fps = _fingerprints(g, dist)
    remaining = set(range(g.n))
    tails = []
    while True:
        classes = defaultdict(list)
        for v in sorted(remaining):
            classes[fps[v]].append(v)
        valid = []
        for members in classes.values():
            if len(members) >= 2:
                valid.extend(_try_tail(lap, dist, members, tol))
        if not valid:
            break
        best = min(valid, key=lambda t: (-len(t), min(t)))
        tails.append(tuple(best))
        remaining -= set(best)
    free = sorted(remaining, key=lambda v: (dist[v], v))
    tails.sort(key=lambda t: (dist[t[0]], min(t)))
    groups = tuple((v,) for v in free) + tuple(tails)
    ordering = tuple(v for grp in groups for v in grp)
    return BlockPartition(ordering, groups)


def reordered(m: np.ndarray, partition: BlockPartition) -> np.ndarray:
    idx = list(partition.ordering)
    return np.asarray(m)[np.ix_(idx, idx)]


def check_block_form(m: np.ndarray, partition: BlockPartition, tol: float = 1e-12) -> bool:
    """Every tail block circulant and every row outside it constant on it."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    for tail in partition.tails:
        idx = list(tail)
        outside = np.setdiff1d(np.arange(n), idx)
        if not is_circulant(m[np.ix_(idx, idx)], tol):
            return False
        if not is_constant_by_row(m[np.ix_(outside, idx)], tol):
            return False
    return True


def lifted_eigenvectors(m: np.ndarray, tail: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of the tail block orthogonal to ones, lifted to full size.

    Returns ``(eigenvalues, vectors)`` where ``vectors`` is ``n x (k-1)``
    and zero off the tail.
    """
    m = np.asarray(m, dtype=float)
    idx = list(tail)
    k = len(idx)
    d = m[np.ix_(idx, idx)]
    # orthonormal basis of the complement of the ones vector
    q, _ = np.linalg.qr(np.column_stack([np.ones(k), np.eye(k)[:, : k - 1]]))
    comp = q[:, 1:]
    basis = sym_eig(comp.T @ d @ comp)
    local = comp @ basis.eigenvectors
    lifted = np.zeros((m.shape[0], k - 1))
    lifted[idx, :] = local
    return basis.eigenvalues, lifted


def verify_property1(
    g: Graph,
    uc: int,
    partition: BlockPartition,
    alphas: Iterable[float],
    tol: float = 1e-8,
    distance_kind: str = "squared_geodesic",
) -> bool:
    """Check the minimizing eigenvector of ``M(alpha)`` is constant on every tail.

    With a degenerate smallest eigenvalue the check passes if some unit
    vector of the eigenspace is group-constant.
    """
    p = distance_matrix(g, uc, distance_kind)
    lap = normalized_laplacian(g)
    tails = partition.tails
    if not tails:
        return True
    e = partition.expansion_matrix() / np.sqrt(partition.sizes)
    for alpha in alphas:
        basis = sym_eig(m_alpha(p, lap, alpha).matrix)
        w = basis.eigenvalues
        space = basis.eigenvectors[:, w - w[0] < DEFAULT_TOLERANCES.degeneracy]
        if space.shape[1] == 1:
            x = space[:, 0]
            if any(np.ptp(x[list(t)]) > tol for t in tails):
                return False
        else:
            sigma = np.linalg.svd(space.T @ e, compute_uv=False)
            if 1.0 - sigma.max() > tol:
                return False
    return True


def expand_signal(r: ReducedSignal, tol: float = DEFAULT_TOLERANCES.norm) -> np.ndarray:
    """Full signal, in original node order, with each group's value replicated."""
    coords = np.asarray(r.coords, dtype=float)
    part = r.partition
    if coords.shape != (part.reduced_dim,):
        raise InvalidArgumentError(f"expected {part.reduced_dim} coordinates, got shape {coords.shape}")
    norm2 = float(np.dot(part.sizes, coords * coords))
    if abs(norm2 - 1.0) > tol:
        raise InvalidArgumentError(f"expanded signal would have squared norm {norm2!r}, not 1")
    return part.expansion_matrix() @ coords


def restrict_signal(x: np.ndarray, partition: BlockPartition) -> ReducedSignal:
    """Inverse of :func:`expand_signal` on group-constant signals."""
    x = np.asarray(x, dtype=float)
    coords = np.array([x[grp[0]] for grp in partition.groups])
    return ReducedSignal(coords, partition)


def angle_count(step: float) -> int:
    if not step > 0:
        raise InvalidArgumentError(f"step must be positive, got {step}")
    return math.ceil(2 * math.pi / step - 1e-9)


def sphere_coords(dim: int, step: float) -> np.ndarray:
    """Unit vectors of ``R^dim`` from a sweep of ``dim - 1`` spherical angles.

    Each angle runs over ``[0, 2 pi)`` in increments of ``step``; rows are
    in lexicographic order of the angle indices.
    """
    if dim < 1:
        raise InvalidArgumentError("dimension must be at least 1")
    if dim == 1:
        angle_count(step)
        return np.ones((1, 1))
    t = np.arange(angle_count(step)) * step
    grids = np.meshgrid(*([t] * (dim - 1)), indexing="ij")
    angles = np.stack([gr.ravel() for gr in grids], axis=1)
    out = np.empty((angles.shape[0], dim))
    sin_prod = np.ones(angles.shape[0])
    for i in range(dim - 1):
        out[:, i] = sin_prod * np.cos(angles[:, i])
        sin_prod = sin_prod * np.sin(angles[:, i])
    out[:, -1] = sin_prod
    return out


def grid_coords(partition: BlockPartition, step: float, max_points: int = 10_000_000) -> np.ndarray:
    """Reduced coordinates of the grid, scaled so each expansion is unit norm."""
    m = partition.reduced_dim
    count = angle_count(step) ** (m - 1)
    if count > max_points:
        raise InvalidArgumentError(
            f"grid would have {count} points (reduced dimension {m}); raise step or max_points"
        )
    return sphere_coords(m, step) / np.sqrt(partition.sizes)


def hypersphere_grid(partition: BlockPartition, step: float) -> Iterator[ReducedSignal]:
    for row in grid_coords(partition, step):
        yield ReducedSignal(row, partition)


@dataclass(frozen=True, eq=False)
class SampleCloud:
    s: np.ndarray
    g: np.ndarray
    signals: np.ndarray
    step: float

    def __len__(self):
        return self.s.shape[0]

    @property
    def points(self) -> list:
        return [SpreadPoint(float(a), float(b), x) for a, b, x in zip(self.s, self.g, self.signals)]


def sample_cloud(g: Graph, uc: int, partition: BlockPartition, step: float, distance_kind: str = "squared_geodesic") -> SampleCloud:
    p = distance_matrix(g, uc, distance_kind)
    lap = normalized_laplacian(g)
    coords = grid_coords(partition, step)
    signals = coords @ partition.expansion_matrix().T
    s, gs = spreads(signals, p, lap)
    return SampleCloud(s, gs, signals, step)


def pareto_indices(s: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Indices of nondominated (lower-left) points, ascending in ``s``."""
    s = np.asarray(s, dtype=float)
    g = np.asarray(g, dtype=float)
    order = np.lexsort((g, s))
    keep = []
    best = math.inf
    for i in order:
        if g[i] < best:
            keep.append(i)
            best = g[i]
    return np.array(keep, dtype=int)


def pareto_frontier(cloud) -> list:
    """Nondominated points of a SampleCloud or a sequence of SpreadPoints."""
    if isinstance(cloud, SampleCloud):
        if len(cloud) == 0:
            raise InvalidArgumentError("empty cloud")
        idx = pareto_indices(cloud.s, cloud.g)
        return [SpreadPoint(float(cloud.s[i]), float(cloud.g[i]), cloud.signals[i]) for i in idx]
    pts = list(cloud)
    if not pts:
        raise InvalidArgumentError("empty cloud")
    idx = pareto_indices([pt.s for pt in pts], [pt.g for pt in pts])
    return [pts[i] for i in idx]
