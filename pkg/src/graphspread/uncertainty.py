"""Uncertainty curves traced by supporting lines of the spread region.

For a slope ``alpha`` the smallest eigenpair ``(q, x)`` of
``M(alpha) = P - alpha L`` gives the line ``g = alpha s + q`` that touches
the set of achievable (spectral spread, graph spread) pairs at
``(x^T L x, x^T P x)``. The sandwich loop keeps the chords between known
points as an upper bound and the supporting lines as a lower bound, and
refines the segment where the two are furthest apart.
"""

import heapq
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import ConvergenceError, DomainError, InvalidArgumentError
from .graph_core import DistanceDiagonal, Graph, distance_matrix, normalized_laplacian
from .spectral import _diag_entries, sym_eig

MAX_REFINEMENTS = 10_000
DUPLICATE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class SlopeMatrix:
    alpha: float
    matrix: np.ndarray


class MinEigenpair(NamedTuple):
    q: float
    x: np.ndarray
    degenerate: bool
    gap: float


@dataclass(frozen=True, eq=False)
class SpreadPoint:
    """A (spectral spread, graph spread) pair.

    ``alpha`` and ``q`` describe the supporting line ``g = alpha s + q``
    through the point; ``alpha = -inf`` marks the vertical line ``s >= s``
    at the left end of a curve.
    """

    s: float
    g: float
    signal: Optional[np.ndarray] = None
    alpha: Optional[float] = None
    q: Optional[float] = None
    degenerate: bool = False

    def line_at(self, s):
        if self.alpha is None or self.q is None or math.isinf(self.alpha):
            return np.full(np.shape(s), -np.inf)
        return self.alpha * np.asarray(s, dtype=float) + self.q


def m_alpha(p, laplacian: np.ndarray, alpha: float) -> SlopeMatrix:
    """``P - alpha L`` for the diagonal distance matrix ``P``."""
    d = _diag_entries(p)
    laplacian = np.asarray(laplacian, dtype=float)
    if laplacian.shape != (d.size, d.size):
        raise InvalidArgumentError(
            f"distances of size {d.size} do not match Laplacian of shape {laplacian.shape}"
        )
    alpha = float(alpha)
    m = np.diag(d) - alpha * laplacian if alpha != 0 else np.diag(d)
    return SlopeMatrix(alpha, m)


def min_eigpair(m, degeneracy_tol: float = DEFAULT_TOLERANCES.degeneracy) -> MinEigenpair:
    """Smallest eigenvalue and its unit eigenvector.

    ``degenerate`` is set when the second eigenvalue lies within
    ``degeneracy_tol`` of the first.
    """
    mat = m.matrix if isinstance(m, SlopeMatrix) else m
    basis = sym_eig(mat)
    w = basis.eigenvalues
    gap = float(w[1] - w[0]) if w.size > 1 else math.inf
    return MinEigenpair(float(w[0]), basis.eigenvectors[:, 0].copy(), gap < degeneracy_tol, gap)


def curve_point(p, laplacian: np.ndarray, alpha: float) -> SpreadPoint:
    """The point where the supporting line of slope ``alpha`` touches."""
    sm = m_alpha(p, laplacian, alpha)
    _, x, degenerate, _ = min_eigpair(sm)
    d = _diag_entries(p)
    s = float(x @ laplacian @ x)
    g = float(np.dot(d, x * x))
    # Intercept from the Rayleigh quotient of x rather than the eigenvalue:
    # at |alpha| ~ 1e8 the eigenvalue's rounding error times alpha exceeds
    # 1e-9 and the line would miss its own point.
    q = g - sm.alpha * s
    return SpreadPoint(s, g, x, sm.alpha, q, degenerate)


def curve_endpoints(p, laplacian: np.ndarray, uc: Optional[int] = None) -> tuple[SpreadPoint, SpreadPoint]:
    """Both ends of the curve on ``0 <= s <= 1``.

    Left: the first Laplacian eigenvector, ``s = 0``. Right: the delta at
    ``uc``, which has ``g = 0`` and ``s = L[uc, uc] = 1``.
    """
    d = _diag_entries(p)
    if uc is None:
        uc = getattr(p, "uc", None)
        if uc is None:
            uc = int(np.flatnonzero(d == 0)[0])
    basis = sym_eig(laplacian)
    chi1 = basis.eigenvectors[:, 0].copy()
    s_left = float(chi1 @ laplacian @ chi1)
    # lambda_1 = 0 on a connected graph; drop the rounding residue
    if abs(s_left) <= DEFAULT_TOLERANCES.norm:
        s_left = 0.0
    left = SpreadPoint(s_left, float(np.dot(d, chi1 * chi1)), chi1, -math.inf, None)
    delta = np.zeros(d.size)
    delta[uc] = 1.0
    right = SpreadPoint(float(laplacian[uc, uc]), float(d[uc]), delta, 0.0, float(d[uc]))
    return left, right


@dataclass(eq=False)
class _Segment:
    left: SpreadPoint
    right: SpreadPoint
    extra: list = field(default_factory=list)
    closed: bool = False
    alive: bool = True
    gap: float = 0.0

    def compute_gap(self) -> float:
        s1, g1, s2, g2 = self.left.s, self.left.g, self.right.s, self.right.g
        if s2 - s1 <= 0:
            self.gap = max(0.0, g1 - g2) if s2 == s1 else 0.0
            return self.gap
        lines = [(pt.alpha, pt.q) for pt in (self.left, self.right) if _finite_line(pt)]
        lines += self.extra
        # candidate abscissae: segment ends and pairwise line crossings
        xs = [s1, s2]
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                a1, q1 = lines[i]
                a2, q2 = lines[j]
                if a1 != a2:
                    x = (q2 - q1) / (a1 - a2)
                    if s1 < x < s2:
                        xs.append(x)
        xs = np.array(xs)
        chord = g1 + (g2 - g1) * (xs - s1) / (s2 - s1)
        if lines:
            env = np.max([a * xs + q for a, q in lines], axis=0)
        else:
            env = np.full_like(xs, -np.inf)
        self.gap = float(max(0.0, np.max(chord - env)))
        return self.gap


def _finite_line(pt: SpreadPoint) -> bool:
    return pt.alpha is not None and pt.q is not None and not math.isinf(pt.alpha)


@dataclass(frozen=True, eq=False)
class UncertaintyCurve:
    """Sandwich approximation of an uncertainty curve.

    ``upper`` is the chord interpolation of ``points`` and ``lower`` the
    upper envelope of supporting lines; ``gap`` bounds their vertical
    distance. ``segment_gaps[i]`` is the gap between points ``i`` and
    ``i + 1``.
    """

    points: tuple
    segment_gaps: np.ndarray
    gap: float
    gap_history: tuple = ()
    extra_lines: tuple = ()

    @property
    def s(self) -> np.ndarray:
        return np.array([pt.s for pt in self.points])

    @property
    def g(self) -> np.ndarray:
        return np.array([pt.g for pt in self.points])

    @property
    def s_range(self) -> tuple[float, float]:
        return self.points[0].s, self.points[-1].s

    def _check_domain(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        lo, hi = self.s_range
        if np.any(s < lo) or np.any(s > hi) or np.any(np.isnan(s)):
            raise DomainError(f"abscissa outside the curve range [{lo!r}, {hi!r}]")
        return s

    def upper(self, s):
        s = self._check_domain(s)
        return np.interp(s, self.s, self.g)

    def lower(self, s):
        s = self._check_domain(s)
        xs, gs = self.s, self.g
        upper = np.interp(s, xs, gs)
        k = np.clip(np.searchsorted(xs, s, side="right") - 1, 0, len(xs) - 2)
        a = np.array([pt.alpha if _finite_line(pt) else -np.inf for pt in self.points])
        q = np.array([pt.q if _finite_line(pt) else 0.0 for pt in self.points])
        with np.errstate(invalid="ignore"):
            t_left = np.where(np.isinf(a[k]), -np.inf, a[k] * s + q[k])
            t_right = np.where(np.isinf(a[k + 1]), -np.inf, a[k + 1] * s + q[k + 1])
        env = np.maximum(t_left, t_right)
        for ae, qe in self.extra_lines:
            env = np.maximum(env, ae * s + qe)
        out = np.minimum(env, upper)
        # known curve points are exact
        hit = np.searchsorted(xs, s)
        hit = np.clip(hit, 0, len(xs) - 1)
        exact = xs[hit] == s
        return np.where(exact, gs[hit], out)

    def supporting_lines(self) -> np.ndarray:
        """``(alpha, q)`` rows of every finite supporting line."""
        lines = [(pt.alpha, pt.q) for pt in self.points if _finite_line(pt)] + list(self.extra_lines)
        return np.array(lines, dtype=float).reshape(-1, 2)

    def global_lower_bound(self, s) -> np.ndarray:
        """Max over every supporting line at any abscissa, inside the range or not."""
        s = np.asarray(s, dtype=float)
        a, q = _upper_envelope(self.supporting_lines())
        if a.size == 1:
            return a[0] * s + q[0]
        # line j wins on [cross[j-1], cross[j]]
        cross = (q[:-1] - q[1:]) / (a[1:] - a[:-1])
        j = np.searchsorted(cross, s)
        return a[j] * s + q[j]

    def slopes(self) -> np.ndarray:
        return np.diff(self.g) / np.diff(self.s)


def _upper_envelope(lines: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lines that attain ``max_j (a_j s + q_j)`` somewhere, by increasing slope."""
    order = np.lexsort((lines[:, 1], lines[:, 0]))
    a_keep, q_keep = [], []
    for a, q in lines[order]:
        # equal slopes: the later one has the larger intercept
        if a_keep and a_keep[-1] == a:
            a_keep.pop()
            q_keep.pop()
        while len(a_keep) >= 2:
            a1, q1, a2, q2 = a_keep[-2], q_keep[-2], a_keep[-1], q_keep[-1]
            # middle line is never on top if the outer two cross above it
            if (q1 - q2) * (a - a1) >= (q1 - q) * (a2 - a1):
                a_keep.pop()
                q_keep.pop()
            else:
                break
        a_keep.append(a)
        q_keep.append(q)
    return np.array(a_keep), np.array(q_keep)


def curve_eval(curve: UncertaintyCurve, s: float) -> tuple[float, float]:
    """``(lower, upper)`` bounds of the curve at abscissa ``s``."""
    lo = float(curve.lower(s))
    hi = float(curve.upper(s))
    return min(lo, hi), hi


def _near(a: SpreadPoint, b: SpreadPoint, eps: float) -> bool:
    return abs(a.s - b.s) <= eps and abs(a.g - b.g) <= eps


def _assemble(segments: list, left: SpreadPoint, history: list, extra: list) -> UncertaintyCurve:
    by_left = {id(seg.left): seg for seg in segments if seg.alive}
    pts = [left]
    gaps = []
    cur = left
    while id(cur) in by_left:
        seg = by_left[id(cur)]
        gaps.append(seg.gap)
        cur = seg.right
        pts.append(cur)
    gaps = np.array(gaps)
    return UncertaintyCurve(
        tuple(pts), gaps, float(gaps.max()) if gaps.size else 0.0, tuple(history), tuple(extra)
    )


def sandwich_curve(
    p,
    laplacian: np.ndarray,
    uc: Optional[int] = None,
    tol: float = 1e-6,
    max_refinements: int = MAX_REFINEMENTS,
) -> UncertaintyCurve:
    """Approximate the uncertainty curve until the bound gap is at most ``tol``.

    The segment with the largest gap is refined first, using its chord slope
    as the next ``alpha``. A new point that coincides with an end of its
    segment means the chord is itself a supporting line, and that segment is
    closed.

    Raises:
        InvalidArgumentError: ``tol <= 0``.
        ConvergenceError: more than ``max_refinements`` refinements; the
            partial curve is attached as ``exc.partial``.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    left, right = curve_endpoints(p, laplacian, uc)
    first = _Segment(left, right)
    first.compute_gap()
    segments = [first]
    extra_lines = []
    heap = [(-first.gap, 0, first)] if first.gap > tol else []
    counter = 1
    # largest gap among segments that never enter the heap
    settled = 0.0 if heap else first.gap
    history = [first.gap]
    refinements = 0

    while heap:
        _, _, seg = heapq.heappop(heap)
        if refinements >= max_refinements:
            heapq.heappush(heap, (-seg.gap, counter, seg))
            partial = _assemble(segments, left, history, extra_lines)
            raise ConvergenceError(
                f"gap {partial.gap:.3e} still above tol {tol:.3e} after {refinements} refinements",
                partial=partial,
            )
        refinements += 1
        a, b = seg.left, seg.right
        alpha = (b.g - a.g) / (b.s - a.s)
        pt = curve_point(p, laplacian, alpha)
        line = (pt.alpha, pt.q)
        inside = a.s < pt.s < b.s
        if _near(pt, a, DUPLICATE_EPS) or _near(pt, b, DUPLICATE_EPS) or not inside:
            # the chord slope supports the curve at an end: linear piece
            seg.extra.append(line)
            extra_lines.append(line)
            seg.compute_gap()
            seg.closed = True
            if seg.gap > tol:
                partial = _assemble(segments, left, history, extra_lines)
                raise ConvergenceError(
                    f"closed segment keeps gap {seg.gap:.3e} > tol {tol:.3e}", partial=partial
                )
            settled = max(settled, seg.gap)
        else:
            seg.alive = False
            for part in (_Segment(a, pt), _Segment(pt, b)):
                part.compute_gap()
                segments.append(part)
                if part.gap > tol:
                    heapq.heappush(heap, (-part.gap, counter, part))
                    counter += 1
                else:
                    settled = max(settled, part.gap)
        history.append(max(settled, -heap[0][0] if heap else 0.0))

    return _assemble(segments, left, history, extra_lines)


def uncertainty_curve(g: Graph, uc: int, tol: float = 1e-6, distance_kind: str = "squared_geodesic") -> UncertaintyCurve:
    """Convenience wrapper building ``P`` and ``L`` from a graph."""
    p = distance_matrix(g, uc, distance_kind)
    return sandwich_curve(p, normalized_laplacian(g), uc, tol)
