"""Dense symmetric eigensolver, graph Fourier transform and the two spreads.

The eigensolver is a cyclic Jacobi method. It is slower than LAPACK but
deterministic, and every eigenpair it returns can be checked against its
residual ``||m v - lambda v||``.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InvalidArgumentError, InvalidMatrixError, SolverError

MAX_SWEEPS = 60


@dataclass(frozen=True)
class EigenBasis:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def residuals(self, m: np.ndarray) -> np.ndarray:
        """Per-pair residual norms ``||m chi_i - lambda_i chi_i||``."""
        r = m @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return np.linalg.norm(r, axis=0)


def _check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMatrixError(f"expected a square matrix, got shape {m.shape}")
    return m


def symmetrize(m: np.ndarray, tol: float = DEFAULT_TOLERANCES.symmetry) -> np.ndarray:
    """Return ``(m + m.T) / 2`` after checking ``m`` is symmetric within ``tol``.

    The tolerance is relative to ``max(1, max|m|)``.
    """
    m = _check_square(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > tol * scale:
        raise InvalidMatrixError(f"matrix is not symmetric (max |m - m.T| = {asym:.3e})")
    return 0.5 * (m + m.T)


def fix_signs(vectors: np.ndarray, tie_tol: float = 1e-12) -> np.ndarray:
    """Flip columns so that their largest-magnitude entry is nonnegative.

    Entries within ``tie_tol`` of the column maximum count as tied and the
    lowest index among them decides, so the choice does not hinge on
    rounding noise.
    """
    out = np.array(vectors, dtype=float, copy=True)
    mags = np.abs(out)
    for j in range(out.shape[1]):
        col = mags[:, j]
        i = int(np.flatnonzero(col >= col.max() - tie_tol)[0])
        if out[i, j] < 0:
            out[:, j] = -out[:, j]
    return out


@njit(cache=True)
def _jacobi_kernel(a, v, max_sweeps):
    """In-place cyclic Jacobi on ``a``; accumulates rotations into ``v``.

    Returns the number of sweeps used, or -1 without convergence.
    """
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    scale = np.sqrt(scale)
    if scale == 0.0:
        return 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        off = np.sqrt(2.0 * off)
        if off <= 1e-17 * scale:
            return sweep
        if sweep == max_sweeps:
            break
        # skip negligible entries during the first sweeps
        thresh = 0.2 * off / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                app = a[p, p]
                aqq = a[q, q]
                big = 100.0 * abs(apq)
                # entry below the precision of both diagonal entries
                if sweep > 3 and abs(app) + big == abs(app) and abs(aqq) + big == abs(aqq):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if apq == 0.0 or abs(apq) <= thresh:
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return -1


def _jacobi(a: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.ascontiguousarray(a, dtype=np.float64)
    v = np.eye(a.shape[0])
    sweeps = _jacobi_kernel(a, v, max_sweeps)
    if sweeps < 0:
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        raise SolverError(
            f"Jacobi iteration did not converge after {max_sweeps} sweeps "
            f"(off-diagonal norm {off:.3e})",
            iterations=max_sweeps,
        )
    return a.diagonal().copy(), v


def sym_eig(
    m: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    max_sweeps: int = MAX_SWEEPS,
) -> EigenBasis:
    """Eigendecomposition of a real symmetric matrix.

    Args:
        m: square matrix, symmetric within ``tolerances.symmetry``.
        tolerances: tolerance set; only ``symmetry`` is used here.
        max_sweeps: cap on full Jacobi sweeps before giving up.

    Returns:
        EigenBasis with ascending eigenvalues. Each eigenvector has its
        largest-magnitude component nonnegative.

    Raises:
        InvalidMatrixError: ``m`` is not square or not symmetric.
        SolverError: no convergence within ``max_sweeps``.
    """
    a = symmetrize(m, tolerances.symmetry).copy()
    w, v = _jacobi(a, max_sweeps)
    order = np.argsort(w, kind="stable")
    return EigenBasis(w[order], fix_signs(v[:, order]))


def gft(x: np.ndarray, basis: EigenBasis) -> np.ndarray:
    """Graph Fourier transform: coefficients of ``x`` in ``basis``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise InvalidArgumentError(f"signal of shape {x.shape} does not match basis of size {basis.n}")
    return basis.eigenvectors.T @ x


def igft(xhat: np.ndarray, basis: EigenBasis) -> np.ndarray:
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape != (basis.n,):
        raise InvalidArgumentError(f"coefficients of shape {xhat.shape} do not match basis of size {basis.n}")
    return basis.eigenvectors @ xhat


def normalize(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise InvalidArgumentError("cannot normalize the zero vector")
    return x / nrm


def check_unit(x: np.ndarray, tol: float = DEFAULT_TOLERANCES.norm) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidArgumentError("a signal must be a 1-d vector")
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise InvalidArgumentError(f"signal is not unit norm (norm = {np.linalg.norm(x)!r})")
    return x


def _diag_entries(p) -> np.ndarray:
    entries = getattr(p, "entries", p)
    entries = np.asarray(entries, dtype=float)
    if entries.ndim == 2:
        entries = np.diag(entries)
    return entries


def graph_spread(x: np.ndarray, p) -> float:
    """``x^T P x`` for the diagonal distance matrix ``P``.

    ``p`` may be a DistanceDiagonal, its entries, or the full diagonal matrix.
    """
    x = check_unit(x)
    d = _diag_entries(p)
    if d.shape != x.shape:
        raise InvalidArgumentError(f"signal of size {x.size} does not match distances of size {d.size}")
    return float(np.dot(d, x * x))


def spectral_spread(x: np.ndarray, laplacian: np.ndarray) -> float:
    """``x^T L x``; equals the eigenvalue-weighted energy of ``gft(x)``."""
    x = check_unit(x)
    laplacian = np.asarray(laplacian, dtype=float)
    if laplacian.shape != (x.size, x.size):
        raise InvalidArgumentError(f"signal of size {x.size} does not match Laplacian of shape {laplacian.shape}")
    return float(x @ laplacian @ x)


def spreads(signals: np.ndarray, p, laplacian: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (spectral, graph) spreads for the rows of ``signals``.

    No unit-norm check; callers pass normalized rows.
    """
    x = np.atleast_2d(np.asarray(signals, dtype=float))
    d = _diag_entries(p)
    s = np.einsum("ij,jk,ik->i", x, laplacian, x)
    g = (x * x) @ d
    return s, g
