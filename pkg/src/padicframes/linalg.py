"""Dense Hermitian eigensolver and the spectral helpers built on it.

The eigensolver is a cyclic Jacobi method. Sweeps visit all index pairs in a
round-robin order, so the ``n // 2`` rotations of each round touch disjoint
rows and columns and are applied together as vectorized numpy updates.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceFailure, NotHermitian

HERMITIAN_TOL = 1e-10
RANK_TOL = 1e-10
SWEEP_BUDGET = 100
OFF_DIAGONAL_TOL = 1e-13


def as_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate that ``M`` is Hermitian (entrywise, relative to its largest entry) and symmetrize it."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {M.shape}")
    if M.size:
        scale = max(1.0, float(np.abs(M).max()))
        err = float(np.abs(M - M.conj().T).max())
        if err > tol * scale:
            raise NotHermitian(f"matrix is not Hermitian (max |M - M^H| = {err:.3g})")
    return (M + M.conj().T) / 2


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0)
    return float(np.linalg.norm(off))


def hermitian_eigensystem(M, sweeps: int = SWEEP_BUDGET, tol: float = OFF_DIAGONAL_TOL):
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.

    Returns ``(w, V)`` with ``M @ V = V @ diag(w)``. Each eigenvector is
    scaled so that its first largest-magnitude entry is real and positive.
    Ties in ``w`` are broken by the eigenvectors' real parts, read
    lexicographically. Raises :class:`ConvergenceFailure` if the
    off-diagonal mass is not below ``tol * ||M||_F`` after ``sweeps`` sweeps.
    """
    A = as_hermitian(M).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    if n == 0:
        return np.zeros(0), V
    fro = float(np.linalg.norm(A))
    if n > 1 and fro > 0:
        rounds = _round_robin(n)
        target = tol * fro
        for _ in range(sweeps):
            if _off(A) <= target:
                break
            for P, Q in rounds:
                apq = A[P, Q]
                r = np.abs(apq)
                live = r > 0
                if not live.any():
                    continue
                app = A[P, P].real
                aqq = A[Q, Q].real
                w = np.where(live, apq / np.where(live, r, 1.0), 1.0)
                theta = 0.5 * np.arctan2(2 * r, aqq - app)
                # the small-angle solution keeps nearly diagonal pairs in place
                theta = np.where(theta > np.pi / 4, theta - np.pi / 2, theta)
                c = np.cos(theta)
                s = np.sin(theta)
                wc = w.conj()
                q11, q12, q21, q22 = c, s, -s * wc, c * wc
                # A <- A Q, V <- V Q
                for X in (A, V):
                    Xp = X[:, P].copy()
                    Xq = X[:, Q]
                    X[:, P] = Xp * q11 + Xq * q21
                    X[:, Q] = Xp * q12 + Xq * q22
                # A <- Q^H A
                Ap = A[P, :].copy()
                Aq = A[Q, :]
                A[P, :] = Ap * q11.conj()[:, None] + Aq * q21.conj()[:, None]
                A[Q, :] = Ap * q12.conj()[:, None] + Aq * q22.conj()[:, None]
                A[P, Q] = 0
                A[Q, P] = 0
        else:
            if _off(A) > target:
                raise ConvergenceFailure(f"Jacobi did not converge in {sweeps} sweeps")
    w = np.diag(A).real.copy()
    # fix the phase freedom of each eigenvector
    lead = np.argmax(np.abs(V) > np.abs(V).max(axis=0) * (1 - 1e-12), axis=0)
    phase = V[lead, np.arange(n)]
    V = V * (np.abs(phase) / np.where(phase == 0, 1, phase))
    keys = tuple(V.real[::-1]) + (w,)
    order = np.lexsort(keys)
    return w[order], V[:, order]


def eigenvalues(M) -> np.ndarray:
    return hermitian_eigensystem(M)[0]


def singular_values(M) -> np.ndarray:
    """Singular values in descending order, via the smaller Gram matrix of ``M``."""
    M = np.asarray(M, dtype=complex)
    G = M.conj().T @ M if M.shape[1] <= M.shape[0] else M @ M.conj().T
    w = eigenvalues(G)
    return np.sqrt(np.clip(w, 0, None))[::-1]


def operator_norm(M) -> float:
    sv = singular_values(M)
    return float(sv[0]) if sv.size else 0.0


def numerical_rank(M, rtol: float = RANK_TOL) -> int:
    sv = singular_values(M)
    if not sv.size or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def pseudo_inverse_norm(M, rtol: float = RANK_TOL) -> float:
    """``||M^+||``: reciprocal of the smallest singular value above ``rtol * sigma_max``."""
    sv = singular_values(M)
    if not sv.size or sv[0] == 0:
        return 0.0
    kept = sv[sv > rtol * sv[0]]
    return float(1.0 / kept[-1])


def hermitian_function(M, fn, rtol: float | None = None) -> np.ndarray:
    """``V diag(fn(w)) V^H``; eigenvalues at or below ``rtol * max|w|`` are mapped to 0 when ``rtol`` is given."""
    w, V = hermitian_eigensystem(M)
    if rtol is None:
        fw = fn(w)
    else:
        scale = np.abs(w).max() if w.size else 0.0
        keep = w > rtol * scale
        fw = np.zeros_like(w)
        fw[keep] = fn(w[keep])
    return (V * fw) @ V.conj().T


def hermitian_inverse(M) -> np.ndarray:
    return hermitian_function(M, lambda w: 1.0 / w)
