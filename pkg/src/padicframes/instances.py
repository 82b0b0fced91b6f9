"""Seeded random families and operators for the theorem checks."""

from __future__ import annotations

import math

import numpy as np

from .frames import canonical_dual, frame_bounds, frame_operator
from .linalg import hermitian_function

DEFAULT_SEED = 0xC0FFEE


def complex_normal(rng, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_frame(rng, d: int, n: int | None = None) -> np.ndarray:
    """A generic (almost surely) frame of ``n >= d`` vectors in ``C^d``."""
    if n is None:
        n = d + int(rng.integers(0, 2 * d + 1))
    return complex_normal(rng, n, d)


def random_family(rng, d: int, n: int, rank: int | None = None) -> np.ndarray:
    """``n`` vectors in ``C^d`` spanning a random subspace of dimension ``rank``."""
    if rank is None or rank >= min(n, d):
        return complex_normal(rng, n, d)
    return complex_normal(rng, n, rank) @ complex_normal(rng, rank, d)


def tight_frame(rng, d: int, n: int, bound: float = 1.0) -> np.ndarray:
    """Rows ``sqrt(bound) S^-1/2 f_i`` of a random frame: frame operator ``bound * I``."""
    F = random_frame(rng, d, n)
    root = hermitian_function(frame_operator(F), lambda w: 1 / np.sqrt(w))
    return math.sqrt(bound) * F @ root.T


def duplicated_onb(d: int, copies: int = 2) -> np.ndarray:
    return np.vstack([np.eye(d, dtype=complex)] * copies)


def random_unitary(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_normal(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_projection(rng, d: int, rank: int) -> np.ndarray:
    q = random_unitary(rng, d)[:, :rank]
    return q @ q.conj().T


def random_operator(rng, d: int, rank: int | None = None) -> np.ndarray:
    if rank is None or rank >= d:
        return complex_normal(rng, d, d)
    return complex_normal(rng, d, rank) @ complex_normal(rng, rank, d)


def alternate_dual(rng, F) -> np.ndarray:
    """A dual of ``F`` other than the canonical one (when ``F`` is redundant).

    Adds ``W`` with ``F^H W = 0``, which leaves ``sum <., f_i> g_i`` unchanged.
    """
    F = np.asarray(F, dtype=complex)
    n, _ = F.shape
    Z = complex_normal(rng, *F.shape)
    P = F @ np.linalg.solve(F.conj().T @ F, F.conj().T)
    return canonical_dual(F) + (np.eye(n) - P) @ Z


def perturbation_with_bound(rng, F, C: float) -> np.ndarray:
    """A family ``G`` with ``lambda_max`` of the difference family equal to ``C``."""
    D = complex_normal(rng, *np.shape(F))
    scale = frame_bounds(D).B
    return np.asarray(F) - D * math.sqrt(C / scale)
