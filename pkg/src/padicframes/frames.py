"""Frame computations on finite-dimensional test spaces.

Everything here works in coordinates with respect to the orthonormal basis of
a :class:`TestSpace`. A family of ``n`` functions is an ``n x d`` complex
matrix ``F`` whose row ``i`` holds the coordinates of ``f_i``, i.e.
``F[i, c] = <f_i, e_c>``. With that convention

* analysis:  ``T* v = conj(F) @ v``
* synthesis: ``T c = F.T @ c``
* frame operator: ``S = F.T @ conj(F)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import FamilyNotInSpace, NotAFrame, PAdicError
from .functions import CharAtom, LCFunction, inner_product
from .linalg import RANK_TOL, as_hermitian, eigenvalues, hermitian_eigensystem
from .padic import Ball, PAdic, Prime, character, norm_at_most, reduce_mod
from .wavelets import FrameFamily

MEMBERSHIP_TOL = 1e-12


class TestSpace:
    """Functions supported on ``p**-J Z_p`` and constant on cosets of ``p**K Z_p``.

    The basis is ``e_c = p**(K/2) 1_{c + p**K Z_p}`` for the ``p**(J+K)`` coset
    representatives ``c = i * p**-J``, ``0 <= i < p**(J+K)``, in that order.
    """

    __test__ = False  # not a pytest class

    def __init__(self, p: int, J: int, K: int):
        if J + K < 0:
            raise PAdicError("test space needs J + K >= 0")
        self.p = Prime(p)
        self.J = int(J)
        self.K = int(K)

    @property
    def dim(self) -> int:
        return self.p ** (self.J + self.K)

    @property
    def support(self) -> Ball:
        return Ball(PAdic(self.p), self.J)

    def cell(self, i: int) -> Ball:
        return Ball(PAdic(self.p, i, -self.J), -self.K)

    def index_of(self, x: PAdic) -> int:
        """Index of the basis cell containing ``x`` (which must lie in the support)."""
        y = x.shift(self.J)
        if y.is_zero():
            return 0
        return (y.mantissa * self.p**y.exponent) % self.dim

    @cached_property
    def basis(self) -> list[LCFunction]:
        amp = self.p ** (self.K / 2)
        zero = PAdic(self.p)
        return [LCFunction([CharAtom(amp, zero, self.cell(i))], self.p) for i in range(self.dim)]

    def synthesize(self, v) -> LCFunction:
        """The function with coordinates ``v``."""
        amp = self.p ** (self.K / 2)
        zero = PAdic(self.p)
        atoms = [CharAtom(amp * complex(c), zero, self.cell(i)) for i, c in enumerate(v) if c != 0]
        return LCFunction(atoms, self.p)

    def __repr__(self):
        return f"TestSpace(p={self.p}, J={self.J}, K={self.K})"


def _atom_coordinates(atom: CharAtom, space: TestSpace, out: np.ndarray) -> bool:
    """Add the coordinates of ``atom``'s projection onto ``space`` into ``out``.

    Returns True when the atom by itself certainly lies in the space, False
    when membership has to be settled some other way.
    """
    p, J, K = space.p, space.J, space.K
    b = atom.support
    if b.radius_log <= J and norm_at_most(b.center, J):
        region = b
    elif b.radius_log > J and norm_at_most(b.center, b.radius_log):
        region = space.support  # the atom covers the whole support
    else:
        return False  # disjoint from the support
    covered = region is b
    s = atom.frequency
    if region.radius_log >= -K:
        if not norm_at_most(s, K):
            # the character has mean zero on every cell
            return False
        # cells inside the region are c + k * h with h = p**-radius, k < p**(radius + K)
        count = p ** (region.radius_log + K)
        h = PAdic(p, 1, -region.radius_log)
        base = space.index_of(region.center)
        step = p ** (J - region.radius_log)
        t0 = reduce_mod(s * region.center, 0).to_fraction()
        t1 = reduce_mod(s * h, 0).to_fraction()
        den = math.lcm(t0.denominator, t1.denominator)
        n0, n1 = t0.numerator * (den // t0.denominator), t1.numerator * (den // t1.denominator)
        amp = atom.amplitude * p ** (-K / 2)
        if n1 == 0:
            phases = np.full(count, character(s * region.center))
        else:
            ks = [(n0 + k * n1) % den for k in range(count)]
            phases = np.exp(2j * np.pi * (np.array(ks, dtype=float) / den))
        out[base + step * np.arange(count)] += amp * phases
        return covered
    # atom is finer than a cell
    if norm_at_most(s, -b.radius_log):
        mass = float(Fraction(p) ** b.radius_log)
        out[space.index_of(b.center)] += atom.amplitude * character(s * b.center) * mass * p ** (K / 2)
    return False


def function_coordinates(f: LCFunction, space: TestSpace) -> tuple[np.ndarray, bool]:
    """Coordinates of the orthogonal projection of ``f`` onto ``space``, and whether ``f`` lies in it.

    Membership is decided from the ball geometry when every atom sits inside
    the support at or above cell scale with a cell-constant character. Atoms
    outside the support rule membership out. Anything else (atoms finer than
    a cell, characters oscillating within a cell) is settled by comparing
    ``||f||**2`` with the energy of the projection.
    """
    if f.p != space.p:
        raise PAdicError(f"function over p={f.p} used with a space over p={space.p}")
    v = np.zeros(space.dim, dtype=complex)
    certain = True
    outside = False
    for atom in f.atoms:
        ok = _atom_coordinates(atom, space, v)
        if not ok:
            certain = False
            b = atom.support
            if not (b.radius_log <= space.J and norm_at_most(b.center, space.J)):
                outside = True
    if certain:
        return v, True
    if outside:
        return v, False
    total = inner_product(f, f).real
    return v, abs(total - float(np.vdot(v, v).real)) <= MEMBERSHIP_TOL * max(1.0, total)


def _functions_of(family):
    if isinstance(family, FrameFamily):
        return family.functions, [e.label for e in family.entries]
    functions = list(family)
    return functions, None


def coefficients(family, space: TestSpace, project: bool = False) -> np.ndarray:
    """The ``n x d`` coordinate matrix ``G[i, c] = <f_i, e_c>``.

    Members outside the space raise :class:`FamilyNotInSpace` unless
    ``project`` is set, in which case their orthogonal projections are used.
    """
    functions, labels = _functions_of(family)
    G = np.zeros((len(functions), space.dim), dtype=complex)
    bad = []
    for i, f in enumerate(functions):
        G[i], inside = function_coordinates(f, space)
        if not inside:
            bad.append(i)
    if bad and not project:
        raise FamilyNotInSpace(bad, [labels[i] for i in bad] if labels else None)
    return G


def gram_matrix(functions) -> np.ndarray:
    """``Gram[i, k] = <f_k, f_i>`` from the closed-form inner product."""
    functions = list(functions)
    n = len(functions)
    G = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for k in range(i, n):
            G[i, k] = inner_product(functions[k], functions[i])
            G[k, i] = G[i, k].conjugate()
    return G


def frame_operator(F) -> np.ndarray:
    """``S = sum_i <., f_i> f_i`` in coordinates; Hermitian positive semidefinite."""
    F = np.asarray(F, dtype=complex)
    return as_hermitian(F.T @ F.conj())


def analysis(F, v) -> np.ndarray:
    """``T* v``: the coefficients ``<g, f_i>`` of the function with coordinates ``v``."""
    return np.asarray(F).conj() @ v


def synthesis(F, c) -> np.ndarray:
    return np.asarray(F).T @ c


def _gram(F) -> np.ndarray:
    return as_hermitian(F.conj() @ F.T)


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    on_span_only: bool = False
    rank: int = 0
    dim: int = 0

    @property
    def is_frame(self) -> bool:
        return self.A > 0

    @property
    def tight(self) -> bool:
        return self.B - self.A <= 1e-9 * self.B


def frame_bounds(F, on_span_only: bool = False, rtol: float = RANK_TOL) -> FrameBounds:
    """Optimal frame bounds of the family with coordinate matrix ``F``.

    ``B`` is the largest eigenvalue of the frame operator. ``A`` is the
    smallest eigenvalue on the whole space, or, with ``on_span_only``, the
    smallest eigenvalue above ``rtol * B`` (the bound on the family's span).
    Eigenvalues at or below that threshold count as zero, so ``A > 0``
    exactly when the family is a frame for the reference space.

    The frame operator and the Gram matrix share their nonzero spectrum;
    whichever is smaller is diagonalized.
    """
    F = np.asarray(F, dtype=complex)
    n, d = F.shape
    if n == 0:
        return FrameBounds(0.0, 0.0, on_span_only, 0, d)
    w = eigenvalues(_gram(F) if n < d else frame_operator(F))
    B = max(float(w[-1]), 0.0)
    thr = rtol * B
    live = w[w > thr]
    rank = int(live.size)
    if on_span_only:
        A = float(live[0]) if rank else 0.0
    elif rank < d:
        A = 0.0
    else:
        A = float(w[0])
    return FrameBounds(A, B, on_span_only, rank, rank if on_span_only else d)


def besselet_bound(F) -> float:
    """Smallest Bessel bound on the whole space: ``lambda_max(S)``."""
    F = np.asarray(F, dtype=complex)
    if F.shape[0] == 0:
        return 0.0
    return frame_bounds(F).B


def is_frame_via_injectivity(F, rtol: float = RANK_TOL) -> bool:
    """Frame test through the kernel of the analysis operator ``conj(F)``.

    ``T*`` is injective iff its rank equals the space dimension; the rank is
    read off the Gram matrix ``T* T``, not the frame operator.
    """
    F = np.asarray(F, dtype=complex)
    n, d = F.shape
    if n < d:
        return False
    w = eigenvalues(_gram(F))
    if w[-1] <= 0:
        return d == 0
    return int(np.sum(w > rtol * w[-1])) == d


def _require_frame(F, rtol):
    b = frame_bounds(F, rtol=rtol)
    if not b.is_frame:
        raise NotAFrame(f"family is not a frame for the space (rank {b.rank} < dim {b.dim})")
    return b


def frame_operator_inverse(F, rtol: float = RANK_TOL) -> np.ndarray:
    _require_frame(F, rtol)
    w, V = hermitian_eigensystem(frame_operator(F))
    return (V / w) @ V.conj().T


def canonical_dual(F, rtol: float = RANK_TOL) -> np.ndarray:
    """Coordinates of ``S^-1 f_i``, one row per member."""
    F = np.asarray(F, dtype=complex)
    return F @ frame_operator_inverse(F, rtol).T


def reconstruct(g, F, rtol: float = RANK_TOL, dual=None):
    """Rebuild ``g`` from its frame data in the two ways the decomposition allows.

    Returns ``(via_dual_coeffs, via_frame_coeffs)``:
    ``sum <g, S^-1 f_i> f_i`` and ``sum <g, f_i> S^-1 f_i``. Pass ``dual``
    to reuse an already computed canonical dual.
    """
    F = np.asarray(F, dtype=complex)
    Fd = canonical_dual(F, rtol) if dual is None else np.asarray(dual, dtype=complex)
    g = np.asarray(g, dtype=complex)
    return synthesis(F, analysis(Fd, g)), synthesis(Fd, analysis(F, g))


def span_basis(F, rtol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal columns spanning the span of the family."""
    F = np.asarray(F, dtype=complex)
    w, V = hermitian_eigensystem(frame_operator(F))
    if not w.size or w[-1] <= 0:
        return V[:, :0]
    return V[:, w > rtol * w[-1]]


def restrict_to_span(F, rtol: float = RANK_TOL):
    """Rewrite the family in coordinates of its own span.

    Returns ``(Y, Q)``: ``Q`` has orthonormal columns spanning the family and
    ``Y = F @ conj(Q)``, so the family is a frame for ``C^rank`` in the new
    coordinates; ``Q @ y`` maps back.
    """
    Q = span_basis(F, rtol)
    return np.asarray(F, dtype=complex) @ Q.conj(), Q
