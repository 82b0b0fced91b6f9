"""Executable checks of the frame inequalities and identities.

Each check takes families as coordinate matrices (see :mod:`padicframes.frames`),
recomputes the optimal bounds of the family the statement is about, and
compares them with the bound the statement guarantees. A check returns a
:class:`CheckReport`; ``satisfied`` is False only if a guaranteed
inequality or equivalence fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexMismatch, NotAFrame
from .frames import (
    analysis,
    canonical_dual,
    frame_bounds,
    frame_operator,
    frame_operator_inverse,
    is_frame_via_injectivity,
    reconstruct,
)
from .linalg import RANK_TOL, eigenvalues, singular_values

BOUND_TOL = 1e-8
DUAL_TOL = 1e-9
TIGHT_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-8


@dataclass
class CheckReport:
    check: str
    space_dims: int
    family_size: int
    bounds: dict
    theorem_bound: dict
    satisfied: bool
    margin: float
    p: int | None = None
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "p": self.p,
            "spaceDims": self.space_dims,
            "familySize": self.family_size,
            "bounds": _clean(self.bounds),
            "theoremBound": _clean(self.theorem_bound),
            "satisfied": bool(self.satisfied),
            "margin": _num(self.margin),
            "seed": self.seed,
            "details": _clean(self.details),
        }


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else None


def _clean(d):
    if isinstance(d, dict):
        return {k: _clean(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_clean(v) for v in d]
    if isinstance(d, (str, type(None))):
        return d
    return _num(d)


def _as_matrix(F) -> np.ndarray:
    return np.asarray(F, dtype=complex)


def _bounds_dict(b) -> dict:
    return {"A": b.A, "B": b.B}


def _frame_or_raise(F, rtol):
    b = frame_bounds(F, rtol=rtol)
    if not b.is_frame:
        raise NotAFrame(f"input family is not a frame (rank {b.rank} < dim {F.shape[1]})")
    return b


def check_injectivity(F, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """Frame property via injectivity of the analysis operator vs. via ``A > 0``."""
    F = _as_matrix(F)
    b = frame_bounds(F, rtol=rtol)
    inj = is_frame_via_injectivity(F, rtol)
    agree = inj == b.is_frame
    return CheckReport(
        "injectivity", F.shape[1], F.shape[0], _bounds_dict(b), {"frameIffInjective": True},
        agree, 1.0 if agree else -1.0, details={"injective": inj, "frame": b.is_frame}, **ctx,
    )


def check_canonical_dual(F, tol: float = BOUND_TOL, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """The canonical dual has optimal bounds ``(1/B, 1/A)`` and frame operator ``S^-1``."""
    F = _as_matrix(F)
    b = _frame_or_raise(F, rtol)
    Fd = canonical_dual(F, rtol)
    bd = frame_bounds(Fd, rtol=rtol)
    Sinv = frame_operator_inverse(F, rtol)
    err_a = abs(bd.A - 1 / b.B) * b.B
    err_b = abs(bd.B - 1 / b.A) * b.A
    err_s = float(np.abs(frame_operator(Fd) - Sinv).max() / np.abs(Sinv).max())
    worst = max(err_a, err_b, err_s)
    return CheckReport(
        "canonical-dual", F.shape[1], F.shape[0], {"A": bd.A, "B": bd.B},
        {"A": 1 / b.B, "B": 1 / b.A}, worst <= tol, tol - worst,
        details={"original": _bounds_dict(b), "relErrA": err_a, "relErrB": err_b, "relErrOperator": err_s},
        **ctx,
    )


def check_decomposition(F, gs, tol: float = RECONSTRUCTION_TOL, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """Both reconstruction formulas return every ``g`` in ``gs``."""
    F = _as_matrix(F)
    b = _frame_or_raise(F, rtol)
    Fd = canonical_dual(F, rtol)
    worst = 0.0
    for g in gs:
        g = np.asarray(g, dtype=complex)
        r1, r2 = reconstruct(g, F, rtol, dual=Fd)
        scale = max(np.linalg.norm(g), np.finfo(float).tiny)
        worst = max(worst, np.linalg.norm(r1 - g) / scale, np.linalg.norm(r2 - g) / scale)
    return CheckReport(
        "decomposition", F.shape[1], F.shape[0], _bounds_dict(b), {"maxRelResidual": tol},
        worst <= tol, tol - worst, details={"maxRelResidual": worst, "vectors": len(gs)}, **ctx,
    )


def check_operator_image(F, U, tol: float = BOUND_TOL, rtol: float = RANK_TOL, role: str = "U", **ctx) -> CheckReport:
    """``{U f_i}`` is a frame for its span with bounds ``A ||U^+||^-2`` and ``B ||U||^2``."""
    F = _as_matrix(F)
    U = np.asarray(U, dtype=complex)
    b = _frame_or_raise(F, rtol)
    sv = singular_values(U)
    norm_u = float(sv[0]) if sv.size else 0.0
    kept = sv[sv > rtol * norm_u] if norm_u > 0 else sv[:0]
    sigma_min = float(kept[-1]) if kept.size else 0.0
    img = frame_bounds(F @ U.T, on_span_only=True, rtol=rtol)
    lower = b.A * sigma_min**2
    upper = b.B * norm_u**2
    margin = min(img.A - (lower - tol), (upper + tol) - img.B)
    return CheckReport(
        "image", F.shape[1], F.shape[0], _bounds_dict(img), {"A": lower, "B": upper},
        margin >= 0, margin,
        details={"role": role, "original": _bounds_dict(b), "normU": norm_u,
                 "normPinvU": 1 / sigma_min if sigma_min else None,
                 "rankU": int(kept.size), "rankImage": img.rank},
        **ctx,
    )


def check_bounded_below(F, M, tol: float = BOUND_TOL, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """``{M f_i}`` is a frame iff ``M*`` is bounded below; then with bounds ``A lambda`` and ``B ||M*||^2``."""
    F = _as_matrix(F)
    M = np.asarray(M, dtype=complex)
    b = _frame_or_raise(F, rtol)
    w = eigenvalues(M @ M.conj().T)  # spectrum of M M^H = squared singular values of M*
    top = max(float(w[-1]), 0.0)
    lam = max(float(w[0]), 0.0)
    predicted = top > 0 and lam > rtol * top
    img = frame_bounds(F @ M.T, rtol=rtol)
    actual = img.is_frame
    lower = b.A * lam
    upper = b.B * top
    margin = (upper + tol) - img.B
    if actual:
        margin = min(margin, img.A - (lower - tol))
    agree = predicted == actual
    return CheckReport(
        "bounded-below", F.shape[1], F.shape[0], _bounds_dict(img), {"A": lower, "B": upper},
        agree and margin >= 0, margin if agree else -1.0,
        details={"lambdaBest": lam, "normAdjointSq": top, "predictedFrame": predicted,
                 "isFrame": actual, "original": _bounds_dict(b)},
        **ctx,
    )


def check_erasure(F, removed, tol: float = BOUND_TOL, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """Removing a sub-family with Bessel bound ``C < A`` leaves a frame with bounds ``A - C`` and ``B``."""
    F = _as_matrix(F)
    b = _frame_or_raise(F, rtol)
    removed = sorted(set(int(i) for i in removed))
    keep = np.setdiff1d(np.arange(F.shape[0]), removed)
    C = frame_bounds(F[removed]).B if removed else 0.0
    survivors = frame_bounds(F[keep], rtol=rtol)
    applicable = C < b.A
    if applicable:
        margin = min(survivors.A - (b.A - C - tol), (b.B + tol) - survivors.B)
        ok = margin >= 0
    else:
        margin, ok = 0.0, True
    return CheckReport(
        "erasure", F.shape[1], F.shape[0], _bounds_dict(survivors), {"A": b.A - C, "B": b.B},
        ok, margin,
        details={"C": C, "applicable": applicable, "removed": len(removed), "original": _bounds_dict(b)},
        **ctx,
    )


def check_perturbation(F, G, tol: float = BOUND_TOL, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """A perturbation with Bessel bound ``C < A`` keeps bounds ``(sqrt A - sqrt C)^2, (sqrt B + sqrt C)^2``."""
    F = _as_matrix(F)
    G = _as_matrix(G)
    if F.shape != G.shape:
        raise IndexMismatch(f"families have shapes {F.shape} and {G.shape}")
    b = _frame_or_raise(F, rtol)
    C = frame_bounds(F - G).B
    perturbed = frame_bounds(G, rtol=rtol)
    lower = (math.sqrt(b.A) - math.sqrt(C)) ** 2
    upper = (math.sqrt(b.B) + math.sqrt(C)) ** 2
    applicable = C < b.A
    if applicable:
        margin = min(perturbed.A - (lower - tol), (upper + tol) - perturbed.B)
        ok = margin >= 0
    else:
        margin, ok = 0.0, True
    return CheckReport(
        "perturb", F.shape[1], F.shape[0], _bounds_dict(perturbed), {"A": lower, "B": upper},
        ok, margin, details={"C": C, "applicable": applicable, "original": _bounds_dict(b)}, **ctx,
    )


def dual_pair_conditions(F, G, pairs, tol: float = DUAL_TOL):
    """Evaluate the three dual-pair conditions; returns ``((i), (ii), (iii), errors)``."""
    F = _as_matrix(F)
    G = _as_matrix(G)
    I = np.eye(F.shape[1])
    err1 = float(np.abs(G.T @ F.conj() - I).max()) if F.size else 0.0
    err2 = float(np.abs(F.T @ G.conj() - I).max()) if F.size else 0.0
    err3 = 0.0
    for f, g in pairs:
        lhs = np.vdot(g, f)
        rhs = np.sum(analysis(G, f) * (F @ g.conj()))
        err3 = max(err3, abs(lhs - rhs) / max(np.linalg.norm(f) * np.linalg.norm(g), np.finfo(float).tiny))
    return err1 <= tol, err2 <= tol, err3 <= tol, (err1, err2, err3)


def random_pairs(rng, d: int, count: int = 20):
    def vec():
        return (rng.standard_normal(d) + 1j * rng.standard_normal(d)) / math.sqrt(2)
    return [(vec(), vec()) for _ in range(count)]


def check_dual_pair(F, G, rng=None, pairs: int = 20, tol: float = DUAL_TOL, rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """Conditions (i), (ii), (iii) must agree; when they hold, both families are frames."""
    F = _as_matrix(F)
    G = _as_matrix(G)
    if F.shape != G.shape:
        raise IndexMismatch(f"families have shapes {F.shape} and {G.shape}")
    rng = np.random.default_rng(0) if rng is None else rng
    c1, c2, c3, errs = dual_pair_conditions(F, G, random_pairs(rng, F.shape[1], pairs), tol)
    agree = c1 == c2 == c3
    bf = frame_bounds(F, rtol=rtol)
    bg = frame_bounds(G, rtol=rtol)
    both_frames = bf.is_frame and bg.is_frame
    ok = agree and (not c1 or both_frames)
    return CheckReport(
        "dual-pair", F.shape[1], F.shape[0], _bounds_dict(bf), {"mixedOperatorIsIdentity": tol},
        ok, tol - max(errs) if c1 else min(errs) - tol,
        details={"i": c1, "ii": c2, "iii": c3, "errors": list(errs), "dualBounds": _bounds_dict(bg),
                 "bothFrames": both_frames},
        **ctx,
    )


def check_tight_via_scaled_dual(F, rng=None, tol_tight: float = TIGHT_TOL, tol_dual: float = DUAL_TOL,
                                rtol: float = RANK_TOL, **ctx) -> CheckReport:
    """Tightness (``A = B``) agrees with some ``alpha F`` being a dual of ``F``.

    If ``alpha F`` is a dual then ``alpha S = I``, so only ``alpha = 1/A`` and
    ``alpha = 1/B`` can work; both are tried.
    """
    F = _as_matrix(F)
    rng = np.random.default_rng(0) if rng is None else rng
    b = _frame_or_raise(F, rtol)
    tight = b.B - b.A <= tol_tight * b.B
    pairs = random_pairs(rng, F.shape[1])
    found = None
    for alpha in sorted({1 / b.A, 1 / b.B}):
        c1, c2, c3, _ = dual_pair_conditions(F, alpha * F, pairs, tol_dual)
        if c1 and c2 and c3:
            found = alpha
            break
    scaled = found is not None
    return CheckReport(
        "tight-dual", F.shape[1], F.shape[0], _bounds_dict(b), {"tightIffScaledDual": True},
        tight == scaled, 1.0 if tight == scaled else -1.0,
        details={"tight": tight, "scaledDual": scaled, "alpha": found}, **ctx,
    )
