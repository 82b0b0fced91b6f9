"""Randomized batteries of theorem checks, as run by ``padicframes check``.

Every battery draws its instances from one seeded generator, so a given
seed always reproduces the same reports. The first instances of each battery
are fixed, hand-built cases (and the configured wavelet family when one is
supplied); the rest are random.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import checks
from .frames import canonical_dual, frame_bounds
from .instances import (
    alternate_dual,
    complex_normal,
    duplicated_onb,
    perturbation_with_bound,
    random_family,
    random_frame,
    random_operator,
    random_projection,
    random_unitary,
    tight_frame,
)


@dataclass
class Tolerances:
    bound: float = checks.BOUND_TOL
    dual: float = checks.DUAL_TOL
    tight: float = checks.TIGHT_TOL
    reconstruction: float = checks.RECONSTRUCTION_TOL
    rank: float = 1e-10

    def as_dict(self):
        return asdict(self)


THEOREMS = (
    "erasure",
    "perturb",
    "image",
    "bounded-below",
    "dual-pair",
    "tight-dual",
    "injectivity",
    "decomposition",
    "canonical-dual",
)


def _erasure(rng, d, trials, tol, system):
    yield lambda: checks.check_erasure(duplicated_onb(d), range(d, 2 * d), tol.bound, tol.rank)
    yield lambda: checks.check_erasure(random_frame(rng, d), [], tol.bound, tol.rank)
    while True:
        # a frame plus a block whose Bessel bound is a fraction of the frame's lower bound
        keep = random_frame(rng, d)
        k = int(rng.integers(1, d + 1))
        block = complex_normal(rng, k, d)
        C = float(rng.uniform(0.05, 0.95)) * frame_bounds(keep, rtol=tol.rank).A
        block *= np.sqrt(C / frame_bounds(block).B)
        F = np.vstack([keep, block])
        order = rng.permutation(F.shape[0])
        removed = np.flatnonzero(order >= keep.shape[0])
        yield lambda F=F[order], removed=removed: checks.check_erasure(F, removed, tol.bound, tol.rank)


def _perturb(rng, d, trials, tol, system):
    parseval = tight_frame(rng, d, 2 * d, 1.0)
    yield lambda: checks.check_perturbation(parseval, parseval, tol.bound, tol.rank)
    yield lambda: checks.check_perturbation(parseval, 1.1 * parseval, tol.bound, tol.rank)
    while True:
        F = random_frame(rng, d)
        A = frame_bounds(F, rtol=tol.rank).A
        G = perturbation_with_bound(rng, F, float(rng.uniform(0.05, 0.95)) * A)
        yield lambda F=F, G=G: checks.check_perturbation(F, G, tol.bound, tol.rank)


def _image(rng, d, trials, tol, system):
    F0 = random_frame(rng, d)
    yield lambda: checks.check_operator_image(F0, random_unitary(rng, d), tol.bound, tol.rank, role="unitary")
    yield lambda: checks.check_operator_image(F0, 2 * np.eye(d), tol.bound, tol.rank, role="scalar")
    if d > 1:
        yield lambda: checks.check_operator_image(F0, random_projection(rng, d, d - 1), tol.bound, tol.rank,
                                                  role="projection")
    kinds = ("unitary", "scalar", "projection", "generic", "rank-deficient")
    i = 0
    while True:
        kind = kinds[i % len(kinds)]
        i += 1
        F = random_frame(rng, d)
        if kind == "unitary":
            U = random_unitary(rng, d)
        elif kind == "scalar":
            U = float(rng.uniform(0.25, 3.0)) * np.eye(d)
        elif kind == "projection":
            U = random_projection(rng, d, int(rng.integers(1, d + 1)))
        elif kind == "generic":
            U = random_operator(rng, d)
        else:
            U = random_operator(rng, d, int(rng.integers(1, max(2, d))))
        yield lambda F=F, U=U, kind=kind: checks.check_operator_image(F, U, tol.bound, tol.rank, role=kind)


def _bounded_below(rng, d, trials, tol, system):
    F0 = random_frame(rng, d)
    yield lambda: checks.check_bounded_below(F0, np.eye(d), tol.bound, tol.rank)
    M = random_operator(rng, d)
    M[0] = 0
    yield lambda: checks.check_bounded_below(F0, M, tol.bound, tol.rank)
    diag = np.full(d, 0.5)
    diag[0] = 1.0
    yield lambda: checks.check_bounded_below(np.eye(d, dtype=complex), np.diag(diag), tol.bound, tol.rank)
    i = 0
    while True:
        F = random_frame(rng, d)
        # every fourth random operator is singular
        rank = int(rng.integers(0, d)) if i % 4 == 3 else None
        i += 1
        M = random_operator(rng, d, rank) if rank else (np.zeros((d, d)) if rank == 0 else random_operator(rng, d))
        yield lambda F=F, M=M: checks.check_bounded_below(F, M, tol.bound, tol.rank)


def _dual_pair(rng, d, trials, tol, system):
    onb = np.eye(d, dtype=complex)
    yield lambda: checks.check_dual_pair(onb, onb, rng, tol=tol.dual, rtol=tol.rank)
    if system is not None:
        yield lambda: checks.check_dual_pair(system, canonical_dual(system, tol.rank), rng, tol=tol.dual,
                                             rtol=tol.rank)
    kinds = ("canonical", "alternate", "doubled", "random", "nudged")
    i = 0
    while True:
        kind = kinds[i % len(kinds)]
        i += 1
        F = random_frame(rng, d, d + int(rng.integers(1, 2 * d + 1)))
        if kind == "canonical":
            G = canonical_dual(F, tol.rank)
        elif kind == "alternate":
            G = alternate_dual(rng, F)
        elif kind == "doubled":
            G = 2 * canonical_dual(F, tol.rank)
        elif kind == "random":
            G = complex_normal(rng, *F.shape)
        else:
            G = canonical_dual(F, tol.rank) + 1e-3 * complex_normal(rng, *F.shape)
        yield lambda F=F, G=G: checks.check_dual_pair(F, G, rng, tol=tol.dual, rtol=tol.rank)


def _tight_dual(rng, d, trials, tol, system):
    if system is not None:
        yield lambda: checks.check_tight_via_scaled_dual(system, rng, tol.tight, tol.dual, tol.rank)
    yield lambda: checks.check_tight_via_scaled_dual(duplicated_onb(d), rng, tol.tight, tol.dual, tol.rank)
    yield lambda: checks.check_tight_via_scaled_dual(
        np.vstack([np.eye(d)[:1], np.eye(d)]).astype(complex), rng, tol.tight, tol.dual, tol.rank)
    i = 0
    while True:
        i += 1
        if i % 2:
            F = tight_frame(rng, d, d + int(rng.integers(0, 2 * d + 1)), float(rng.uniform(0.2, 5.0)))
        else:
            F = random_frame(rng, d)
        yield lambda F=F: checks.check_tight_via_scaled_dual(F, rng, tol.tight, tol.dual, tol.rank)


def _injectivity(rng, d, trials, tol, system):
    if system is not None:
        yield lambda: checks.check_injectivity(system, tol.rank)
    yield lambda: checks.check_injectivity(np.eye(d, dtype=complex)[:1], tol.rank)
    while True:
        n = int(rng.integers(1, 3 * d + 1))
        rank = int(rng.integers(1, d + 1)) if rng.random() < 0.5 else None
        F = random_family(rng, d, n, rank)
        yield lambda F=F: checks.check_injectivity(F, tol.rank)


def _random_vectors(rng, d, count=20):
    return [complex_normal(rng, d) for _ in range(count)]


def _decomposition(rng, d, trials, tol, system):
    if system is not None:
        yield lambda: checks.check_decomposition(system, _random_vectors(rng, system.shape[1]),
                                                 tol.reconstruction, tol.rank)
    while True:
        F = random_frame(rng, d)
        yield lambda F=F: checks.check_decomposition(F, _random_vectors(rng, d), tol.reconstruction, tol.rank)


def _canonical_dual(rng, d, trials, tol, system):
    if system is not None:
        yield lambda: checks.check_canonical_dual(system, tol.bound, tol.rank)
    while True:
        F = random_frame(rng, d)
        yield lambda F=F: checks.check_canonical_dual(F, tol.bound, tol.rank)


_BATTERIES = {
    "erasure": _erasure,
    "perturb": _perturb,
    "image": _image,
    "bounded-below": _bounded_below,
    "dual-pair": _dual_pair,
    "tight-dual": _tight_dual,
    "injectivity": _injectivity,
    "decomposition": _decomposition,
    "canonical-dual": _canonical_dual,
}


def run_battery(theorem: str, *, seed: int, d: int, trials: int = 50, tol: Tolerances | None = None,
                system=None, p: int | None = None, max_attempts: int | None = None):
    """Run ``trials`` instances of one theorem check.

    Instances for which a statement is vacuous (erasure or perturbation with
    ``C >= A``) are discarded and redrawn. ``system`` is an optional
    coordinate matrix that is a frame for its coordinate space (e.g. a
    wavelet family restricted to its span).
    """
    if theorem not in _BATTERIES:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    reports = []
    attempts = 0
    limit = max_attempts or 50 * max(trials, 1)
    for make in _BATTERIES[theorem](rng, d, trials, tol, system):
        if len(reports) >= trials or attempts >= limit:
            break
        attempts += 1
        report = make()
        if report.details.get("applicable") is False:
            continue
        report.p = p
        report.seed = seed
        reports.append(report)
    return reports


def summarize(theorem: str, reports, *, p, seed, d, tol: Tolerances, extra=None) -> dict:
    satisfied = sum(bool(r.satisfied) for r in reports)
    out = {
        "check": theorem,
        "p": p,
        "seed": seed,
        "spaceDims": d,
        "trials": len(reports),
        "satisfied": satisfied,
        "violations": len(reports) - satisfied,
        "tolerances": tol.as_dict(),
    }
    margins = [r.margin for r in reports]
    out["minMargin"] = checks._num(min(margins)) if margins else None
    if extra:
        out.update(extra)
    out["instances"] = [r.to_dict() for r in reports]
    return out
