"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``python3 -m pytest tests/test_acceptance.py -v`` (the lines are
repeated in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import random_function  # noqa: E402
from padicframes import checks  # noqa: E402
from padicframes.battery import run_battery  # noqa: E402
from padicframes.frames import (  # noqa: E402
    TestSpace,
    coefficients,
    frame_bounds,
    gram_matrix,
    is_frame_via_injectivity,
    restrict_to_span,
)
from padicframes.functions import inner_product, quadrature_inner_product, required_depth  # noqa: E402
from padicframes.instances import (  # noqa: E402
    DEFAULT_SEED,
    complex_normal,
    duplicated_onb,
    random_family,
    random_frame,
    random_projection,
    random_unitary,
    tight_frame,
)
from padicframes.wavelets import (  # noqa: E402
    IndexSet,
    build_family,
    enumerate_translations,
    fractions_with_exact_depth,
    khrennikov_shelkovich_generators,
    kozyrev_generators,
)

RESULTS: list[str] = []


def record(n: int, title: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    return ok


def kozyrev_span_coords(p=2, j=(-1, 0), m=1, space=(2, 1)):
    fam = build_family(kozyrev_generators(p), IndexSet(j[0], j[1], m))
    return restrict_to_span(coefficients(fam, TestSpace(p, *space)))[0]


def test_criterion_01_integration_oracle():
    start = time.perf_counter()
    worst, count = 0.0, 0
    for p in (2, 3, 5):
        rng = random.Random(DEFAULT_SEED + p)
        for _ in range(70):
            f, g = random_function(rng, p), random_function(rng, p)
            depth = max(required_depth(f), required_depth(g))
            worst = max(worst, abs(inner_product(f, g) - quadrature_inner_product(f, g, depth)))
            count += 2
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and count >= 200 and elapsed < 10
    assert record(1, "closed form vs quadrature", ok,
                  f"{count} functions, max |diff| {worst:.2e}, {elapsed:.2f} s")


def test_criterion_02_kozyrev_parseval():
    start = time.perf_counter()
    notes = []
    ok = True
    for p in (2, 3):
        fam = build_family(kozyrev_generators(p), IndexSet(-2, 2, 2))
        gram_err = float(np.abs(gram_matrix(fam.functions) - np.eye(len(fam))).max())
        # (2,3) does not contain every member: bounds of the projected family on its span
        proj = frame_bounds(coefficients(fam, TestSpace(p, 2, 3), project=True), on_span_only=True)
        # (4,3) contains the whole family
        full = frame_bounds(coefficients(fam, TestSpace(p, 4, 3)), on_span_only=True)
        for b in (proj, full):
            ok &= abs(b.A - 1) <= 1e-9 and abs(b.B - 1) <= 1e-9
        ok &= gram_err <= 1e-10
        notes.append(f"p={p}: n={len(fam)}, gram err {gram_err:.1e}, "
                     f"(2,3) projected A,B=({proj.A:.12f},{proj.B:.12f}), "
                     f"(4,3) A,B=({full.A:.12f},{full.B:.12f})")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    assert record(2, "Kozyrev Parseval", ok, "; ".join(notes) + f"; {elapsed:.1f} s")


def _digit_sets(p, m):
    exact, all_ = set(), set()
    for ds in itertools.product(range(p), repeat=m):
        x = sum(Fraction(d, p ** (m - k)) for k, d in enumerate(ds))
        all_.add(x)
        if ds[0]:
            exact.add(x)
    return sorted(exact), sorted(all_)


def test_criterion_03_ks_counts():
    ok = True
    cases = 0
    for p in (2, 3, 5):
        for m in (1, 2, 3):
            exact, all_ = _digit_sets(p, m)
            got = [x.to_fraction() for x in fractions_with_exact_depth(p, m)]
            freqs = [g.atoms[0].frequency.to_fraction() for g in khrennikov_shelkovich_generators(p, m).generators]
            trans = [x.to_fraction() for x in enumerate_translations(p, m)]
            ok &= len(got) == (p - 1) * p ** (m - 1)
            ok &= got == exact and freqs == exact and trans == all_
            cases += 1
    assert record(3, "Khrennikov-Shelkovich counts", ok, f"{cases} (p, m) cases exact")


def test_criterion_04_canonical_dual():
    rng = np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    ok = True
    for _ in range(50):
        d = int(rng.integers(2, 33))
        F = random_frame(rng, d, d + int(rng.integers(0, d + 1)))
        r = checks.check_canonical_dual(F, tol=1e-8)
        ok &= r.satisfied
        worst = max(worst, r.details["relErrA"], r.details["relErrB"], r.details["relErrOperator"])
    assert record(4, "canonical dual bounds", ok, f"50 frames, d <= 32, max rel err {worst:.2e}")


def test_criterion_05_decomposition():
    rng = np.random.default_rng(DEFAULT_SEED + 5)
    worst = 0.0
    ok = True
    for _ in range(50):
        d = int(rng.integers(2, 17))
        F = random_frame(rng, d)
        r = checks.check_decomposition(F, [complex_normal(rng, d) for _ in range(20)], tol=1e-8)
        ok &= r.satisfied
        worst = max(worst, r.details["maxRelResidual"])
    assert record(5, "decomposition", ok, f"50 frames x 20 vectors, max residual {worst:.2e}")


def test_criterion_06_erasure():
    exact = checks.check_erasure(duplicated_onb(4), range(4, 8))
    ok = exact.satisfied and abs(exact.bounds["A"] - 1) < 1e-12 and abs(exact.details["C"] - 1) < 1e-12
    reports = run_battery("erasure", seed=DEFAULT_SEED, d=8, trials=52)
    random_part = reports[2:]
    ok &= len(random_part) == 50 and all(r.details["C"] < r.details["original"]["A"] for r in random_part)
    bad = sum(not r.satisfied for r in reports)
    ok &= bad == 0
    assert record(6, "erasure", ok, f"duplicated ONB A'={exact.bounds['A']:.12f}; 50 random, {bad} violations")


def test_criterion_07_perturbation():
    rng = np.random.default_rng(DEFAULT_SEED + 7)
    P = tight_frame(rng, 5, 9, 1.0)
    scaled = checks.check_perturbation(P, 1.1 * P)
    ok = scaled.satisfied and abs(scaled.details["C"] - 0.01) < 1e-12
    reports = run_battery("perturb", seed=DEFAULT_SEED, d=8, trials=52)
    random_part = reports[2:]
    ok &= len(random_part) == 50 and all(r.details["C"] < r.details["original"]["A"] for r in random_part)
    bad = sum(not r.satisfied for r in reports)
    ok &= bad == 0
    assert record(7, "perturbation", ok,
                  f"(1+0.1) scaling C={scaled.details['C']:.4f}, A'={scaled.bounds['A']:.6f}; "
                  f"50 random, {bad} violations")


def test_criterion_08_operator_image():
    rng = np.random.default_rng(DEFAULT_SEED + 8)
    ok = True
    worst_scalar = 0.0
    n = 0
    for _ in range(10):
        d = int(rng.integers(2, 9))
        F = random_frame(rng, d)
        b = frame_bounds(F)
        for U, role in ((random_unitary(rng, d), "unitary"), (2 * np.eye(d), "scalar"),
                        (random_projection(rng, d, int(rng.integers(1, d))), "projection")):
            r = checks.check_operator_image(F, U, tol=1e-8, role=role)
            ok &= r.satisfied
            n += 1
            if role == "scalar":
                worst_scalar = max(worst_scalar, abs(r.bounds["A"] - 4 * b.A) / b.A,
                                   abs(r.bounds["B"] - 4 * b.B) / b.B)
    ok &= worst_scalar < 1e-10
    assert record(8, "closed-range image", ok, f"{n} instances, U=2I rel err {worst_scalar:.1e}")


def test_criterion_09_injectivity_and_bounded_below():
    rng = np.random.default_rng(DEFAULT_SEED + 9)
    agree = 0
    for k in range(100):
        d = int(rng.integers(2, 9))
        n = int(rng.integers(1, 3 * d))
        F = random_family(rng, d, n, int(rng.integers(1, d + 1)) if k % 2 else None)
        agree += is_frame_via_injectivity(F) == frame_bounds(F).is_frame
    reports = run_battery("bounded-below", seed=DEFAULT_SEED, d=6, trials=50)
    singular = sum(not r.details["predictedFrame"] for r in reports)
    bad = sum(not r.satisfied for r in reports)
    ok = agree == 100 and len(reports) == 50 and singular >= 5 and bad == 0
    assert record(9, "injectivity and bounded below", ok,
                  f"{agree}/100 agree; 50 operators, {singular} singular, {bad} violations")


def test_criterion_10_dual_pairs_and_tightness():
    system = kozyrev_span_coords()
    pairs = run_battery("dual-pair", seed=DEFAULT_SEED, d=6, trials=50, system=system)
    true_cases = sum(r.details["i"] for r in pairs)
    ok = len(pairs) == 50 and all(r.satisfied for r in pairs) and 0 < true_cases < 50
    ok &= all(r.details["i"] == r.details["ii"] == r.details["iii"] for r in pairs)
    tight = run_battery("tight-dual", seed=DEFAULT_SEED, d=6, trials=50, system=system)
    ok &= len(tight) == 50 and all(r.satisfied for r in tight)
    koz, dup = tight[0].details, tight[1].details
    ok &= koz["tight"] and abs(koz["alpha"] - 1) < 1e-9
    ok &= dup["tight"] and abs(dup["alpha"] - 0.5) < 1e-9
    assert record(10, "dual-pair and tight dual", ok,
                  f"dual pairs {true_cases} true / {50 - true_cases} false, all agree; "
                  f"Kozyrev alpha={koz['alpha']:.12f}, duplicated ONB alpha={dup['alpha']:.12f}")


def test_criterion_11_determinism():
    cmd = [sys.executable, "-m", "padicframes.cli", "battery", "--seed", str(DEFAULT_SEED)]
    runs = [subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL) for _ in range(2)]
    outs = [r.communicate()[0] for r in runs]
    codes = [r.returncode for r in runs]
    ok = codes == [0, 0] and outs[0] == outs[1] and len(outs[0]) > 0
    assert record(11, "determinism", ok, f"exit codes {codes}, {len(outs[0])} bytes, identical={outs[0] == outs[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
