import random
import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from padicframes.functions import CharAtom, LCFunction, canonicalize
from padicframes.padic import Ball, PAdic

PRIMES = (2, 3, 5)


def padics(p, max_mantissa=10**6, exp_range=(-6, 6)):
    return st.builds(lambda m, e: PAdic(p, m, e),
                     st.integers(-max_mantissa, max_mantissa), st.integers(*exp_range))


def random_padic(rng: random.Random, p: int, lo=-3, hi=3) -> PAdic:
    return PAdic(p, rng.randint(-(p**4), p**4), rng.randint(lo, hi))


def random_function(rng: random.Random, p: int, atoms: int | None = None) -> LCFunction:
    """A canonical function with a handful of atoms on small balls near the origin."""
    n = atoms if atoms is not None else rng.randint(1, 4)
    raw = []
    for _ in range(n):
        gamma = rng.randint(-2, 1)
        center = PAdic(p, rng.randint(0, p**4), rng.randint(-2, 0))
        freq = PAdic(p, rng.randint(0, p**3), rng.randint(-2, 0))
        amp = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        raw.append(CharAtom(amp, freq, Ball(center, gamma)))
    return canonicalize(raw, p)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def frac(x):
    return Fraction(x)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
