"""Exact arithmetic on Z[1/p]: valuations, norms, fractional parts,
additive characters and ultrametric balls.

Every number handled here has a finite base-p expansion, so it is stored as
``mantissa * p**exponent`` with ``p`` not dividing the mantissa.
"""

from __future__ import annotations

import cmath
import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import PAdicError

# Valuation of zero.
INFINITY = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Prime(int):
    """An ``int`` that is known to be prime."""

    def __new__(cls, p):
        p = int(p)
        if not is_prime(p):
            raise PAdicError(f"p must be prime, got {p}")
        return super().__new__(cls, p)


def _strip(m: int, p: int) -> tuple[int, int]:
    """Split ``m`` into ``(u, k)`` with ``m = u * p**k`` and ``p`` not dividing ``u``."""
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return m, k


class PAdic:
    """An element of Z[1/p], kept in canonical form ``mantissa * p**exponent``.

    Zero is stored as ``0 * p**0``. Instances are immutable and hashable.
    """

    __slots__ = ("p", "mantissa", "exponent")

    def __init__(self, p: int, mantissa: int = 0, exponent: int = 0):
        if mantissa == 0:
            exponent = 0
        else:
            mantissa, k = _strip(mantissa, p)
            exponent += k
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("PAdic is immutable")

    @classmethod
    def from_rational(cls, p: int, x) -> PAdic:
        """Build from an int, ``Fraction`` or ``"a/b"`` string whose denominator is a power of p."""
        x = Fraction(x)
        den, k = _strip(x.denominator, p)
        if den != 1:
            raise PAdicError(f"{x} is not in Z[1/{p}]")
        return cls(p, x.numerator, -k)

    @classmethod
    def zero(cls, p: int) -> PAdic:
        return cls(p)

    def _coerce(self, other) -> PAdic:
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise PAdicError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PAdic.from_rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        e = min(self.exponent, other.exponent)
        p = self.p
        m = self.mantissa * p ** (self.exponent - e) + other.mantissa * p ** (other.exponent - e)
        return PAdic(p, m, e)

    __radd__ = __add__

    def __neg__(self) -> PAdic:
        return PAdic(self.p, -self.mantissa, self.exponent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # p is prime, so the product of units is a unit: no re-normalization needed.
        if self.mantissa == 0 or other.mantissa == 0:
            return PAdic(self.p)
        return PAdic(self.p, self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def shift(self, k: int) -> PAdic:
        """Multiply by ``p**k``."""
        if self.mantissa == 0:
            return self
        return PAdic(self.p, self.mantissa, self.exponent + k)

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa * self.p**self.exponent)
        return Fraction(self.mantissa, self.p ** (-self.exponent))

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def __eq__(self, other):
        if isinstance(other, PAdic):
            return (self.p, self.mantissa, self.exponent) == (other.p, other.mantissa, other.exponent)
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        # consistent with equality against int and Fraction
        return hash(self.to_fraction())

    # Ordering is the real ordering of the underlying rationals; it is only
    # used for deterministic enumeration.
    def __lt__(self, other):
        return self.to_fraction() < self._coerce(other).to_fraction()

    def __le__(self, other):
        return self.to_fraction() <= self._coerce(other).to_fraction()

    def __gt__(self, other):
        return self.to_fraction() > self._coerce(other).to_fraction()

    def __ge__(self, other):
        return self.to_fraction() >= self._coerce(other).to_fraction()

    def __repr__(self):
        return f"PAdic({format_padic(self)})"

    def __str__(self):
        return format_padic(self)


def valuation(x: PAdic):
    """Exponent of p in ``x``; ``INFINITY`` for zero."""
    if x.mantissa == 0:
        return INFINITY
    return x.exponent


def norm(x: PAdic) -> Fraction:
    """The p-adic absolute value ``p**(-valuation(x))`` as an exact rational."""
    if x.mantissa == 0:
        return Fraction(0)
    return Fraction(x.p) ** (-x.exponent)


def norm_at_most(x: PAdic, k: int) -> bool:
    """``norm(x) <= p**k`` without building the rational."""
    return x.mantissa == 0 or -x.exponent <= k


def reduce_mod(x: PAdic, k: int) -> PAdic:
    """Zero every base-p digit of ``x`` at positions ``>= k``.

    The result is the representative of ``x + p**k Z_p`` lying in
    ``[0, p**k)`` as a real rational.
    """
    if x.mantissa == 0 or x.exponent >= k:
        return PAdic(x.p)
    return PAdic(x.p, x.mantissa % x.p ** (k - x.exponent), x.exponent)


def fractional_part(x: PAdic) -> PAdic:
    """Sum of the negative-position digits of ``x``."""
    return reduce_mod(x, 0)


def digits(x: PAdic, lo: int, hi: int) -> list[int]:
    """Base-p digits of ``x`` at positions ``lo .. hi-1`` (negative x uses its p-adic expansion)."""
    out = []
    for j in range(lo, hi):
        d = reduce_mod(x, j + 1) - reduce_mod(x, j)
        out.append(0 if d.is_zero() else d.mantissa)
    return out


@dataclass(frozen=True)
class UnitPhase:
    """The complex number ``exp(2*pi*i*t)`` with ``t`` an exact rational in [0, 1)."""

    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t) % 1
        object.__setattr__(self, "t", t)

    def __mul__(self, other: UnitPhase) -> UnitPhase:
        return UnitPhase(self.t + other.t)

    def conjugate(self) -> UnitPhase:
        return UnitPhase(-self.t)

    def __complex__(self):
        t = self.t
        # exact values at the quarter points keep common cases free of rounding
        if t == 0:
            return 1 + 0j
        if t == Fraction(1, 2):
            return -1 + 0j
        if t == Fraction(1, 4):
            return 1j
        if t == Fraction(3, 4):
            return -1j
        return cmath.exp(2j * math.pi * float(t))


def character_phase(x: PAdic) -> UnitPhase:
    """``chi_p(x) = exp(2*pi*i*{x}_p)``."""
    return UnitPhase(fractional_part(x).to_fraction())


def character(x: PAdic) -> complex:
    return complex(character_phase(x))


class BallRelation(enum.Enum):
    DISJOINT = "Disjoint"
    EQUAL = "Equal"
    FIRST_INSIDE_SECOND = "FirstInsideSecond"
    SECOND_INSIDE_FIRST = "SecondInsideFirst"


class Ball:
    """The closed ball ``{x : |x - center|_p <= p**radius_log}``.

    The stored center is canonical (digits at positions ``>= -radius_log``
    zeroed), so equal balls compare and hash equal.
    """

    __slots__ = ("center", "radius_log")

    def __init__(self, center: PAdic, radius_log: int):
        object.__setattr__(self, "center", reduce_mod(center, -radius_log))
        object.__setattr__(self, "radius_log", int(radius_log))

    def __setattr__(self, name, value):
        raise AttributeError("Ball is immutable")

    @property
    def p(self) -> int:
        return self.center.p

    def __contains__(self, x: PAdic) -> bool:
        return norm_at_most(x - self.center, self.radius_log)

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return self.radius_log == other.radius_log and self.center == other.center

    def __hash__(self):
        return hash((self.center, self.radius_log))

    def sort_key(self):
        return (self.center.to_fraction(), self.radius_log)

    def measure(self) -> Fraction:
        return ball_measure(self)

    def split(self) -> list[Ball]:
        return split_ball(self)

    def parent(self, levels: int = 1) -> Ball:
        return Ball(self.center, self.radius_log + levels)

    def __repr__(self):
        return f"Ball({format_ball(self)})"


def ball_relation(b1: Ball, b2: Ball) -> BallRelation:
    """Classify two balls; by ultrametricity they are nested or disjoint."""
    if b1.radius_log <= b2.radius_log:
        if b1.center in b2:
            if b1.radius_log == b2.radius_log:
                return BallRelation.EQUAL
            return BallRelation.FIRST_INSIDE_SECOND
        return BallRelation.DISJOINT
    if b2.center in b1:
        return BallRelation.SECOND_INSIDE_FIRST
    return BallRelation.DISJOINT


def ball_measure(b: Ball) -> Fraction:
    """Haar measure of the ball, with Z_p normalized to 1."""
    return Fraction(b.p) ** b.radius_log


def split_ball(b: Ball) -> list[Ball]:
    """The p disjoint sub-balls of radius ``p**(radius_log - 1)``, ordered by digit."""
    step = PAdic(b.p, 1, -b.radius_log)
    return [Ball(b.center + step * k, b.radius_log - 1) for k in range(b.p)]


def cosets(b: Ball, radius_log: int) -> list[Ball]:
    """All sub-balls of ``b`` with the given (smaller or equal) radius."""
    if radius_log > b.radius_log:
        raise PAdicError("requested cosets are coarser than the ball")
    step = PAdic(b.p, 1, -b.radius_log)
    n = b.p ** (b.radius_log - radius_log)
    return [Ball(b.center + step * k, radius_log) for k in range(n)]


_PADIC_RE = re.compile(r"^\s*(-?\d+)\s*\*\s*(\d+)\s*\^\s*\(?\s*(-?\d+)\s*\)?\s*$")


def format_padic(x: PAdic) -> str:
    return f"{x.mantissa}*{x.p}^{x.exponent}"


def parse_padic(text: str, p: int | None = None) -> PAdic:
    """Parse ``"m*p^e"``; plain ``"a/b"`` or integers are accepted when ``p`` is given."""
    m = _PADIC_RE.match(text)
    if m:
        mant, base, exp = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if p is not None and base != p:
            raise PAdicError(f"prime mismatch in {text!r}: expected {p}")
        return PAdic(Prime(base), mant, exp)
    if p is None:
        raise PAdicError(f"cannot parse {text!r} without a prime")
    try:
        return PAdic.from_rational(p, Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise PAdicError(f"cannot parse {text!r}") from exc


def format_ball(b: Ball) -> str:
    return f"{format_padic(b.center)};{b.radius_log}"


def parse_ball(text: str, p: int | None = None) -> Ball:
    try:
        center, radius = text.split(";")
    except ValueError as exc:
        raise PAdicError(f"cannot parse ball {text!r}") from exc
    return Ball(parse_padic(center, p), int(radius))
