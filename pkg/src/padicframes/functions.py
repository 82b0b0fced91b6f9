"""Locally constant, compactly supported functions on Q_p.

A function is a finite sum of character atoms
``x -> amplitude * chi_p(frequency * x) * 1_ball(x)``. The p-adic geometry and
phases are exact; only the amplitudes are floating point.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DepthTooCoarse, PAdicError, RefinementBudgetExceeded
from .padic import (
    Ball,
    BallRelation,
    PAdic,
    ball_relation,
    character,
    cosets,
    format_padic,
    norm_at_most,
    parse_padic,
    reduce_mod,
)

AMPLITUDE_FLOOR = 1e-14
REFINEMENT_BUDGET = 10**6


@dataclass(frozen=True)
class CharAtom:
    amplitude: complex
    frequency: PAdic
    support: Ball

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def p(self) -> int:
        return self.support.p

    def canonical(self) -> CharAtom:
        """Reduce the frequency modulo ``p**radius_log Z_p``, moving the
        constant phase it produces on the ball into the amplitude."""
        s = self.frequency
        s0 = reduce_mod(s, self.support.radius_log)
        if s0 == s:
            return self
        phase = character((s - s0) * self.support.center)
        return CharAtom(self.amplitude * phase, s0, self.support)

    def is_constant(self) -> bool:
        """True when the character is constant on the support."""
        return norm_at_most(self.frequency, -self.support.radius_log)

    def __call__(self, x: PAdic) -> complex:
        if x not in self.support:
            return 0j
        return self.amplitude * character(self.frequency * x)


class LCFunction:
    """A finite sum of :class:`CharAtom`.

    Use :func:`canonicalize` to obtain the canonical representation with
    pairwise disjoint supports; other constructors keep atoms as given, which
    is still a valid (if redundant) description of the function.
    """

    __slots__ = ("atoms", "p")

    def __init__(self, atoms, p: int | None = None):
        atoms = tuple(atoms)
        if p is None:
            if not atoms:
                raise PAdicError("empty function needs an explicit prime")
            p = atoms[0].p
        if any(a.p != p for a in atoms):
            raise PAdicError("atoms over different primes")
        self.atoms = atoms
        self.p = p

    def __call__(self, x: PAdic) -> complex:
        return evaluate(self, x)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, LCFunction):
            return NotImplemented
        return self.p == other.p and self.atoms == other.atoms

    __hash__ = None

    def scale(self, c: complex) -> LCFunction:
        return LCFunction((CharAtom(a.amplitude * c, a.frequency, a.support) for a in self.atoms), self.p)

    def __add__(self, other: LCFunction) -> LCFunction:
        return LCFunction(self.atoms + other.atoms, self.p)

    def __sub__(self, other: LCFunction) -> LCFunction:
        return self + other.scale(-1)

    def norm(self) -> float:
        return math.sqrt(max(inner_product(self, self).real, 0.0))

    def __repr__(self):
        return f"LCFunction(p={self.p}, atoms={len(self.atoms)})"


def indicator(ball: Ball, amplitude: complex = 1.0) -> LCFunction:
    return LCFunction([CharAtom(complex(amplitude), PAdic(ball.p), ball)])


def _canonical_atom_order(atom: CharAtom):
    return (atom.support.sort_key(), atom.frequency.to_fraction())


def canonicalize(atoms, p: int | None = None, budget: int = REFINEMENT_BUDGET) -> LCFunction:
    """Rewrite a list of atoms (or an :class:`LCFunction`) in canonical form.

    Supports become pairwise disjoint: a ball that strictly contains another
    atom's ball, or that carries several inequivalent frequencies, is split
    into its p children until neither happens. Atoms on the same ball with the
    same reduced frequency are merged, and atoms whose amplitude falls below
    ``AMPLITUDE_FLOOR`` are dropped.
    """
    if isinstance(atoms, LCFunction):
        p = atoms.p
        atoms = atoms.atoms
    atoms = [a.canonical() for a in atoms]
    if p is None:
        if not atoms:
            raise PAdicError("empty function needs an explicit prime")
        p = atoms[0].p

    # Every strict ancestor of an atom ball must be refined away.
    by_ball: dict[Ball, list[CharAtom]] = {}
    for a in atoms:
        by_ball.setdefault(a.support, []).append(a)
    top = max((b.radius_log for b in by_ball), default=0)
    ancestors = set()
    for b in by_ball:
        for k in range(1, top - b.radius_log + 1):
            anc = b.parent(k)
            if anc in ancestors:
                break
            ancestors.add(anc)

    # Contributions only flow from a ball to its children, so processing the
    # coarsest balls first guarantees each ball is complete when popped.
    pending = by_ball
    heap = [(-b.radius_log, i, b) for i, b in enumerate(pending)]
    heapq.heapify(heap)
    tick = len(heap)
    out: list[CharAtom] = []
    count = len(atoms)
    while heap:
        _, _, ball = heapq.heappop(heap)
        merged: dict[PAdic, complex] = {}
        for a in pending.pop(ball):
            merged[a.frequency] = merged.get(a.frequency, 0j) + a.amplitude
        live = {s: amp for s, amp in merged.items() if abs(amp) >= AMPLITUDE_FLOOR}
        if not live:
            continue
        if ball not in ancestors and len(live) == 1:
            out.extend(CharAtom(amp, s, ball) for s, amp in live.items())
            continue
        count += ball.p * len(live)
        if count > budget:
            raise RefinementBudgetExceeded(f"canonicalization needs more than {budget} atoms")
        for child in ball.split():
            if child not in pending:
                pending[child] = []
                heapq.heappush(heap, (-child.radius_log, tick, child))
                tick += 1
            pending[child].extend(CharAtom(amp, s, child).canonical() for s, amp in live.items())
    out.sort(key=_canonical_atom_order)
    return LCFunction(out, p)


def evaluate(f: LCFunction, x: PAdic) -> complex:
    """Pointwise value: sum of the atoms whose support contains ``x``."""
    total = 0j
    for a in f.atoms:
        if x in a.support:
            total += a.amplitude * character(a.frequency * x)
    return total


def _atom_pair(a: CharAtom, b: CharAtom) -> complex:
    rel = ball_relation(a.support, b.support)
    if rel is BallRelation.DISJOINT:
        return 0j
    small = b.support if rel is BallRelation.SECOND_INSIDE_FIRST else a.support
    u = a.frequency - b.frequency
    # integral of chi(u x) over Ball(c, g) is chi(u c) p^g when |u| <= p^-g, else 0
    if not norm_at_most(u, -small.radius_log):
        return 0j
    return a.amplitude * b.amplitude.conjugate() * character(u * small.center) * float(small.measure())


def inner_product(f: LCFunction, g: LCFunction) -> complex:
    """``<f, g> = integral f(x) conj(g(x)) dx`` in closed form, atom pair by atom pair."""
    total = 0j
    for a in f.atoms:
        for b in g.atoms:
            total += _atom_pair(a, b)
    return total


def required_depth(f: LCFunction) -> int:
    """Smallest ``d`` such that ``f`` is constant on every coset of ``p**d Z_p``."""
    d = None
    for a in f.atoms:
        need = -a.support.radius_log
        if not a.frequency.is_zero():
            need = max(need, -a.frequency.exponent)
        d = need if d is None else max(d, need)
    return 0 if d is None else d


def _maximal_balls(balls):
    balls = sorted(set(balls), key=lambda b: -b.radius_log)
    kept: list[Ball] = []
    for b in balls:
        if not any(ball_relation(b, k) is not BallRelation.DISJOINT for k in kept):
            kept.append(b)
    return kept


def quadrature_inner_product(f: LCFunction, g: LCFunction, depth: int) -> complex:
    """Riemann sum of ``f * conj(g)`` over the cosets of ``p**depth Z_p``.

    One sample per coset, taken at its canonical center. The sum is exact
    when both functions are constant on those cosets, which is what the
    ``depth`` check enforces; it never uses the closed-form ball integral.
    """
    need = max(required_depth(f), required_depth(g))
    if depth < need:
        raise DepthTooCoarse(f"depth {depth} is coarser than required depth {need}")
    cell = float(Fraction(f.p) ** (-depth))
    total = 0j
    for ball in _maximal_balls(a.support for a in f.atoms):
        for c in cosets(ball, -depth):
            x = c.center
            fx = evaluate(f, x)
            if fx == 0:
                continue
            total += fx * evaluate(g, x).conjugate() * cell
    return total


def dilate_translate(f: LCFunction, j: int, a: PAdic) -> LCFunction:
    """``x -> p**(j/2) f(p**-j x - a)``, computed atom by atom."""
    p = f.p
    scale = p ** (j / 2)
    out = []
    for atom in f.atoms:
        amp = atom.amplitude * scale * character(-(atom.frequency * a))
        freq = atom.frequency.shift(-j)
        support = Ball((atom.support.center + a).shift(j), atom.support.radius_log - j)
        out.append(CharAtom(amp, freq, support).canonical())
    return LCFunction(out, p)


def function_to_json(f: LCFunction) -> list:
    return [
        {
            "amplitude": [a.amplitude.real, a.amplitude.imag],
            "frequency": format_padic(a.frequency),
            "ball": {"center": format_padic(a.support.center), "radiusLog": a.support.radius_log},
        }
        for a in f.atoms
    ]


def function_from_json(data, p: int | None = None) -> LCFunction:
    atoms = []
    for item in data:
        re_, im_ = item["amplitude"]
        s = parse_padic(item["frequency"], p)
        c = parse_padic(item["ball"]["center"], s.p)
        atoms.append(CharAtom(complex(re_, im_), s, Ball(c, int(item["ball"]["radiusLog"]))))
    if not atoms and p is None:
        raise PAdicError("empty function needs an explicit prime")
    return LCFunction(atoms, p if p is not None else atoms[0].p)


def dumps(f: LCFunction) -> str:
    return json.dumps(function_to_json(f))


def loads(text: str, p: int | None = None) -> LCFunction:
    return function_from_json(json.loads(text), p)
