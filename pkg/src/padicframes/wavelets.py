"""Generator sets and finite multiframelet families ``{f^(l)_{j,a}}``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import PAdicError
from .functions import CharAtom, LCFunction, dilate_translate, function_from_json, function_to_json
from .padic import Ball, PAdic, Prime, format_padic


def fractions_with_exact_depth(p: int, m: int) -> list[PAdic]:
    """``J_{p,m}``: the numbers ``N / p**m`` with ``0 < N < p**m`` and ``p`` not dividing ``N``.

    These are exactly the sums ``s_{-m}/p**m + ... + s_{-1}/p`` with ``s_{-m} != 0``,
    listed in increasing order.
    """
    if m < 1:
        raise PAdicError("m must be >= 1")
    return [PAdic(p, n, -m) for n in range(1, p**m) if n % p]


def enumerate_translations(p: int, m: int) -> list[PAdic]:
    """Translations ``{0} ∪ J_{p,1} ∪ ... ∪ J_{p,m}``, sorted ascending; ``p**m`` of them."""
    if m < 0:
        raise PAdicError("translation depth must be >= 0")
    return [PAdic(p, n, -m) for n in range(p**m)]


@dataclass
class GeneratorSet:
    p: int
    kind: str
    generators: list[LCFunction]
    m: int | None = None

    @property
    def order(self) -> int:
        return len(self.generators)


def kozyrev_generators(p: int) -> GeneratorSet:
    """``theta_k(x) = chi_p(k x / p) 1_{Z_p}(x)`` for ``k = 1 .. p-1``."""
    p = Prime(p)
    zp = Ball(PAdic(p), 0)
    gens = [LCFunction([CharAtom(1.0, PAdic(p, k, -1), zp)], p) for k in range(1, p)]
    return GeneratorSet(p, "kozyrev", gens)


def khrennikov_shelkovich_generators(p: int, m: int) -> GeneratorSet:
    """One generator ``chi_p(s x) 1_{Z_p}(x)`` per ``s`` in ``J_{p,m}``."""
    p = Prime(p)
    zp = Ball(PAdic(p), 0)
    gens = [LCFunction([CharAtom(1.0, s, zp)], p) for s in fractions_with_exact_depth(p, m)]
    return GeneratorSet(p, "ks", gens, m)


def custom_generators(functions, p: int | None = None) -> GeneratorSet:
    functions = list(functions)
    if not functions:
        raise PAdicError("a custom generator set needs at least one function")
    p = Prime(p if p is not None else functions[0].p)
    return GeneratorSet(p, "custom", functions)


def load_generators(path) -> GeneratorSet:
    """Read generators stored as a JSON list of functions, or ``{"generators": [...]}``."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data["generators"]
    return custom_generators(function_from_json(item) for item in data)


def save_generators(gen: GeneratorSet, path):
    with open(path, "w") as fh:
        json.dump({"generators": [function_to_json(g) for g in gen.generators]}, fh)


@dataclass
class IndexSet:
    j_min: int
    j_max: int
    m: int
    l_set: list[int] | None = None  # None means every generator

    def __post_init__(self):
        if self.j_min > self.j_max:
            raise PAdicError(f"empty j range [{self.j_min}, {self.j_max}]")
        if self.m < 0:
            raise PAdicError("translation depth must be >= 0")

    def js(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def ls(self, order: int) -> list[int]:
        if self.l_set is None:
            return list(range(1, order + 1))
        bad = [l for l in self.l_set if not 1 <= l <= order]
        if bad:
            raise PAdicError(f"generator indices {bad} outside 1..{order}")
        return sorted(set(self.l_set))


@dataclass(frozen=True)
class FamilyEntry:
    l: int
    j: int
    a: PAdic
    function: LCFunction = field(compare=False)

    @property
    def label(self) -> str:
        return f"(l={self.l}, j={self.j}, a={self.a.to_fraction()})"


@dataclass
class FrameFamily:
    entries: list[FamilyEntry]
    generators: GeneratorSet | None = None
    index: IndexSet | None = None

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def functions(self) -> list[LCFunction]:
        return [e.function for e in self.entries]

    @property
    def p(self) -> int:
        return self.entries[0].function.p

    def manifest(self) -> dict:
        gen, idx = self.generators, self.index
        return {
            "p": int(gen.p) if gen else int(self.p),
            "kind": gen.kind if gen else "custom",
            "m": idx.m if idx else None,
            "jRange": [idx.j_min, idx.j_max] if idx else None,
            "count": len(self.entries),
            "entries": [[e.l, e.j, format_padic(e.a)] for e in self.entries],
        }


def build_family(gen: GeneratorSet, idx: IndexSet) -> FrameFamily:
    """Materialize every ``(l, j, a)`` member, ordered lexicographically by ``(l, j, a)``."""
    translations = enumerate_translations(gen.p, idx.m)
    entries = []
    for l in idx.ls(gen.order):
        g = gen.generators[l - 1]
        for j in idx.js():
            for a in translations:
                entries.append(FamilyEntry(l, j, a, dilate_translate(g, j, a)))
    return FrameFamily(entries, gen, idx)


def family_from_functions(functions) -> FrameFamily:
    """Wrap loose functions as a family with trivial labels ``(i+1, 0, 0)``."""
    functions = list(functions)
    return FrameFamily([FamilyEntry(i + 1, 0, PAdic(f.p), f) for i, f in enumerate(functions)])
