import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from padicframes.errors import PAdicError
from padicframes.frames import gram_matrix
from padicframes.functions import canonicalize, inner_product
from padicframes.padic import PAdic
from padicframes.wavelets import (
    IndexSet,
    build_family,
    custom_generators,
    enumerate_translations,
    fractions_with_exact_depth,
    khrennikov_shelkovich_generators,
    kozyrev_generators,
    load_generators,
    save_generators,
)


def brute_exact_depth(p, m):
    # digit tuples (s_-m, ..., s_-1) with a nonzero leading digit
    out = set()
    for ds in itertools.product(range(p), repeat=m):
        if ds[0] == 0:
            continue
        out.add(sum(Fraction(d, p ** (m - k)) for k, d in enumerate(ds)))
    return sorted(out)


def brute_translations(p, m):
    out = {Fraction(0)}
    for ds in itertools.product(range(p), repeat=m):
        out.add(sum(Fraction(d, p ** (m - k)) for k, d in enumerate(ds)))
    return sorted(out)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_exact_depth_matches_digit_enumeration(p, m):
    got = [x.to_fraction() for x in fractions_with_exact_depth(p, m)]
    assert got == brute_exact_depth(p, m)
    assert len(got) == (p - 1) * p ** (m - 1)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_translations_match_digit_enumeration(p, m):
    got = [x.to_fraction() for x in enumerate_translations(p, m)]
    assert got == brute_translations(p, m)
    assert len(got) == p**m and got[0] == 0


def test_translation_examples():
    assert enumerate_translations(2, 0) == [0]
    assert [x.to_fraction() for x in enumerate_translations(2, 2)] == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert [x.to_fraction() for x in enumerate_translations(3, 1)] == [0, Fraction(1, 3), Fraction(2, 3)]


def test_kozyrev_generators():
    g2 = kozyrev_generators(2)
    assert g2.order == 1
    assert g2.generators[0].atoms[0].frequency == Fraction(1, 2)
    g3 = kozyrev_generators(3)
    assert [g.atoms[0].frequency.to_fraction() for g in g3.generators] == [Fraction(1, 3), Fraction(2, 3)]
    for g in g3.generators:
        assert abs(inner_product(g, g) - 1) < 1e-15


def test_ks_generators():
    assert khrennikov_shelkovich_generators(2, 1).generators == kozyrev_generators(2).generators
    ks = khrennikov_shelkovich_generators(2, 2)
    assert [g.atoms[0].frequency.to_fraction() for g in ks.generators] == [Fraction(1, 4), Fraction(3, 4)]
    assert khrennikov_shelkovich_generators(3, 2).order == 6
    with pytest.raises(PAdicError):
        khrennikov_shelkovich_generators(3, 0)


def test_trivial_index_set_gives_generators():
    gen = khrennikov_shelkovich_generators(3, 2)
    fam = build_family(gen, IndexSet(0, 0, 0))
    assert fam.functions == [canonicalize(g) for g in gen.generators]


def test_kozyrev_family_p2():
    fam = build_family(kozyrev_generators(2), IndexSet(-1, 0, 1))
    assert len(fam) == 4
    assert [e.label for e in fam] == [
        "(l=1, j=-1, a=0)", "(l=1, j=-1, a=1/2)", "(l=1, j=0, a=0)", "(l=1, j=0, a=1/2)"]
    for f in fam.functions:
        assert abs(f.norm() - 1) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5])
def test_kozyrev_family_orthonormal(p):
    fam = build_family(kozyrev_generators(p), IndexSet(-2, 1, 2 if p < 5 else 1))
    G = gram_matrix(fam.functions)
    assert np.abs(G - np.eye(len(fam))).max() < 1e-10


def test_ks_family_orthonormal():
    fam = build_family(khrennikov_shelkovich_generators(2, 2), IndexSet(-1, 1, 2))
    G = gram_matrix(fam.functions)
    assert np.abs(G - np.eye(len(fam))).max() < 1e-10


def test_index_set_validation():
    with pytest.raises(PAdicError):
        IndexSet(1, 0, 1)
    with pytest.raises(PAdicError):
        IndexSet(0, 0, 1, l_set=[3]).ls(2)
    assert IndexSet(0, 0, 1, l_set=[2, 1, 2]).ls(2) == [1, 2]


def test_manifest():
    fam = build_family(kozyrev_generators(3), IndexSet(0, 0, 1))
    man = fam.manifest()
    assert man["count"] == 6 and man["kind"] == "kozyrev" and man["jRange"] == [0, 0]
    assert man["entries"][1] == [1, 0, "1*3^-1"]
    json.dumps(man)


def test_generator_file_round_trip(tmp_path):
    gen = khrennikov_shelkovich_generators(3, 1)
    path = tmp_path / "gens.json"
    save_generators(gen, path)
    back = load_generators(path)
    assert back.kind == "custom" and back.generators == gen.generators
    assert custom_generators(gen.generators).p == 3
