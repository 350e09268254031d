import itertools
import random

import pytest

from involmod.coxeter import (
    BACKENDS, CoxeterSpec, enumerate_group, format_word, parse_word, star_fixed_elements,
)
from involmod.errors import GroupTooLarge, InvalidCoxeterSpec, UnsupportedGroup
from involmod.hecke import HeckeAlgebra
from involmod.errors import TruncatedTable

from conftest import group


@pytest.mark.parametrize("name,order,top", [
    ("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("A4", 120, 10), ("B2", 8, 4),
    ("B3", 48, 9), ("D4", 192, 12), ("G2", 12, 6), ("I2(5)", 10, 5), ("I2(6)", 12, 6),
    ("F4", 1152, 24),
])
def test_group_orders(name, order, top):
    g = group(name)
    assert len(g) == order
    assert max(g.length) == top
    assert not g.truncated


def _same_tables(g, h):
    assert g.length == h.length
    assert g.words == h.words
    assert g.left == h.left
    assert g.right == h.right
    assert g.inverse == h.inverse
    assert g.star == h.star


@pytest.mark.parametrize("name,star,backend", [
    ("A2", None, "permutation"), ("A3", None, "permutation"), ("A3", "flip", "permutation"),
    ("A4", None, "permutation"), ("B2", None, "signed"), ("B3", None, "signed"),
    ("D4", None, "signed"), ("B2", None, "dihedral"), ("G2", None, "dihedral"),
    ("A2", None, "dihedral"),
])
def test_backends_agree(name, star, backend):
    _same_tables(group(name, star, "crystallographic"), group(name, star, backend))


def _subword_products(g, w):
    word = g.words[w]
    out = set()
    for mask in itertools.product((0, 1), repeat=len(word)):
        out.add(g.index_of_word([s for s, keep in zip(word, mask) if keep]))
    return out


@pytest.mark.parametrize("name", ["A2", "A3", "B2"])
def test_bruhat_matches_subword_oracle(name):
    g = group(name)
    for w in range(len(g)):
        below = _subword_products(g, w)
        for x in range(len(g)):
            assert g.bruhat_leq(x, w) == (x in below), (g.word_str(x), g.word_str(w))


def test_bruhat_examples():
    g = group("A2")
    assert g.bruhat_leq(g.parse_word("s1"), g.parse_word("s1s2s1"))
    assert not g.bruhat_leq(g.parse_word("s1s2"), g.parse_word("s2s1"))
    assert all(g.bruhat_leq(0, w) for w in range(len(g)))


def test_bruhat_partial_order_refines_length():
    g = group("B3")
    for x in range(len(g)):
        for w in range(len(g)):
            if g.bruhat_leq(x, w):
                assert g.length[x] <= g.length[w]
                if x != w:
                    assert not g.bruhat_leq(w, x)


@pytest.mark.parametrize("name,star", [("A3", "flip"), ("D4", (0, 1, 3, 2)), ("B3", None), ("I2(5)", "flip")])
def test_table_invariants(name, star):
    g = group(name, star)
    rng = random.Random(1)
    for w in range(len(g)):
        for s in g.generators:
            assert abs(g.length[g.left[w][s]] - g.length[w]) == 1  # exchange
        assert g.length[g.inverse[w]] == g.length[w] == g.length[g.star[w]]
        assert g.mul(w, g.inverse[w]) == 0
    for _ in range(200):
        x, y, z = (rng.randrange(len(g)) for _ in range(3))
        assert g.star[g.mul(x, y)] == g.mul(g.star[x], g.star[y])
        assert g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z))


def test_canonical_words_are_shortlex():
    g = group("A3")
    for w in range(len(g)):
        assert min(g.reduced_words(w)) == g.words[w]
        assert len(g.words[w]) == g.length[w]


def test_star_fixed_examples():
    assert len(star_fixed_elements(group("A2"))) == 6
    g = group("A2", "flip")
    assert [g.word_str(x) for x in star_fixed_elements(g)] == ["1", "s1s2s1"]
    assert [group("A1").word_str(x) for x in star_fixed_elements(group("A1"))] == ["1", "s1"]


def test_validation_messages_name_invariant():
    with pytest.raises(InvalidCoxeterSpec, match="symmetric"):
        CoxeterSpec.from_matrix([[1, 3], [4, 1]])
    with pytest.raises(InvalidCoxeterSpec, match="diagonal"):
        CoxeterSpec.from_matrix([[2, 3], [3, 1]])
    with pytest.raises(InvalidCoxeterSpec, match="incompatible"):
        CoxeterSpec.from_matrix([[1, 3, 2], [3, 1, 4], [2, 4, 1]], star=(2, 1, 0))
    with pytest.raises(InvalidCoxeterSpec, match="involution"):
        CoxeterSpec.from_matrix([[1, 2, 2], [2, 1, 2], [2, 2, 1]], star=(1, 2, 0))
    with pytest.raises(InvalidCoxeterSpec, match="mutually exclusive"):
        CoxeterSpec.from_mapping({"preset": "A2", "matrix": [[1, 3], [3, 1]]})
    with pytest.raises(InvalidCoxeterSpec, match="unknown preset"):
        CoxeterSpec.preset("Q7")


def test_from_mapping_one_based_star():
    spec = CoxeterSpec.from_mapping({"matrix": [[1, 3], [3, 1]], "star": [2, 1]})
    assert spec.star == (1, 0)
    assert spec.to_json() == {"matrix": [[1, 3], [3, 1]], "star": [2, 1]}


def test_compatible_stars():
    assert CoxeterSpec.preset("A3").compatible_stars() == [(0, 1, 2), (2, 1, 0)]
    assert len(CoxeterSpec.preset("D4").compatible_stars()) == 4
    assert CoxeterSpec.preset("B3").compatible_stars() == [(0, 1, 2)]


def test_word_parsing():
    assert parse_word("s1s2s1") == (0, 1, 0)
    assert parse_word("1,2,1") == (0, 1, 0)
    assert parse_word("1") == parse_word("e") == parse_word("") == ()
    assert format_word(()) == "1"
    with pytest.raises(ValueError):
        parse_word("s4", rank=3)


def test_unsupported_and_too_large():
    with pytest.raises(UnsupportedGroup):
        enumerate_group(CoxeterSpec.preset("H3"))
    with pytest.raises(GroupTooLarge):
        enumerate_group(CoxeterSpec.preset("~A2"), max_elements=500)
    assert set(BACKENDS) >= {"crystallographic", "dihedral", "permutation", "signed"}


def test_truncated_affine_group():
    g = enumerate_group(CoxeterSpec.preset("~A2"), max_length=4)
    assert g.truncated and g.cutoff == 4
    # growth series of affine A2 is (1+q+q^2)/(1-q)^2
    assert [g.length.count(k) for k in range(5)] == [1, 3, 6, 9, 12]
    H = HeckeAlgebra(g)
    with pytest.raises(TruncatedTable):
        H.x_empty()
    assert len(H.x_empty(allow_truncated=True)) == len(g)
    top = g.length.index(4)
    up = next(s for s in g.generators if g.left[top][s] < 0)
    with pytest.raises(TruncatedTable):
        H.mult_Ts(up, H.T(top))
