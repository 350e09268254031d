import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from involmod.errors import (
    ForbiddenSpecialization, NotDivisible, NotInvertible, PositiveExponentPresent,
)
from involmod.exactring import (
    LaurentPoly, Localized, Residue, check_parameter, eval_at_u_inverse_zero,
    eval_at_u_zero, specialize, unit_split,
)

u = LaurentPoly.u()
ONE = LaurentPoly.const(1)

polys = st.dictionaries(st.integers(-8, 8), st.integers(-99, 99), max_size=6).map(LaurentPoly)
small_polys = st.dictionaries(st.integers(-3, 3), st.integers(-9, 9), max_size=4).map(LaurentPoly)


def test_zero_coefficients_dropped():
    p = LaurentPoly({0: 0, 2: 3, -1: 0})
    assert p.coeffs == {2: 3}
    assert not LaurentPoly({1: 0})


def test_ring_examples():
    assert Localized(u + 1) * (1 / Localized(u + 1)) == 1
    assert Localized(u * u - 1) / Localized(u + 1) == Localized(u - 1)
    assert (u + 1) + (u - 1) == 2 * u


def test_bar_examples():
    assert u.bar() == LaurentPoly({-1: -1})
    assert (u + 1).bar() == LaurentPoly({-1: -1, 0: 1})
    assert (u * u).bar() == LaurentPoly({-2: 1})


def test_bar_involution_random_sample():
    rng = random.Random(0)
    for _ in range(1000):
        p = LaurentPoly({rng.randint(-8, 8): rng.randint(-99, 99) for _ in range(rng.randint(0, 6))})
        assert p.bar().bar() == p


@given(polys, polys)
def test_bar_is_ring_homomorphism(p, q):
    assert (p * q).bar() == p.bar() * q.bar()
    assert (p + q).bar() == p.bar() + q.bar()


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p - p == LaurentPoly()


@given(small_polys, st.integers(0, 3), st.integers(0, 3))
def test_normal_form_uniqueness(p, a, b):
    if not p or p.value_at_sign(-1) == 0 or p.value_at_sign(1) == 0:
        return
    x = Localized(p * (u + 1), a + 1, b)
    assert (x.num, x.a, x.b) == (p, a, b)
    y = Localized(p * (u - 1) ** 2, a, b + 2)
    assert (y.num, y.a, y.b) == (p, a, b)


@given(small_polys, small_polys)
def test_exact_division_roundtrip(p, q):
    if not q:
        return
    assert (p * q).exact_div(q) == p


def test_exact_division_errors():
    with pytest.raises(NotDivisible):
        (u + 2).exact_div(u + 3)
    with pytest.raises(NotDivisible):
        Localized(1) / Localized(u + 2)
    with pytest.raises(ZeroDivisionError):
        Localized(1) / Localized(0)


def test_localized_membership():
    x = Localized(u, 2, 0)
    assert x.in_A_minus1() and not x.in_A_plus1() and not x.is_laurent()
    assert Localized(u ** -3 * (u + 1) * (u - 1)).is_unit()
    assert not Localized(u + 2).is_unit()


def test_unit_split():
    p = -(u ** -2) * (u + 1) ** 3 * (u - 1) * (u + 2)
    sign, k, (c, d), rest = unit_split(p)
    assert (sign, k, c, d) == (-1, -2, 3, 1)
    assert rest == u + 2


def test_specialize_examples():
    lam = Fraction(2)
    assert specialize(Localized(u + 1), lam) == 3
    assert specialize(Localized(1, a=1), lam) == Fraction(1, 3)
    with pytest.raises(ForbiddenSpecialization):
        specialize(Localized(u), Fraction(1))
    for bad in (0, -1):
        with pytest.raises(ForbiddenSpecialization):
            check_parameter(Fraction(bad))
    with pytest.raises(ForbiddenSpecialization):
        check_parameter(Residue(6, 7))
    with pytest.raises(ForbiddenSpecialization):
        check_parameter(Residue(2, 3))


def test_specialize_denominator_vanishing_mod_p():
    # (u+1)^-1 at lambda = 4 in F_5: 4 + 1 = 0
    with pytest.raises((NotInvertible, ForbiddenSpecialization)):
        specialize(Localized(1, a=1), Residue(4, 5))


localized = st.builds(lambda p, a, b: Localized(p, a, b), small_polys, st.integers(0, 2), st.integers(0, 2))


@given(localized, localized, st.sampled_from([Fraction(2), Fraction(-1, 2), Fraction(5, 7), Fraction(-3)]))
def test_specialize_homomorphism_rationals(x, y, lam):
    assert specialize(x * y, lam) == specialize(x, lam) * specialize(y, lam)
    assert specialize(x + y, lam) == specialize(x, lam) + specialize(y, lam)


@given(localized, localized, st.sampled_from([2, 3, 4]))
@settings(max_examples=60)
def test_specialize_homomorphism_f7(x, y, v):
    lam = Residue(v, 7)
    assert specialize(x * y, lam) == specialize(x, lam) * specialize(y, lam)
    assert specialize(x + y, lam) == specialize(x, lam) + specialize(y, lam)


def test_residue_field():
    a = Residue(3, 7)
    assert a * a.inverse() == Residue(1, 7)
    assert a / 3 == Residue(1, 7)
    with pytest.raises(ZeroDivisionError):
        Residue(0, 7).inverse()
    with pytest.raises(ValueError):
        Residue(1, 8)


def test_eval_at_u_inverse_zero():
    assert eval_at_u_inverse_zero(LaurentPoly({-1: -1, 0: 1})) == 1
    assert eval_at_u_inverse_zero(LaurentPoly({-1: 1})) == 0
    with pytest.raises(PositiveExponentPresent):
        eval_at_u_inverse_zero(u + 1)
    assert eval_at_u_zero(u * u + u + 5) == 5


def test_string_format_ascending():
    assert str(LaurentPoly({-1: 1, 0: 1, 1: -1})) == "u^{-1}+1-u"
    assert str(LaurentPoly()) == "0"
    assert str(Localized(1, a=1)) == "(1)/(u+1)"


@given(polys)
def test_json_roundtrip(p):
    assert LaurentPoly.from_json(p.to_json()) == p


@given(localized)
def test_localized_json_roundtrip(x):
    assert Localized.from_json(x.to_json()) == x


def test_big_integer_coefficients_serialized_as_strings():
    p = LaurentPoly({3: 10 ** 40})
    assert p.to_json() == [[3, str(10 ** 40)]]
    assert (p * p).coeff(6) == 10 ** 80
