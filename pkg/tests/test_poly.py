import random

import pytest

from gnprove.fields import RationalFunctionField, field_make
from gnprove.poly import (PolyError, RatFunc, UniPoly, distinct_degree, factor_squarefree, gcd, is_irreducible,
                          is_squarefree, roots, xgcd)


@pytest.fixture
def f2():
    return field_make(2, 1)


@pytest.fixture
def f4():
    return field_make(2, 2)


def P(text, fld, var='x'):
    return UniPoly.parse(text, fld, var)


def test_trailing_zeros_are_trimmed(f2):
    p = UniPoly(f2, [1, 0, 1, 0, 0])
    assert p.deg == 2
    assert UniPoly.zero(f2).deg == -1


def test_to_text_round_trip(f4):
    p = P("x^3 + (u + 1)x + u", f4)
    assert p.to_text() == "x^3 + (u + 1)x + u"
    assert P(p.to_text('z'), f4, 'z') == p


def test_bits(f2):
    p = UniPoly.from_bits(f2, 0b1011)
    assert p == P("x^3 + x + 1", f2)
    assert p.to_bits() == 0b1011


def test_to_bits_rejects_extension_coefficients(f4):
    with pytest.raises(PolyError):
        P("u x", f4).to_bits()


@pytest.mark.parametrize("fld_m", [1, 2, 3])
def test_divmod(fld_m):
    fld = field_make(2, fld_m)
    rng = random.Random(fld_m)
    for _ in range(10):
        a = UniPoly(fld, [fld.random(rng) for _ in range(9)])
        b = UniPoly(fld, [fld.random(rng) for _ in range(4)] + [1])
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.deg < b.deg


def test_square_and_power(f4):
    p = P("x^2 + u x + 1", f4)
    assert p.square() == p * p
    assert p ** 4 == p.square().square()
    assert p ** 0 == UniPoly.one(f4)


def test_shift_and_reverse(f2):
    p = P("x^2 + 1", f2)
    assert p.shift(3) == P("x^5 + x^3", f2)
    assert p.shift(3).shift(-3) == p
    assert P("x^2 + x", f2).reverse() == P("x + 1", f2)
    assert P("x + 1", f2).reverse(3) == P("x^3 + x^2", f2)
    with pytest.raises(PolyError):
        UniPoly.zero(f2).reverse()


def test_gcd_and_xgcd(f4):
    a = P("(x + u)(x + 1)(x^2 + x + u)", f4)
    b = P("(x + u)(x^2 + 1)", f4)
    g = gcd(a, b)
    assert g == P("(x + u)(x + 1)", f4)
    g2, s, t = xgcd(a, b)
    assert g2 == g
    assert s * a + t * b == g


def test_derivative_char_two(f2):
    assert P("x^4 + x^3 + x", f2).derivative() == P("x^2 + 1", f2)


def test_taylor_shift(f4):
    p = P("x^3 + u x + 1", f4)
    u = f4.gen.value
    shifted = p.taylor_shift(u)
    for v in range(4):
        assert shifted(v) == p(f4.add(v, u))


def test_squarefree(f2):
    assert is_squarefree(P("x^3 + x + 1", f2))
    assert not is_squarefree(P("x^2 + 1", f2))


@pytest.mark.parametrize("text,expected", [
    ("x^2 + x + 1", True),
    ("x^4 + x + 1", True),
    ("x^4 + x^2 + 1", False),
])
def test_irreducible_over_f2(text, expected, f2):
    assert is_irreducible(P(text, f2)) is expected


def test_irreducibility_depends_on_field(f4):
    # x^2 + x + 1 splits over F_4
    assert not is_irreducible(P("x^2 + x + 1", f4))
    assert sorted(roots(P("x^2 + x + 1", f4))) == [2, 3]


def test_factor_squarefree(f2):
    factors = [P("x", f2), P("x + 1", f2), P("x^2 + x + 1", f2), P("x^3 + x + 1", f2)]
    prod = UniPoly.one(f2)
    for f in factors:
        prod = prod * f
    assert factor_squarefree(prod) == factors


def test_distinct_degree(f2):
    p = P("(x^2 + x + 1)(x^3 + x + 1)(x^3 + x^2 + 1)", f2)
    parts = dict((d, g) for g, d in distinct_degree(p))
    assert parts[2] == P("x^2 + x + 1", f2)
    assert parts[3].deg == 6


def test_factorization_needs_finite_field():
    K = RationalFunctionField('a')
    with pytest.raises(PolyError):
        is_irreducible(UniPoly.parse("x^2 + a", K))


class TestRatFunc:

    def test_reduced_with_monic_denominator(self, f4):
        r = RatFunc(P("u x^2 + u x", f4), P("u x + u", f4))
        assert r.den == UniPoly.one(f4)
        assert r.num == P("x", f4)

    def test_arithmetic(self, f2):
        a = RatFunc(UniPoly.one(f2), P("x + 1", f2))
        b = RatFunc(P("x", f2), P("x + 1", f2))
        assert a + b == 1
        assert (a / b) * b == a

    def test_evaluation_at_pole(self, f2):
        r = RatFunc(UniPoly.one(f2), P("x + 1", f2))
        with pytest.raises(ZeroDivisionError):
            r(1)

    def test_to_text(self, f2):
        assert RatFunc(P("x + 1", f2), P("x^2", f2)).to_text() == "(x + 1)/x^2"
