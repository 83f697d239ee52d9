import pytest

from gnprove.bipoly import BiPoly, BiPolyError, bipoly_gcd, exact_divide, is_irreducible, multiplicity, pseudo_remainder
from gnprove.fields import RationalFunctionField, field_make
from gnprove.poly import UniPoly


@pytest.fixture
def f2():
    return field_make(2, 1)


def B(text, fld):
    return BiPoly.parse(text, fld)


def test_to_text_round_trip(f2):
    text = "y^4 + x^3y^2 + (x^5 + x^4)y + x^3 + x^2 + 1"
    p = B(text, f2)
    assert p.ydeg == 4
    assert p.xdeg == 5
    assert p.to_text() == text
    assert BiPoly.parse(p.to_text('z', 'w'), f2, 'z', 'w') == p


def test_from_terms(f2):
    p = BiPoly.from_terms(f2, {0: UniPoly.parse("x + 1", f2), 3: UniPoly.parse("x", f2)})
    assert p == B("x y^3 + x + 1", f2)
    assert p.coeff(1) == UniPoly.zero(f2)
    assert sorted(p.terms()) == [0, 3]


def test_arithmetic(f2):
    a = B("y + x", f2)
    b = B("y + x + 1", f2)
    assert a * b == B("y^2 + y + x^2 + x", f2)
    assert (a * b) / a == b
    with pytest.raises(BiPolyError):
        b / B("y + 1", f2)


def test_normalize_is_primitive_and_monic(f2):
    p = B("(x + 1)(x y^2 + y)", f2)
    assert p.normalize() == B("x y^2 + y", f2)
    f4 = field_make(2, 2)
    q = BiPoly.parse("u x y + u", f4)
    assert q.normalize() == BiPoly.parse("x y + 1", f4)


def test_frob_and_reverse(f2):
    f4 = field_make(2, 2)
    p = BiPoly.parse("u x y + x^2", f4)
    assert p.frob(1) == BiPoly.parse("(u + 1) x y + x^2", f4)
    assert B("x^2 y + x", f2).reverse_x() == B("y + x", f2)


def test_eval_y(f2):
    p = B("y^2 + x y + 1", f2)
    assert p.eval_y(UniPoly.parse("x + 1", f2)) == UniPoly.parse("x", f2)


def test_deflate_inflate(f2):
    p = B("y^4 + x y^2 + 1", f2)
    assert p.y_exponent_gcd() == 2
    assert p.deflate(2) == B("y^2 + x y + 1", f2)
    assert p.deflate(2).inflate(2) == p


def test_multiplicity(f2):
    q = B("y + x", f2)
    p = q * q * q * B("y + 1", f2)
    m, rest = multiplicity(p, q)
    assert m == 3
    assert rest == B("y + 1", f2)
    assert exact_divide(B("y + 1", f2), q) is None


@pytest.mark.parametrize("text,expected", [
    ("y + x", True),
    ("y^2 + x", True),
    ("y^2 + x^2", False),
    ("y^2 + y + x", True),
    ("y^2 + y + x^2 + x", False),
    ("x y^3 + y + x", True),
])
def test_irreducibility(text, expected, f2):
    assert is_irreducible(B(text, f2)) is expected


def test_constant_in_y_is_not_irreducible(f2):
    assert is_irreducible(B("x + 1", f2)) is False


def test_symbolic_irreducibility():
    K = RationalFunctionField('a')
    assert is_irreducible(BiPoly.parse("y^2 + y + a x", K)) is True


def test_pseudo_remainder(f2):
    a = B("y^2 + x", f2)
    b = B("x y + 1", f2)
    # x^2 (y^2 + x) = (x y + 1)(x y + 1) + x^3 + 1
    assert pseudo_remainder(a, b) == B("x^3 + 1", f2)
    with pytest.raises(ZeroDivisionError):
        pseudo_remainder(a, BiPoly(f2))


def test_gcd(f2):
    c = B("x y^2 + y + 1", f2)
    assert bipoly_gcd(c * B("y + x", f2), c * B("y + 1", f2)) == c.normalize()
    assert bipoly_gcd(c * B("(x + 1) y + 1", f2), c) == c.normalize()
    assert bipoly_gcd(B("y + x", f2), B("y + 1", f2)) == BiPoly.one(f2)


def test_gcd_drops_factors_free_of_y(f2):
    c = B("y^2 + x", f2)
    assert bipoly_gcd(B("(x + 1)(y^2 + x)", f2), B("x(y^2 + x)", f2)) == c.normalize()
