import pytest

from gnprove.fields import field_make
from gnprove.poly import RatFunc, UniPoly
from gnprove.textfmt import ParseError, evaluate, tokenize


@pytest.fixture
def f2():
    return field_make(2, 1)


@pytest.fixture
def f4():
    return field_make(2, 2)


def test_tokenize_positions():
    kinds = [(k, v, p) for k, v, p in tokenize("x^12 + a")]
    assert kinds[0] == ('SYM', 'x', 0)
    assert kinds[2] == ('INT', 12, 2)
    assert kinds[-1][0] == 'END'


def test_unexpected_character():
    with pytest.raises(ParseError) as err:
        tokenize("x + $")
    assert err.value.position == 4


def test_juxtaposition_multiplies(f4):
    p = UniPoly.parse("(u + 1)x^2 + u x", f4)
    assert p.coeffs == (0, 2, 3)


def test_brace_exponents_and_minus(f2):
    assert UniPoly.parse("x^{3} - x", f2) == UniPoly.parse("x^3 + x", f2)


def test_integer_literals_reduce_mod_two(f2):
    assert UniPoly.parse("3x + 2", f2) == UniPoly.x(f2)


def test_negative_exponent_gives_rational_function(f2):
    r = RatFunc.parse("x^-2 + 1", f2)
    assert r.den == UniPoly.parse("x^2", f2)
    assert r.num == UniPoly.parse("x^2 + 1", f2)


@pytest.mark.parametrize("text", ["", "x +", "(x + 1", "x^y", "q"])
def test_malformed(text, f2):
    with pytest.raises(ParseError):
        UniPoly.parse(text, f2)


def test_division_by_zero(f4):
    with pytest.raises(ParseError, match="division by zero"):
        evaluate("u/0", {'u': f4.gen}, one=f4.gen ** 0)
