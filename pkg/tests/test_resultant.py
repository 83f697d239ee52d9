import random

import pytest

from gnprove.bipoly import BiPoly
from gnprove.fields import field_make
from gnprove.poly import UniPoly
from gnprove.resultant import ResultantError, res_formal, resultant_elim, resultant_z, shifted_coeffs


@pytest.fixture
def f2():
    return field_make(2, 1)


def X(text, fld):
    return UniPoly.parse(text, fld)


def test_linear_resultant(f2):
    # Res_z(x + z, 1 + x z) = x^2 + 1
    assert resultant_elim([X("x", f2), X("1", f2)], [X("1", f2), X("x", f2)]) == X("x^2 + 1", f2)


def test_constant_cases(f2):
    assert resultant_elim([X("x", f2)], [X("1", f2), X("1", f2), X("1", f2)]) == X("x^2", f2)
    with pytest.raises(ResultantError):
        resultant_elim([X("x", f2)], [X("1", f2)])
    with pytest.raises(ResultantError):
        resultant_elim([], [X("1", f2)])


def test_res_formal_matches_elimination():
    f8 = field_make(2, 3)
    rng = random.Random(5)
    for _ in range(20):
        a = [f8.random(rng) for _ in range(4)] + [f8.random(rng, nonzero=True)]
        b = [f8.random(rng) for _ in range(3)] + [f8.random(rng, nonzero=True)]
        expected = resultant_elim([f8(v) for v in a], [f8(v) for v in b])
        assert res_formal(f8, a, b) == expected.value


def test_common_root_gives_zero():
    f4 = field_make(2, 2)
    u = f4.gen.value
    # both vanish at z = u
    a = [f4.mul(u, u), 0, 1]            # z^2 + u^2
    b = [u, 1]                          # z + u
    assert res_formal(f4, a, b) == 0


def test_shifted_coeffs(f2):
    phi = BiPoly.parse("y^3 + x y + 1", f2)
    # phi(y + z) = z^3 + y z^2 + (y^2 + x) z + y^3 + x y + 1
    out = shifted_coeffs(phi)
    assert out[0] == phi
    assert out[1] == BiPoly.parse("y^2 + x", f2)
    assert out[2] == BiPoly.parse("y", f2)
    assert out[3] == BiPoly.one(f2)


@pytest.mark.parametrize("fld_m", [1, 2])
def test_modular_route_matches_elimination(fld_m):
    fld = field_make(2, fld_m)
    a = [X(t, fld) for t in ("x^2 + 1", "x", "1")]
    phi = BiPoly.parse("(x + 1) y^2 + x y + 1", fld)
    b = shifted_coeffs(phi)
    assert resultant_z(a, b, 'auto') == resultant_z(a, b, 'elim')


def test_zero_input(f2):
    with pytest.raises(ResultantError):
        resultant_z([UniPoly.zero(f2)], [BiPoly.one(f2)])
