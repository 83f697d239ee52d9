import pytest

from gnprove.bipoly import BiPoly
from gnprove.christol import (KernelOverflow, NormalizationError, cartier_apply, christol_automaton, christol_run,
                              initial_rep, kernel_closure, normalize_equation)
from gnprove.fields import field_make
from gnprove.fixtures import load_equation_file, load_equations
from gnprove.poly import RatFunc, UniPoly
from gnprove.series import solve_unique_series


@pytest.fixture
def f2():
    return field_make(2, 1)


@pytest.fixture
def catalan(f2):
    return BiPoly.parse("x y^2 + y + 1", f2)


def test_normalize_catalan(f2, catalan):
    eq = normalize_equation(catalan, affine=True)
    assert set(eq.terms) == {1}
    assert eq.terms[1] == RatFunc(UniPoly(f2, [0, 1]), UniPoly(f2, [1]))
    assert eq.affine == RatFunc.one(f2)
    assert eq.to_text().startswith("T = ")


def test_normalize_needs_degree_two(f2):
    with pytest.raises(NormalizationError):
        normalize_equation(BiPoly.parse("(x + 1) y + 1", f2))


def test_catalan_parity_automaton(catalan):
    result = christol_run(catalan, (1,), affine=True)
    assert result.minimal.size == 3
    assert len(result.closure.trace_lines()) == len(result.closure.states)
    f = solve_unique_series(catalan, (1,), 64)
    for n in range(64):
        assert result.minimal(n) == f.coeffs[n], n
        assert result.automaton(n) == f.coeffs[n], n


def test_kernel_overflow(catalan):
    eq = normalize_equation(catalan, affine=True)
    with pytest.raises(KernelOverflow):
        kernel_closure(eq, max_states=1)


def test_cartier_digit_range(catalan):
    eq = normalize_equation(catalan, affine=True)
    with pytest.raises(ValueError):
        cartier_apply(initial_rep(eq), 2, eq)


def test_automaton_over_f4():
    f4 = field_make(2, 2, 'default', 'a')
    P = BiPoly.parse("(x^2 + a x) y^3 + y + a + x", f4)
    init = (f4.parse("a").value,)
    d = christol_automaton(P, init, affine=True)
    f = solve_unique_series(P, init, 128)
    for n in range(128):
        assert d(n) == f.coeffs[n], n


@pytest.fixture
def cubic_f4(isolated_settings):
    return load_equation_file(isolated_settings.fixtures_dir() / "cubic_f4.eq")


def test_cubic_f4_normal_form(cubic_f4):
    _, P, _ = cubic_f4
    eq = normalize_equation(P)
    assert eq.to_text() == "T = (1/(x + a))*T^2 + x*T^4"
    assert not eq.affine


def test_cubic_f4_kernel(cubic_f4):
    _, P, _ = cubic_f4
    closure = kernel_closure(normalize_equation(P))
    assert closure.initial.to_text() == "({0: 1}, 0)"
    texts = {s.to_text() for s in closure.states}
    assert {"({0: a/(x + (a + 1))}, 1)", "({0: a/(x + a), 1: ax/(x + a)}, 0)"} <= texts


def test_cubic_f4_minimal_automaton(cubic_f4):
    _, P, init = cubic_f4
    assert christol_run(P, init).minimal.size == 223


def _synthetic(text, m, init):
    fld = field_make(2, m, 'default', 'a')
    return BiPoly.parse(text, fld), tuple(fld.parse(v).value for v in init)


def _shipped(name):
    def load(fixtures):
        eq = load_equations(fixtures / "pd_z2_z.txt", field_make(2, 1))[name]
        return eq.phi, eq.init
    return load


@pytest.mark.parametrize("source", [
    lambda fixtures: load_equation_file(fixtures / "cubic_f4.eq")[1:],
    _shipped("A^e[0,0]"),
    _shipped("A^o[1,1]"),
    _shipped("A^e[1,1]"),
    _shipped("A^o[0,0]"),
    lambda fixtures: _synthetic("x y^2 + y + 1", 1, ["1"]),
    lambda fixtures: _synthetic("x y^3 + y + 1", 1, ["1"]),
    lambda fixtures: _synthetic("x^2 y^4 + x y^2 + y + 1", 1, ["1"]),
    lambda fixtures: _synthetic("x y^2 + a x^2 y + y + 1", 2, ["1"]),
    lambda fixtures: _synthetic("x y^2 + y + a", 3, ["a"]),
], ids=["cubic_f4", "pd_ae00", "pd_ao11", "pd_ae11", "pd_ao00", "catalan", "cubic", "quartic", "f4", "f8"])
def test_automaton_generates_the_root(source, isolated_settings):
    P, init = source(isolated_settings.fixtures_dir())
    d = christol_automaton(P, init, affine=bool(P.coeff(0)))
    f = solve_unique_series(P, init, 4096)
    assert all(d(n) == f.coeffs[n] for n in range(4096))
