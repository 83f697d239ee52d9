from fractions import Fraction

import pytest

from gnprove.autoseq import state_sets_step
from gnprove.bipoly import BiPoly
from gnprove.christol import christol_automaton
from gnprove.fields import field_make
from gnprove.guess import GuessFailure
from gnprove.messages import Status
from gnprove.relations import (Coef, IndexExpr, ParamSpec, RelationTemplate, SliceRelation, SliceTerm, TwoAdic,
                               UnsupportedPattern, check_regex_conditions, compile_to_word_conditions, fit_coefficient,
                               guess_slice_relation, language_condition, settles_from, split_block,
                               verify_word_conditions)
from gnprove.series import solve_unique_series

U = IndexExpr.unit('u', 1)


@pytest.fixture(scope="module")
def f2():
    return field_make(2, 1)


@pytest.fixture(scope="module")
def catalan(f2):
    # ones exactly at n = 2^k - 1
    P = BiPoly.parse("x y^2 + y + 1", f2)
    series = solve_unique_series(P, (1,), 256)
    return series.coeffs, christol_automaton(P, (1,), affine=True)


def _rel(f2, terms, lo, hi, start=0):
    one = Coef(f2, f2.one)
    return SliceRelation("C", ParamSpec(start, 1), lo, hi,
                         tuple(SliceTerm(one, s, a, b) for s, a, b in terms), ground=f2)


def test_index_expr_arithmetic():
    e = U * 2 - 1
    assert e.text == "2u - 1"
    assert e.at(3) == 15
    assert (e + 1).key == (2, 0)
    assert e.advance(1).at(2) == e.at(3)
    with pytest.raises(UnsupportedPattern):
        IndexExpr(Fraction(1, 3), Fraction(0)).at(1)


def test_settles_from():
    assert settles_from(IndexExpr.const(5), U) == 3
    assert settles_from(U, U + 1) == 0


def test_two_adic_digits():
    third = TwoAdic.of(Fraction(1, 3))
    assert (third.prefix, third.cycle) == ((1,), (1, 0))
    assert [third.digit(i) for i in range(5)] == [1, 1, 0, 1, 0]
    assert TwoAdic.of(Fraction(-1)).digit(7) == 1
    with pytest.raises(UnsupportedPattern):
        TwoAdic.of(Fraction(1, 2))


def test_split_block():
    q, r = split_block(U * 2 - 1)
    assert q == 1
    assert r.key == (1, -1)


def test_param_spec():
    p = ParamSpec(3, 2)
    assert p.values(3) == [3, 5, 7]
    assert p.first_at_least(4) == 5
    assert not p.contains(4)
    assert ParamSpec.from_dict(p.to_dict()) == p


def test_fit_coefficient_frobenius_orbit():
    f4 = field_make(2, 2)
    g = f4.gen.value
    values = {N: f4.frob(g, N) for N in range(4)}
    coef = fit_coefficient(f4, values)
    assert all(coef.at(N) == v for N, v in values.items())
    assert coef.period == 2
    assert fit_coefficient(f4, {1: 1, 2: 1}).is_one()
    with pytest.raises(GuessFailure):
        fit_coefficient(f4, {0: g, 1: g, 2: f4.add(g, 1)})


def test_coef_cancels():
    f4 = field_make(2, 2)
    c = Coef(f4, 0, ((f4.gen.value, 0),))
    assert (c + c).is_zero()


def test_direct_check(f2, catalan):
    coeffs, _ = catalan
    good = _rel(f2, [(U * 2, U, U * 2)], U * 2, U * 4)
    bad = _rel(f2, [(U, IndexExpr.const(0), U)], U, U * 2)
    assert all(good.holds_at(N, coeffs) for N in range(6))
    assert bad.holds_at(0, coeffs)
    assert not bad.holds_at(1, coeffs)


def test_relation_proved_on_automaton(f2, catalan):
    _, d = catalan
    rel = _rel(f2, [(U * 2, U, U * 2)], U * 2, U * 4)
    compiled = compile_to_word_conditions(rel)
    assert compiled.valid_from == 0
    check = verify_word_conditions(d, compiled)
    assert check.status is Status.PASSED
    assert check.repeat is not None
    assert check.to_dict()['status'] == Status.PASSED.label


def test_single_threshold_follows_the_set_trace(f2, catalan):
    _, d = catalan
    compiled = compile_to_word_conditions(_rel(f2, [(U * 2, U, U * 2)], U * 2, U * 4))
    assert len(compiled.thresholds) == 1
    check = verify_word_conditions(d, compiled)
    assert check.ok
    assert [w["N"] for w in check.witness] == check.checked
    trace = state_sets_step(d, stride=1, start_length=0)
    for w in check.witness:
        entry = trace.entry_for(w["N"])
        assert (w["pointer"], w["states"]) == (entry.pointer, sorted(entry.states))


def test_regex_conditions(f2, catalan):
    # all-ones words stay all-ones after one more 1
    _, d = catalan
    check = check_regex_conditions(d, [language_condition(f2, "1^+", ("1", ""))])
    assert check.ok
    assert check.witness[0]["condition"] == "tau(A(s,1)) + tau(s) = 0 on w in 1^+"
    check = check_regex_conditions(d, [language_condition(f2, "1^+", ("1", ""), 1)])
    assert check.status is Status.FAILED
    assert check.counterexample["condition"] == 0


def test_regex_conditions_need_regex_domains(f2, catalan):
    _, d = catalan
    compiled = compile_to_word_conditions(_rel(f2, [(U * 2, U, U * 2)], U * 2, U * 4))
    with pytest.raises(UnsupportedPattern):
        check_regex_conditions(d, compiled.conditions)


def test_false_relation_has_counterexample(f2, catalan):
    _, d = catalan
    rel = _rel(f2, [(U, IndexExpr.const(0), U)], U, U * 2)
    check = verify_word_conditions(d, compile_to_word_conditions(rel))
    assert check.status is Status.FAILED
    assert check.counterexample['N'] == 1


def test_half_block_thresholds_rejected(f2):
    half = IndexExpr.unit('u', Fraction(1, 2))
    rel = _rel(f2, [(U, half, U)], U, U * 2)
    with pytest.raises(UnsupportedPattern):
        compile_to_word_conditions(rel)


def test_guess_slice_relation(f2, catalan):
    coeffs, _ = catalan
    template = RelationTemplate(U * 2, U * 4, ((U * 2, U, U * 2), (U * 2, IndexExpr.const(0), U)))
    rel = guess_slice_relation("C", f2, template, ParamSpec(2, 1), lambda N: coeffs, [2, 3, 4])
    assert rel.kind == 'slice'
    assert len(rel.terms) == 1
    assert rel.terms[0].coef.is_one()
    assert rel.terms[0].lo.key == U.key
    assert SliceRelation.from_dict(rel.to_dict(), f2).text() == rel.text()
