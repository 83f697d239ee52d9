import pytest

from gnprove.fields import field_make
from gnprove.induction import (InductionStep, Segment, SegPoly, ZERO, _Context, verify_symbolic_induction)
from gnprove.messages import Status
from gnprove.relations import Coef, ConstTerm, IndexExpr, ParamSpec, SliceRelation, SliceTerm

U = IndexExpr.unit('u', 1)


@pytest.fixture
def f2():
    return field_make(2, 1)


def _constant_matrix(f2, name, entries):
    one = Coef(f2, f2.one)
    out = {}
    for i in range(2):
        for j in range(2):
            consts = (ConstTerm(one, IndexExpr.const(0)),) if entries[i][j] else ()
            out[(name, i, j)] = SliceRelation(f"{name}[{i},{j}]", ParamSpec(0, 1), None, None, (), consts,
                                              ground=f2)
    return out


def test_segpoly_characteristic_two(f2):
    s = Segment('T', ZERO, U)
    p = SegPoly.monomial(f2, 1, U, (s,))
    assert not (p + p)
    sq = p * p
    assert len(sq.terms) == 1
    (exp, segs), = sq.terms
    assert exp.key == (U * 2).key
    assert segs == (s, s)


def test_reduce_segment_through_relation(f2):
    one = Coef(f2, f2.one)
    rel = SliceRelation("T", ParamSpec(0, 1), U, U * 2, (SliceTerm(one, U, IndexExpr.const(0), U),),
                        series_name='T', ground=f2)
    ctx = _Context(f2, 3, {'T': rel}, {})
    out = ctx.reduce_segment(Segment('T', U, U * 2))
    assert out.text() == "x^uT[:u]"
    # segments below the relation stay as they are
    low = Segment('T', ZERO, U)
    assert ctx.reduce_segment(low).text() == "T[:u]"


def test_numeric_prefix_expansion(f2):
    ctx = _Context(f2, 2, {}, {'T': [1, 0, 1]})
    s = Segment('T', ZERO, IndexExpr.const(3))
    (out,) = ctx.elementary([SegPoly.monomial(f2, 1, ZERO, (s,))])
    assert sorted(exp.d for exp, _ in out.terms) == [0, 2]


def _step():
    return InductionStep("L*R", left="L", right="R", target="M", limit="M", limit_left="A", limit_right="B")


def test_constant_product_passes(f2):
    reps = {**_constant_matrix(f2, "L", [[1, 0], [0, 1]]), **_constant_matrix(f2, "R", [[1, 1], [0, 1]])}
    conclusion = _constant_matrix(f2, "M", [[1, 1], [0, 1]])
    check = verify_symbolic_induction(_step(), f2, reps, conclusion, {}, {}, [0])
    assert check.status is Status.PASSED
    assert check.ok


def test_constant_product_fails(f2):
    reps = {**_constant_matrix(f2, "L", [[1, 1], [0, 1]]), **_constant_matrix(f2, "R", [[1, 1], [0, 1]])}
    conclusion = _constant_matrix(f2, "M", [[1, 1], [0, 1]])
    check = verify_symbolic_induction(_step(), f2, reps, conclusion, {}, {}, [0])
    assert check.status is Status.FAILED
    assert "(0,1)" in check.clause
    assert check.to_dict()['status'] == Status.FAILED.label


def test_unsupported_conclusion_is_unverified(f2):
    one = Coef(f2, f2.one)
    reps = {**_constant_matrix(f2, "L", [[1, 0], [0, 1]]), **_constant_matrix(f2, "R", [[1, 0], [0, 1]])}
    conclusion = _constant_matrix(f2, "M", [[1, 0], [0, 1]])
    conclusion[("M", 0, 0)] = SliceRelation("M[0,0]", ParamSpec(0, 1), None, None,
                                            (SliceTerm(one, ZERO, U, U * 2),), ground=f2)
    check = verify_symbolic_induction(_step(), f2, reps, conclusion, {}, {}, [0])
    assert check.status is Status.UNVERIFIED
    assert "does not start at 0" in check.clause
