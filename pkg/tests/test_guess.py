import random

import pytest

from gnprove.bipoly import BiPoly
from gnprove.fields import field_make
from gnprove.guess import (GuessFailure, PHProblem, annihilator_product, annihilator_quotient, annihilator_sum,
                           certify_common_root, certify_min_poly, common_root_order, guess_escalating, guess_factor,
                           guess_min_poly, pade_hermite, shares_root)
from gnprove.messages import Status
from gnprove.poly import UniPoly
from gnprove.series import PrecisionError, TruncSeries, residual_valuation, solve_unique_series


@pytest.fixture
def f2():
    return field_make(2, 1)


@pytest.fixture
def catalan(f2):
    P = BiPoly.parse("x y^2 + y + 1", f2)
    return P, solve_unique_series(P, (1,), 200)


@pytest.fixture
def geometric(f2):
    # 1 / (1 + x)
    P = BiPoly.parse("(x + 1) y + 1", f2)
    return P, solve_unique_series(P, (1,), 200)


@pytest.mark.parametrize("seed", range(100))
def test_pade_hermite_contract(seed):
    rng = random.Random(seed)
    fld = field_make(2, rng.randint(1, 3))
    degrees = tuple(rng.randint(0, 6) for _ in range(rng.randint(2, 4)))
    sigma = sum(d + 1 for d in degrees) - 1
    series = [TruncSeries(fld, [fld.random(rng) for _ in range(sigma + 4)], sigma + 4) for _ in degrees]
    out = pade_hermite(PHProblem(series, degrees))
    assert any(out)
    assert all(p.deg <= d for p, d in zip(out, degrees))
    total = TruncSeries.zero(fld, sigma)
    for p, f in zip(out, series):
        total = total + (f * p).truncate(sigma)
    assert total.is_zero()


def test_pade_hermite_needs_precision(f2):
    with pytest.raises(PrecisionError):
        PHProblem([TruncSeries.one(f2, 3)] * 2, (4, 4)).check()


def test_guess_recovers_equation(catalan):
    P, f = catalan
    assert guess_min_poly(f, [0, 1, 2], [3, 3, 3]) == P.normalize()


def test_guess_failure_at_small_type(catalan):
    _, f = catalan
    with pytest.raises(GuessFailure):
        guess_min_poly(f, [0, 1], [0, 0])


def test_guess_escalating(catalan):
    P, f = catalan
    Q = guess_escalating(lambda order: f.truncate(order), [0, 1, 2], [0, 0, 0], retries=2)
    assert Q == P.normalize()


def test_guess_escalating_gives_up(catalan):
    _, f = catalan
    with pytest.raises(GuessFailure):
        guess_escalating(lambda order: f.truncate(order), [0, 1], [0, 0], retries=1)


@pytest.mark.parametrize("build,combine", [
    (annihilator_sum, lambda a, b: a + b),
    (annihilator_product, lambda a, b: a * b),
    (annihilator_quotient, lambda a, b: a / b),
])
def test_resultant_annihilators(build, combine, catalan, geometric):
    P0, f0 = catalan
    P1, f1 = geometric
    R = build(P0, P1)
    assert R.ydeg == 2
    assert residual_valuation(R, combine(f0, f1).truncate(150)).vanishes


def test_certificate_passes(catalan, f2):
    P, f = catalan
    annihilator = P * BiPoly.parse("y + x", f2)
    cert = certify_min_poly(P.normalize(), annihilator, f, 100)
    assert cert.ok
    assert cert.multiplicity == 1
    assert cert.irreducible is True
    assert not cert.cofactor_residual.vanishes
    data = cert.to_dict()
    assert data['status'] == 'passed'
    assert data["candidate"] == "xy^2 + y + 1"


def test_certificate_rejects_non_divisor(catalan, f2):
    P, f = catalan
    cert = certify_min_poly(BiPoly.parse("y + x", f2), P, f, 100)
    assert cert.status is Status.FAILED
    assert "does not divide" in cert.clause


def test_certificate_rejects_reducible_candidate(catalan, f2):
    P, f = catalan
    Q = P * BiPoly.parse("y + 1", f2)
    cert = certify_min_poly(Q, Q, f, 100)
    assert cert.status is Status.FAILED
    assert "reducible" in cert.clause


def test_certificate_rejects_wrong_factor(catalan, f2):
    P, f = catalan
    wrong = BiPoly.parse("y + 1", f2)
    cert = certify_min_poly(wrong, P * wrong, f, 100)
    assert cert.status is Status.FAILED
    assert "cofactor vanishes" in cert.clause


def test_certificate_needs_order(catalan):
    P, f = catalan
    with pytest.raises(PrecisionError):
        certify_min_poly(P, P, f.truncate(10), 100)


@pytest.fixture
def catalan_times_line(catalan, f2):
    P, _ = catalan
    return P * BiPoly.parse("y + x", f2)


def test_common_root_order(catalan, catalan_times_line):
    P, _ = catalan
    assert common_root_order(P, catalan_times_line) == 2 * 2 + 3 * 1 + 1
    assert common_root_order(P, P) == 2 * 1 + 2 * 1 + 1


def test_shares_root(catalan, catalan_times_line):
    P, f = catalan
    assert shares_root(P, catalan_times_line, f.truncate)


def test_shares_root_rejects_truncation_fits(catalan, f2):
    # y + (first 20 terms of f) vanishes to x^31 but the common-root order is 32
    P, f = catalan
    fit = BiPoly(f2, [f.truncate(20).polynomial(), UniPoly.one(f2)])
    assert residual_valuation(fit, f.truncate(31)).vanishes
    assert not shares_root(fit, P, f.truncate)
    assert not shares_root(BiPoly.parse("x + 1", f2), P, f.truncate)


def test_shares_root_needs_the_order(catalan, catalan_times_line):
    P, f = catalan
    with pytest.raises(PrecisionError):
        shares_root(P, catalan_times_line, lambda order: f.truncate(min(order, 6)))


def test_guess_escalating_honours_accept(catalan):
    _, f = catalan
    with pytest.raises(GuessFailure):
        guess_escalating(f.truncate, [0, 1, 2], [1, 1, 1], retries=1, accept=lambda cand: False)


def test_guess_factor(catalan, catalan_times_line):
    P, f = catalan
    Q = guess_factor(f.truncate, catalan_times_line, [([0, 1, 2], [1, 1, 1])])
    assert Q == P.normalize()


def test_guess_factor_keeps_the_annihilator_on_short_data(catalan, catalan_times_line):
    _, f = catalan
    short = f.truncate(6)
    Q = guess_factor(short.truncate, catalan_times_line, [([0, 1, 2], [1, 1, 1])], retries=0)
    assert Q == catalan_times_line.normalize()


def test_common_root_certificate(catalan, catalan_times_line):
    P, f = catalan
    cert = certify_common_root(P, catalan_times_line, f, 'product resultant')
    assert cert.ok
    assert cert.order == common_root_order(P, catalan_times_line)
    assert cert.notes == ["annihilator, not certified minimal"]
    assert cert.to_dict()['notes'] == cert.notes


def test_common_root_certificate_of_the_annihilator_itself(catalan_times_line, catalan):
    _, f = catalan
    cert = certify_common_root(catalan_times_line, catalan_times_line, f.truncate(3))
    assert cert.ok
    assert cert.order == 0
    assert cert.notes == ["the annihilator itself"]


def test_common_root_certificate_rejects(catalan, catalan_times_line, f2):
    _, f = catalan
    cert = certify_common_root(BiPoly.parse("y + x", f2), catalan_times_line, f)
    assert cert.status is Status.FAILED
    assert "residual" in cert.clause
    cert = certify_common_root(BiPoly.parse("x^2 + 1", f2), catalan_times_line, f)
    assert cert.status is Status.FAILED
    assert cert.clause == "candidate is free of y"


def test_common_root_certificate_needs_order(catalan, catalan_times_line):
    P, f = catalan
    with pytest.raises(PrecisionError):
        certify_common_root(P, catalan_times_line, f.truncate(5))


@pytest.mark.parametrize("k,j", [(0, 0), (2, 1), (3, 2), (1, 3), (5, 0)])
def test_mutated_candidates_fail(k, j, catalan, catalan_times_line, f2):
    P, f = catalan
    mutant = P + BiPoly.from_terms(f2, {j: UniPoly.monomial(f2, f2.one, k)})
    assert certify_min_poly(mutant, catalan_times_line, f, 100).status is Status.FAILED
    assert certify_common_root(mutant, catalan_times_line, f).status is Status.FAILED
