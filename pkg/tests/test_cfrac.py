import random
from functools import reduce

import pytest

from gnprove.cfrac import (LetterError, cf_convergent, cf_expand, cf_matrix, laurent_ratio, letter_product,
                           ncf_factor, pd_family, pd_letters, pd_matrix, stieltjes_convergent, stieltjes_factor, stieltjes_previous,
                           stieltjes_series, tilde_reverse, tm_family, tm_letters, tm_matrix)
from gnprove.fields import field_make
from gnprove.mat2 import Mat2
from gnprove.poly import UniPoly
from gnprove.series import PrecisionError, TruncSeries


@pytest.fixture
def f2():
    return field_make(2, 1)


@pytest.fixture
def f4():
    return field_make(2, 2)


def Z(text, fld):
    return UniPoly.parse(text, fld, 'z')


def test_convergents(f2):
    q = [Z("z", f2), Z("z + 1", f2)]
    assert cf_convergent(q, 0) == (UniPoly.one(f2), Z("z", f2))
    P, Q = cf_convergent(q, 1)
    assert P == Z("z + 1", f2)
    assert Q == Z("z^2 + z + 1", f2)


def test_convergent_needs_quotients(f2):
    with pytest.raises(LetterError):
        cf_convergent([], 0)
    with pytest.raises(LetterError):
        cf_convergent([Z("z", f2)], 1)


def test_expand_recovers_quotients(f2):
    quotients = [Z(t, f2) for t in ("z", "z^2 + 1", "z + 1", "z^3", "z^2 + z")]
    P, Q = cf_convergent(quotients, len(quotients) - 1)
    g, s = laurent_ratio(Q, P, 40)
    assert cf_expand(g, len(quotients), s) == quotients


def test_expand_starts_with_zero_for_proper_fractions(f2):
    quotients = [Z("z", f2), Z("z + 1", f2)]
    P, Q = cf_convergent(quotients, 1)
    g, s = laurent_ratio(P, Q, 20)
    assert cf_expand(g, 3, s) == [UniPoly.zero(f2)] + quotients


def test_expand_refuses_beyond_precision(f2):
    quotients = [Z("z", f2), Z("z + 1", f2)]
    P, Q = cf_convergent(quotients, 1)
    g, s = laurent_ratio(Q, P, 20)
    with pytest.raises(PrecisionError):
        cf_expand(g, 3, s)


def test_tilde_reverse(f2):
    assert tilde_reverse(Z("z^3 + z", f2)) == Z("z^2 + 1", f2)


def test_stieltjes_convergents(f4):
    u0, u1 = f4.gen, f4.gen + 1
    P, Q = stieltjes_convergent([u0], 0)
    assert P == UniPoly.constant(f4, u0.value)
    assert Q == UniPoly.one(f4)
    P, Q = stieltjes_convergent([u0, u1], 1)
    assert P == UniPoly.constant(f4, u0.value)
    assert Q == UniPoly.parse("(u + 1) x + 1", f4)
    assert stieltjes_previous([u0, u1], 1) == (UniPoly.constant(f4, u0.value), UniPoly.one(f4))


def test_stieltjes_series(f4):
    u = [f4.gen] * 3
    s = stieltjes_series(u, 2, 12)
    P, Q = stieltjes_convergent(u, 2)
    assert (s * TruncSeries.from_poly(Q, 12)).polynomial() == P


def test_stieltjes_letters_nonzero(f4):
    with pytest.raises(LetterError):
        stieltjes_factor(f4(0))
    with pytest.raises(LetterError):
        stieltjes_convergent([f4.gen, f4(0)], 1)


def test_ncf_factor(f2):
    m = ncf_factor(Z("z^2 + 1", f2))
    x2 = UniPoly.monomial(f2, 1, 2)
    assert m == Mat2(Z("z^2 + 1", f2), x2, x2, UniPoly.zero(f2))
    with pytest.raises(LetterError):
        ncf_factor(UniPoly.one(f2))


def test_letter_sequences(f2):
    a, b = Z("z", f2), Z("z + 1", f2)
    assert tm_letters(a, b, 8) == [a, b, b, a, b, a, a, b]
    assert pd_letters(a, b, 8) == [a, b, a, a, a, b, a, b]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_tm_family_is_the_word_product(n, f2):
    a, b = Z("z", f2), Z("z^2 + z + 1", f2)
    M, W = tm_family(a, b).level(n)
    assert M == letter_product(tm_letters(a, b, 1 << n), ncf_factor)
    assert W == letter_product(tm_letters(b, a, 1 << n), ncf_factor)


@pytest.mark.parametrize("n", range(9))
def test_pd_family_is_the_word_product(n, f2):
    a, b = Z("z^2", f2), Z("z", f2)
    A, _ = pd_family(a, b).level(n)
    assert A == letter_product(pd_letters(a, b, 1 << n), ncf_factor)


def test_stieltjes_family(f4):
    a, b = f4.gen, f4(1)
    M, _ = tm_family(a, b, 'stieltjes').level(2)
    assert M == letter_product(tm_letters(a, b, 4), stieltjes_factor)


def test_letters_must_differ(f2):
    with pytest.raises(LetterError):
        tm_matrix(1, Z("z", f2), Z("z", f2))


def _random_quotients(fld, count, seed):
    rng = random.Random(seed)
    return [UniPoly(fld, [fld.random(rng) for _ in range(rng.randint(1, 3))] + [fld.one]) for _ in range(count)]


@pytest.mark.parametrize("seed", range(3))
def test_convergent_determinant(seed, f2):
    q = _random_quotients(f2, 65, seed)
    prev = cf_convergent(q, 0)
    for n in range(1, 65):
        cur = cf_convergent(q, n)
        assert cur.P * prev.Q + prev.P * cur.Q == UniPoly.one(f2), n
        assert cf_matrix(q, n).det() == UniPoly.one(f2)
        prev = cur


@pytest.mark.parametrize("seed", range(3))
def test_stieltjes_determinant(seed, f4):
    rng = random.Random(seed)
    u = [f4.element(f4.random(rng, nonzero=True)) for _ in range(65)]
    prev = stieltjes_convergent(u, 0)
    for n in range(1, 65):
        cur = stieltjes_convergent(u, n)
        assert stieltjes_previous(u, n) == prev
        weight = reduce(f4.mul, [c.value for c in u[:n + 1]], f4.one)
        assert cur.P * prev.Q + prev.P * cur.Q == UniPoly.monomial(f4, weight, n), n
        prev = cur


@pytest.mark.parametrize("n", range(1, 9))
def test_pd_second_matrix_doubles_the_first(n, f2):
    a, b = Z("z^2", f2), Z("z", f2)
    half = pd_letters(a, b, 1 << (n - 1))
    B = pd_matrix(n, a, b, 'B')
    assert B == letter_product(half + half, ncf_factor)
    assert B == pd_matrix(n - 1, a, b) * pd_matrix(n - 1, a, b)
    assert pd_matrix(n, a, b) == pd_matrix(n - 1, a, b, 'B') * pd_matrix(n - 1, a, b)


def test_pd_matrix_bases(f2):
    a, b = Z("z^2", f2), Z("z", f2)
    assert pd_matrix(0, a, b) == ncf_factor(a)
    assert pd_matrix(0, a, b, 'B') == ncf_factor(b)
    # each letter contributes x^(2 deg t) to the determinant
    assert pd_matrix(4, a, b).det() == UniPoly.monomial(f2, f2.one, 2 * sum(t.deg for t in pd_letters(a, b, 16)))
    with pytest.raises(ValueError):
        pd_matrix(1, a, b, 'C')
    with pytest.raises(LetterError):
        pd_matrix(1, a, a)


def test_pd_stieltjes_family(f4):
    a, b = f4.gen, f4(1)
    assert pd_matrix(3, a, b, 'A', 'stieltjes') == letter_product(pd_letters(a, b, 8), stieltjes_factor)
