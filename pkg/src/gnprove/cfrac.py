"""Continued fractions over K[z] and Stieltjes continued fractions over K[[x]].

Laurent series in 1/z are handled as TruncSeries in x = 1/z together with a
shift s: the pair (g, s) stands for x^(-s) g(x) = z^s g(1/z).
"""
import logging
import threading
from collections import namedtuple

from . import GnProveError
from .autoseq import period_doubling, substitution_prefix, thue_morse
from .fields import FieldElem
from .mat2 import Mat2
from .poly import UniPoly
from .series import PrecisionError, TruncSeries

log = logging.getLogger(__name__)


class LetterError(GnProveError):
    pass


ConvergentPair = namedtuple('ConvergentPair', ['P', 'Q'])


def _swap(field) -> Mat2:
    zero, one = UniPoly.zero(field), UniPoly.one(field)
    return Mat2(zero, one, one, zero)


def cf_matrix(quotients, n: int) -> Mat2:
    """[[P_n, Q_n], [P_(n-1), Q_(n-1)]] = [[a_n,1],[1,0]] ... [[a_0,1],[1,0]] [[0,1],[1,0]]."""
    if not quotients:
        raise LetterError("empty list of partial quotients")
    if n >= len(quotients):
        raise LetterError(f"convergent {n} needs {n + 1} partial quotients, got {len(quotients)}")
    field = quotients[0].field
    zero, one = UniPoly.zero(field), UniPoly.one(field)
    m = _swap(field)
    for a in quotients[:n + 1]:
        m = Mat2(a, one, one, zero) * m
    return m


def cf_convergent(quotients, n: int) -> ConvergentPair:
    """The n-th convergent P_n / Q_n of 1/(a_0 + 1/(a_1 + ...))."""
    m = cf_matrix(quotients, n)
    return ConvergentPair(m[0, 0], m[0, 1])


def tilde_reverse(p: UniPoly) -> UniPoly:
    """x^(deg P) P(1/x)."""
    return p.reverse()


def laurent_ratio(P: UniPoly, Q: UniPoly, order: int):
    """P(z)/Q(z) as (g, s) with g known to `order`."""
    g = TruncSeries.from_poly(tilde_reverse(P), order) / TruncSeries.from_poly(tilde_reverse(Q), order)
    return g, P.deg - Q.deg


def _normalize(g: TruncSeries, s: int):
    v = g.valuation()
    if v == g.order:
        return None
    return g.shift(-v), s - v


def cf_expand(f: TruncSeries, count: int, shift: int = 0):
    """First `count` partial quotients of x^(-shift) f with f = a_0 + 1/(a_1 + 1/(a_2 + ...)).

    Raises PrecisionError rather than emit a quotient that depends on
    coefficients beyond the known order.
    """
    field = f.field
    out = []
    state = _normalize(f, shift)
    while len(out) < count:
        if state is None:
            raise PrecisionError(f"expansion exhausted after {len(out)} partial quotients")
        g, s = state
        if s < 0:
            out.append(UniPoly.zero(field))
            state = (g.reciprocal(), -s)
            continue
        if g.order < s + 1:
            raise PrecisionError(f"partial quotient {len(out)} of degree {s} needs order {s + 1}, have {g.order}")
        out.append(UniPoly(field, reversed(g.coeffs[:s + 1])))
        if len(out) == count:
            break
        tail = TruncSeries(field, g.coeffs[s + 1:], g.order - s - 1)
        v = tail.valuation()
        if v == tail.order:
            raise PrecisionError(f"expansion exhausted after {len(out)} partial quotients")
        state = (tail.shift(-v).reciprocal(), 1 + v)
    log.debug(f"expanded {count} partial quotients")
    return out


# Stieltjes continued fractions

def stieltjes_matrix(u, n: int) -> Mat2:
    """[[1, u_n x],[1,0]] ... [[1, u_0 x],[1,0]] before the final [[0,1],[1/x,0]]."""
    if n >= len(u):
        raise LetterError(f"convergent {n} needs {n + 1} coefficients, got {len(u)}")
    field = u[0].field
    one, zero = UniPoly.one(field), UniPoly.zero(field)
    m = Mat2.identity(one, zero)
    for c in u[:n + 1]:
        if not c:
            raise LetterError("Stieltjes coefficients must be nonzero")
        m = Mat2(one, UniPoly.monomial(field, c.value, 1), one, zero) * m
    return m


def stieltjes_convergent(u, n: int) -> ConvergentPair:
    """P_n / Q_n = u_0 / (1 + u_1 x / (1 + ... / (1 + u_n x)))."""
    m = stieltjes_matrix(u, n)
    return ConvergentPair(m[0, 1].shift(-1), m[0, 0])


def stieltjes_previous(u, n: int) -> ConvergentPair:
    """(P_(n-1), Q_(n-1)) from the second row of the same product."""
    m = stieltjes_matrix(u, n)
    return ConvergentPair(m[1, 1].shift(-1), m[1, 0])


def stieltjes_series(u, n: int, order: int) -> TruncSeries:
    pair = stieltjes_convergent(u, n)
    return TruncSeries.from_poly(pair.P, order) / TruncSeries.from_poly(pair.Q, order)


# letter matrices of the Thue-Morse and period-doubling products

def ncf_factor(t: UniPoly) -> Mat2:
    """x^(deg t) [[t(1/x), 1], [1, 0]]."""
    if t.deg < 1:
        raise LetterError(f"partial quotient {t} must have positive degree")
    field = t.field
    xd = UniPoly.monomial(field, field.one, t.deg)
    return Mat2(tilde_reverse(t), xd, xd, UniPoly.zero(field))


def stieltjes_factor(t) -> Mat2:
    """[[1, t x], [1, 0]]."""
    if isinstance(t, UniPoly):
        if t.deg != 0:
            raise LetterError(f"Stieltjes letter {t} must be a nonzero constant")
        t = FieldElem(t.field, t.lc)
    if not t:
        raise LetterError("Stieltjes letters must be nonzero")
    field = t.field
    one = UniPoly.one(field)
    return Mat2(one, UniPoly.monomial(field, t.value, 1), one, UniPoly.zero(field))


FACTORS = {'ncf': ncf_factor, 'stieltjes': stieltjes_factor}


class MatrixFamily:
    """Doubling recursion X_(n+1) = F(X_n, Y_n), Y_(n+1) = G(X_n, Y_n) with a per-family cache."""

    def __init__(self, first: Mat2, second: Mat2, step):
        self._levels = [(first, second)]
        self._step = step
        self._lock = threading.Lock()

    def level(self, n: int):
        if n < 0:
            raise ValueError("matrix index must be nonnegative")
        if n < len(self._levels):
            return self._levels[n]
        with self._lock:
            while len(self._levels) <= n:
                x, y = self._levels[-1]
                self._levels.append(self._step(x, y))
            return self._levels[n]


_families = {}
_families_lock = threading.Lock()


def _family(key, build) -> MatrixFamily:
    fam = _families.get(key)
    if fam is None:
        with _families_lock:
            fam = _families.setdefault(key, build())
    return fam


def _letter_key(t):
    return (t.field, t.coeffs) if isinstance(t, UniPoly) else (t.field, t.value)


def tm_family(a, b, flavor: str = 'ncf') -> MatrixFamily:
    """(M_n, W_n) with M_(n+1) = W_n M_n and W_(n+1) = M_n W_n."""
    factor = FACTORS[flavor]
    key = ('tm', flavor, _letter_key(a), _letter_key(b))
    return _family(key, lambda: MatrixFamily(factor(a), factor(b), lambda m, w: (w * m, m * w)))


def pd_family(a, b, flavor: str = 'ncf') -> MatrixFamily:
    """(A_n, B_n) with A_(n+1) = B_n A_n and B_(n+1) = A_n A_n."""
    factor = FACTORS[flavor]
    key = ('pd', flavor, _letter_key(a), _letter_key(b))
    return _family(key, lambda: MatrixFamily(factor(a), factor(b), lambda p, q: (q * p, p * p)))


def tm_matrix(n: int, a, b, kind: str = 'M', flavor: str = 'ncf') -> Mat2:
    if a == b:
        raise LetterError("the two letters must differ")
    m, w = tm_family(a, b, flavor).level(n)
    if kind == 'M':
        return m
    if kind == 'W':
        return w
    raise ValueError(f"unknown Thue-Morse matrix kind {kind!r}")


def pd_matrix(n: int, a, b, kind: str = 'A', flavor: str = 'ncf') -> Mat2:
    if a == b:
        raise LetterError("the two letters must differ")
    p, q = pd_family(a, b, flavor).level(n)
    if kind == 'A':
        return p
    if kind == 'B':
        return q
    raise ValueError(f"unknown period-doubling matrix kind {kind!r}")


def letter_product(word, factor) -> Mat2:
    """factor(w_(N-1)) ... factor(w_0): the first letter is the rightmost factor."""
    m = None
    for t in word:
        f = factor(t)
        m = f if m is None else f * m
    return m


def tm_letters(a, b, n: int):
    """t_0 .. t_(n-1) of the (a, b)-Thue-Morse sequence."""
    return [a if c == 'a' else b for c in substitution_prefix(thue_morse(), n)]


def pd_letters(a, b, n: int):
    return [a if c == 'a' else b for c in substitution_prefix(period_doubling(), n)]


def matrix_series(m: Mat2, order: int) -> Mat2:
    """Entries of a polynomial matrix as series known to `order`."""
    return m.map(lambda p: TruncSeries.from_poly(p, order))
