"""Truncated power series over a coefficient field.

A TruncSeries holds the coefficients of x^0 .. x^(N-1) and its order N: the
series is known modulo x^N and nothing beyond. Every operation states the
order of its result:

    f + g        min(N_f, N_g)
    f * g        min(N_f + val g, N_g + val f)
    f.square()   N_f + N_f (characteristic 2: the square is a Frobenius)
    1 / f        N_f, constant term nonzero
    x^u f        N_f + u
    f(x^k)       k N_f
    cartier(f,j) floor((N_f - j) / p)

where val of a series whose known coefficients all vanish is its order.
"""
import logging
from collections import namedtuple

from . import GnProveError
from .bipoly import BiPoly
from .fields import FieldElem
from .poly import UniPoly, convolve

log = logging.getLogger(__name__)


class PrecisionError(GnProveError):
    pass


class UniquenessError(GnProveError):
    pass


UniquenessCert = namedtuple('UniquenessCert', ['ok', 'clause', 'shift', 'reduced'])
UniquenessCert.__doc__ = """Outcome of certify_unique_solution.

shift is the power of x divided out of P(x, init + x^L y); reduced is the
remaining BiPoly sum q_j(x) y^j, None when a clause fails before it exists.
"""


class Residual(namedtuple('Residual', ['valuation', 'order'])):
    """Valuation of R(x, f); valuation None means every known coefficient vanishes."""

    @property
    def vanishes(self) -> bool:
        return self.valuation is None

    def __str__(self):
        return f">= {self.order}" if self.valuation is None else str(self.valuation)


class TruncSeries:
    __slots__ = ('field', 'coeffs', 'order')

    def __init__(self, field, coeffs, order: int):
        c = list(coeffs[:order])
        if len(c) < order:
            c.extend([field.zero] * (order - len(c)))
        self.field = field
        self.coeffs = tuple(c)
        self.order = order

    @classmethod
    def zero(cls, field, order: int):
        return cls(field, (), order)

    @classmethod
    def one(cls, field, order: int):
        return cls(field, (field.one,), order)

    @classmethod
    def from_poly(cls, p: UniPoly, order: int):
        return cls(p.field, p.coeffs, order)

    @classmethod
    def from_values(cls, field, values, order: int = None):
        """From FieldElems or raw values; the order defaults to the number of values."""
        raw = [v.value if isinstance(v, FieldElem) else v for v in values]
        return cls(field, raw, len(raw) if order is None else order)

    def coeff(self, i: int):
        if i >= self.order:
            raise PrecisionError(f"coefficient {i} of a series known to order {self.order}")
        return self.coeffs[i] if i >= 0 else self.field.zero

    def __getitem__(self, key):
        """Raw coefficient for an int; the polynomial part sum_{a <= i < b} t_i x^i for a slice."""
        if isinstance(key, slice):
            a = key.start or 0
            b = self.order if key.stop is None else key.stop
            if b > self.order:
                raise PrecisionError(f"slice [{a}:{b}] of a series known to order {self.order}")
            return UniPoly(self.field, [self.field.zero] * a + list(self.coeffs[a:b]))
        return self.coeff(key)

    def __len__(self):
        return self.order

    def values(self):
        return [FieldElem(self.field, c) for c in self.coeffs]

    def valuation(self) -> int:
        """First nonzero index, or the order when the known part is zero."""
        zero = self.field.zero
        for i, c in enumerate(self.coeffs):
            if c != zero:
                return i
        return self.order

    def is_zero(self) -> bool:
        return self.valuation() == self.order

    def polynomial(self) -> UniPoly:
        return UniPoly(self.field, self.coeffs)

    def truncate(self, order: int) -> 'TruncSeries':
        if order > self.order:
            raise PrecisionError(f"cannot extend a series of order {self.order} to {order}")
        return TruncSeries(self.field, self.coeffs, order)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def agrees(self, other: 'TruncSeries', order: int = None) -> bool:
        """Equality of the coefficients both series know (or the first `order`)."""
        n = min(self.order, other.order) if order is None else order
        if n > self.order or n > other.order:
            raise PrecisionError(f"comparison to order {n} of series known to {self.order}, {other.order}")
        return self.coeffs[:n] == other.coeffs[:n]

    # arithmetic

    def _lift(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, UniPoly):
            # exact: known far beyond anything self can reach
            return TruncSeries.from_poly(other, self.order + other.deg + 1)
        if isinstance(other, FieldElem):
            return TruncSeries(self.field, (other.value,), self.order)
        if isinstance(other, int):
            return TruncSeries(self.field, (self.field.from_int(other),), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        add = self.field.add
        return TruncSeries(self.field, [add(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            mul = self.field.mul
            return TruncSeries(self.field, [mul(other.value, c) for c in self.coeffs], self.order)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = min(self.order + other.valuation(), other.order + self.valuation())
        prod = convolve(self.field, list(self.coeffs[:n]), list(other.coeffs[:n]))
        return TruncSeries(self.field, prod, n)

    __rmul__ = __mul__

    def square(self) -> 'TruncSeries':
        field = self.field
        out = [field.zero] * (2 * self.order)
        for i, c in enumerate(self.coeffs):
            out[2 * i] = field.mul(c, c)
        return TruncSeries(field, out, 2 * self.order)

    def __pow__(self, n: int) -> 'TruncSeries':
        if n < 0:
            return self.reciprocal() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base.square()
        return TruncSeries.one(self.field, self.order) if result is None else result

    def reciprocal(self) -> 'TruncSeries':
        field = self.field
        c0 = self.coeffs[0] if self.order else field.zero
        if c0 == field.zero:
            raise PrecisionError("reciprocal of a series with zero constant term")
        return TruncSeries(field, inverse_coeffs(field, self.coeffs, self.order), self.order)

    def __truediv__(self, other):
        if isinstance(other, FieldElem):
            return self * FieldElem(self.field, self.field.inv(other.value))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        v = other.valuation()
        if v == other.order:
            raise PrecisionError("division by a series with no known nonzero coefficient")
        if v:
            if self.valuation() < v:
                raise PrecisionError(f"quotient is not a power series (valuations {self.valuation()} < {v})")
            return self.shift(-v) / other.shift(-v)
        return self * other.reciprocal()

    def shift(self, u: int) -> 'TruncSeries':
        """x^u f; for u < 0 the first -u coefficients must vanish."""
        if u >= 0:
            return TruncSeries(self.field, [self.field.zero] * u + list(self.coeffs), self.order + u)
        if any(c != self.field.zero for c in self.coeffs[:-u]):
            raise PrecisionError(f"division by x^{-u} of a series of valuation {self.valuation()}")
        return TruncSeries(self.field, self.coeffs[-u:], self.order + u)

    def frob(self, k: int = 1) -> 'TruncSeries':
        field = self.field
        return TruncSeries(field, [field.frob(c, k) for c in self.coeffs], self.order)

    def compose_monomial(self, k: int) -> 'TruncSeries':
        """f(x^k)."""
        field = self.field
        out = [field.zero] * (k * self.order)
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return TruncSeries(field, out, k * self.order)

    def scale_x(self, c) -> 'TruncSeries':
        """f(c x) for a raw field value c."""
        field = self.field
        out = []
        p = field.one
        for a in self.coeffs:
            out.append(field.mul(a, p))
            p = field.mul(p, c)
        return TruncSeries(field, out, self.order)

    def __repr__(self):
        return f"TruncSeries({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = 'x') -> str:
        """Ascending terms closed by the order marker, e.g. '1 + x^2 + O(x^8)'."""
        field = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == field.zero:
                continue
            mono = '' if i == 0 else (var if i == 1 else f"{var}^{i}")
            if c == field.one:
                terms.append(mono or '1')
            else:
                ctext = field.format(c)
                terms.append(f"({ctext}){mono}" if mono and field.needs_parens(c) else ctext + mono)
        terms.append(f"O({var}^{self.order})")
        return ' + '.join(terms)


def inverse_coeffs(field, coeffs, n: int):
    """First n coefficients of 1/f by Newton doubling."""
    inv = [field.inv(coeffs[0])]
    p = 1
    while p < n:
        p = min(2 * p, n)
        # g <- g (2 - f g) = g + g (1 + f g) in characteristic 2, only the residual part matters
        fg = convolve(field, list(coeffs[:p]), inv)[:p]
        fg = fg + [field.zero] * (p - len(fg))
        fg[0] = field.add(fg[0], field.one)
        corr = convolve(field, inv, fg)[:p]
        inv = inv + [field.zero] * (p - len(inv))
        inv = [field.add(a, b) for a, b in zip(inv, corr + [field.zero] * (p - len(corr)))]
    return inv[:n]


def substitute(P: BiPoly, f: TruncSeries) -> TruncSeries:
    """P(x, f) to the order the data determines."""
    if not P.coeffs:
        return TruncSeries.zero(f.field, f.order)
    big = f.order * (P.ydeg + 1) + P.xdeg + 1
    r = TruncSeries.from_poly(P.coeffs[-1], big)
    for c in reversed(P.coeffs[:-1]):
        r = r * f + TruncSeries.from_poly(c, big)
    return r


def residual_valuation(R: BiPoly, f: TruncSeries, bound: int = None) -> Residual:
    """Valuation of R(x, f), or 'vanishes to the known order'."""
    value = substitute(R, f)
    v = value.valuation()
    if v < value.order:
        return Residual(v, value.order)
    if bound is not None and value.order < bound:
        raise PrecisionError(f"R(x, f) is known to order {value.order}, below the bound {bound}")
    return Residual(None, value.order)


def cartier_on_series(f: TruncSeries, j: int, p: int = 2) -> TruncSeries:
    """Lambda_j: sum a_l x^l -> sum a_(p l + j) x^l."""
    if not 0 <= j < p:
        raise ValueError(f"digit {j} outside 0..{p - 1}")
    n = max((f.order - j) // p, 0)
    return TruncSeries(f.field, [f.coeffs[p * i + j] for i in range(n)], n)


# unique roots

def _init_poly(field, init) -> UniPoly:
    return UniPoly(field, [v.value if isinstance(v, FieldElem) else v for v in init])


def certify_unique_solution(P: BiPoly, init) -> UniquenessCert:
    """Check that init extends to exactly one power series root of P."""
    field = P.field
    L = len(init)
    s = _init_poly(field, init)
    if not P:
        return UniquenessCert(False, "P is zero", 0, None)
    base = BiPoly(field, (s, UniPoly.monomial(field, field.one, L)))
    Q = BiPoly.zero(field)
    for c in reversed(P.coeffs):
        Q = Q * base + BiPoly(field, (c,))
    head = Q.coeff(0)
    if head and head.valuation() < L:
        return UniquenessCert(False, f"initial terms are not a root modulo x^{L}", 0, None)
    if not Q:
        return UniquenessCert(False, "initial terms give an exact polynomial root", 0, None)
    m = min(c.valuation() for c in Q.coeffs if c)
    reduced = Q.map(lambda c: c.shift(-m))
    if reduced.coeff(1).coeff(0) != field.one:
        # the constant part of q_1 may be a unit other than 1
        if reduced.coeff(1).coeff(0) == field.zero:
            return UniquenessCert(False, "q_1(0) = 0", m, reduced)
        inv = field.inv(reduced.coeff(1).coeff(0))
        reduced = reduced.map(lambda c: c.scale(inv))
    for j in range(2, reduced.ydeg + 1):
        if reduced.coeff(j).coeff(0) != field.zero:
            return UniquenessCert(False, f"q_{j}(0) != 0", m, reduced)
    return UniquenessCert(True, None, m, reduced)


def solve_unique_series(P: BiPoly, init, order: int, method: str = 'newton') -> TruncSeries:
    """The unique root f = init + O(x^L) of P, known to `order`."""
    cert = certify_unique_solution(P, init)
    if not cert.ok:
        raise UniquenessError(f"no unique root: {cert.clause}")
    field = P.field
    L = len(init)
    if order <= L:
        return TruncSeries(field, _init_poly(field, init).coeffs, order)
    n = order - L
    if method == 'newton':
        y = _solve_newton(cert.reduced, n)
    elif method == 'direct':
        y = _solve_direct(cert.reduced, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    coeffs = [v.value if isinstance(v, FieldElem) else v for v in init] + y
    log.debug(f"solved a root of y-degree {P.ydeg} to order {order} ({method})")
    return TruncSeries(field, coeffs, order)


def _solve_direct(Q: BiPoly, n: int):
    """Coefficientwise: y_i = q_0[i] + sum_t q_1[t] y_(i-t) + sum_(j>=2) sum_t q_j[t] (y^j)[i-t]."""
    field = Q.field
    add, mul, zero = field.add, field.mul, field.zero
    d = Q.ydeg
    q = [list(Q.coeff(j).coeffs) + [zero] * max(0, n - len(Q.coeff(j).coeffs)) for j in range(d + 1)]
    y = []
    powers = {j: [] for j in range(2, d + 1)}
    for i in range(n):
        r = q[0][i]
        for t in range(1, i + 1):
            if q[1][t] != zero:
                r = add(r, mul(q[1][t], y[i - t]))
        for j in range(2, d + 1):
            qj = q[j]
            pw = powers[j]
            for t in range(1, i + 1):
                if qj[t] != zero and pw[i - t] != zero:
                    r = add(r, mul(qj[t], pw[i - t]))
        y.append(r)
        # extend the powers of y by coefficient i
        prev = y
        for j in range(2, d + 1):
            acc = zero
            for a in range(i + 1):
                if y[a] != zero and prev[i - a] != zero:
                    acc = add(acc, mul(y[a], prev[i - a]))
            powers[j].append(acc)
            prev = powers[j]
    return y


def _eval_trunc(Q: BiPoly, y: UniPoly, n: int) -> UniPoly:
    r = UniPoly.zero(Q.field)
    for c in reversed(Q.coeffs):
        r = (r * y).truncate(n) + c.truncate(n)
    return r


def _solve_newton(Q: BiPoly, n: int):
    field = Q.field
    y = UniPoly(field, (Q.coeff(0).coeff(0),))
    dQ = Q.derivative_y()
    p = 1
    while p < n:
        p = min(2 * p, n)
        value = _eval_trunc(Q, y, p)
        slope = _eval_trunc(dQ, y, p)
        inv = UniPoly(field, inverse_coeffs(field, list(slope.coeffs) or [field.zero], p))
        y = (y + (value * inv).truncate(p)).truncate(p)
    out = list(y.coeffs)
    return out + [field.zero] * (n - len(out))
