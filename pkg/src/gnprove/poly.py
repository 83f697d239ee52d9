"""Univariate polynomials and rational functions over a coefficient field.

A UniPoly stores raw field values (see fields.py) lowest degree first, with
no trailing zero. Products over F_2 and F_{2^m} go through packed integer
carry-less multiplication; F_2(a) falls back to the schoolbook product.
"""
import logging
import random as _random

from . import GnProveError
from . import gf2x
from .fields import FieldElem, FqField

log = logging.getLogger(__name__)


class PolyError(GnProveError):
    pass


def _pack_bits(a) -> int:
    return int(''.join('1' if c else '0' for c in reversed(a)), 2) if a else 0


def _unpack_bits(v: int, n: int):
    s = bin(v)[:1:-1]
    out = [1 if ch == '1' else 0 for ch in s[:n]]
    return out + [0] * (n - len(out))


def _kronecker(field: FqField, a, b):
    # slots of 2m-1 bits hold a full carry-less coefficient product
    w = 2 * field.m - 1
    mask = (1 << w) - 1
    pa = 0
    for c in reversed(a):
        pa = (pa << w) | c
    pb = 0
    for c in reversed(b):
        pb = (pb << w) | c
    pc = gf2x.mul(pa, pb)
    out = []
    for _ in range(len(a) + len(b) - 1):
        out.append(field.reduce(pc & mask))
        pc >>= w
    return out


def convolve(field, a, b):
    """Coefficient list of the product of two coefficient lists."""
    if not a or not b:
        return []
    if isinstance(field, FqField):
        if field.m == 1:
            return _unpack_bits(gf2x.mul(_pack_bits(a), _pack_bits(b)), len(a) + len(b) - 1)
        if min(len(a), len(b)) > 4:
            return _kronecker(field, a, b)
    zero = field.zero
    add = field.add
    mul = field.mul
    out = [zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == zero:
            continue
        for j, cb in enumerate(b):
            if cb != zero:
                out[i + j] = add(out[i + j], mul(ca, cb))
    return out


class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs=()):
        c = list(coeffs)
        zero = field.zero
        while c and c[-1] == zero:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one,))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field, c, n: int):
        return cls(field, [field.zero] * n + [c])

    @classmethod
    def x(cls, field):
        return cls.monomial(field, field.one, 1)

    @classmethod
    def from_bits(cls, field, bits: int):
        """Polynomial with 0/1 coefficients read from the bits of an int."""
        return cls(field, [field.one if (bits >> i) & 1 else field.zero
                           for i in range(bits.bit_length())])

    def to_bits(self) -> int:
        """Inverse of from_bits; every coefficient must be 0 or 1."""
        one = self.field.one
        bits = 0
        for i, c in enumerate(self.coeffs):
            if c == one:
                bits |= 1 << i
            elif c != self.field.zero:
                raise PolyError(f"{self} has coefficients outside F_2")
        return bits

    @classmethod
    def parse(cls, text: str, field, var: str = 'x') -> 'UniPoly':
        from .textfmt import evaluate, ParseError
        env = {var: cls.x(field)}
        if getattr(field, 'symbol', None) and field.symbol != var:
            env[field.symbol] = field.gen
        value = evaluate(text, env, one=cls.one(field))
        if isinstance(value, FieldElem):
            return cls.constant(field, value.value)
        if isinstance(value, RatFunc):
            if value.den.deg != 0:
                raise ParseError(f"{text!r} is not a polynomial", 0)
            return value.num
        return value

    # structure

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __getitem__(self, i):
        return self.coeff(i)

    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient, -1 for zero."""
        zero = self.field.zero
        for i, c in enumerate(self.coeffs):
            if c != zero:
                return i
        return -1

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs and (not self.coeffs or self.field == other.field)
        if isinstance(other, (int, FieldElem)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = 'x') -> str:
        """Descending powers in the shared grammar, e.g. 'x^2 + (u + 1)x + 1'."""
        if not self.coeffs:
            return '0'
        field = self.field
        terms = []
        for i in range(self.deg, -1, -1):
            c = self.coeffs[i]
            if c == field.zero:
                continue
            mono = '' if i == 0 else (var if i == 1 else f"{var}^{i}")
            if c == field.one:
                terms.append(mono or '1')
                continue
            ctext = field.format(c)
            if field.needs_parens(c):
                ctext = f"({ctext})"
            terms.append(ctext + mono)
        return ' + '.join(terms)

    # arithmetic

    def _lift(self, other):
        if isinstance(other, UniPoly):
            if other.coeffs and self.coeffs and other.field != self.field:
                raise PolyError("polynomials over different fields")
            return other
        if isinstance(other, FieldElem):
            return UniPoly(self.field, (other.value,))
        if isinstance(other, int):
            return UniPoly(self.field, (self.field.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.field.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return UniPoly(self.field, out)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return self.scale(other.value)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return UniPoly(self.field, convolve(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c) -> 'UniPoly':
        """Multiply by the raw field value c."""
        if c == self.field.one:
            return self
        mul = self.field.mul
        return UniPoly(self.field, [mul(c, a) for a in self.coeffs])

    def shift(self, n: int) -> 'UniPoly':
        """Multiply by x^n (n >= 0) or drop the n lowest terms (n < 0)."""
        if n >= 0:
            return UniPoly(self.field, [self.field.zero] * n + list(self.coeffs)) if self.coeffs else self
        return UniPoly(self.field, self.coeffs[-n:])

    def truncate(self, n: int) -> 'UniPoly':
        return UniPoly(self.field, self.coeffs[:max(n, 0)])

    def square(self) -> 'UniPoly':
        field = self.field
        out = []
        for c in self.coeffs:
            out.append(field.mul(c, c))
            out.append(field.zero)
        return UniPoly(field, out)

    def __pow__(self, n: int) -> 'UniPoly':
        if n < 0:
            raise PolyError("negative power of a polynomial")
        result = UniPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.square()
        return result

    def divmod(self, other: 'UniPoly'):
        if not other.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        field = self.field
        if self.deg < other.deg:
            return UniPoly.zero(field), self
        if isinstance(field, FqField) and field.m == 1:
            q, r = gf2x.divmod_(_pack_bits(self.coeffs), _pack_bits(other.coeffs))
            return (UniPoly(field, _unpack_bits(q, q.bit_length())),
                    UniPoly(field, _unpack_bits(r, r.bit_length())))
        zero = field.zero
        add = field.add
        mul = field.mul
        b = other.coeffs
        db = other.deg
        inv_lc = field.inv(b[-1])
        r = list(self.coeffs)
        q = [zero] * (self.deg - db + 1)
        for i in range(self.deg, db - 1, -1):
            c = r[i]
            if c == zero:
                continue
            f = mul(c, inv_lc)
            q[i - db] = f
            for j in range(db + 1):
                if b[j] != zero:
                    r[i - db + j] = add(r[i - db + j], mul(f, b[j]))
        return UniPoly(field, q), UniPoly(field, r[:db])

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def __truediv__(self, other):
        if isinstance(other, FieldElem):
            return self.scale(self.field.inv(other.value))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.deg == 0:
            return self.scale(self.field.inv(other.lc))
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RatFunc(other, self)

    def exact_div(self, other: 'UniPoly') -> 'UniPoly':
        q, r = self.divmod(other)
        if r:
            raise PolyError(f"{other} does not divide {self}")
        return q

    def monic(self) -> 'UniPoly':
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lc))

    # evaluation and substitution

    def __call__(self, v):
        """Evaluate at a raw field value (Horner)."""
        field = self.field
        r = field.zero
        for c in reversed(self.coeffs):
            r = field.add(field.mul(r, v), c)
        return r

    def map_coeffs(self, fn, field=None) -> 'UniPoly':
        field = field or self.field
        return UniPoly(field, [fn(c) for c in self.coeffs])

    def frob(self, k: int = 1) -> 'UniPoly':
        """Apply the Frobenius to every coefficient."""
        field = self.field
        return UniPoly(field, [field.frob(c, k) for c in self.coeffs])

    def compose_monomial(self, k: int) -> 'UniPoly':
        """p(x^k)."""
        field = self.field
        out = [field.zero] * (self.deg * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return UniPoly(field, out)

    def compose(self, other: 'UniPoly') -> 'UniPoly':
        """p(other(x))."""
        r = UniPoly.zero(self.field)
        for c in reversed(self.coeffs):
            r = r * other + UniPoly(self.field, (c,))
        return r

    def taylor_shift(self, alpha) -> 'UniPoly':
        """p(x + alpha) for a raw field value alpha."""
        field = self.field
        c = list(self.coeffs)
        n = len(c)
        # repeated synthetic division
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] = field.add(c[j], field.mul(alpha, c[j + 1]))
        return UniPoly(field, c)

    def derivative(self) -> 'UniPoly':
        field = self.field
        return UniPoly(field, [c if i % 2 else field.zero
                               for i, c in enumerate(self.coeffs)][1:])

    def reverse(self, n: int = None) -> 'UniPoly':
        """x^n p(1/x); n defaults to deg p."""
        if not self.coeffs:
            raise PolyError("reversal of the zero polynomial")
        n = self.deg if n is None else n
        if n < self.deg:
            raise PolyError(f"reversal length {n} below degree {self.deg}")
        field = self.field
        return UniPoly(field, [field.zero] * (n - self.deg) + list(reversed(self.coeffs)))


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor."""
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a: UniPoly, b: UniPoly):
    """Return g, s, t with s a + t b = g monic."""
    field = a.field
    s, s1 = UniPoly.one(field), UniPoly.zero(field)
    t, t1 = UniPoly.zero(field), UniPoly.one(field)
    while b:
        q, r = a.divmod(b)
        a, b = b, r
        s, s1 = s1, s - q * s1
        t, t1 = t1, t - q * t1
    if not a:
        return a, s, t
    inv = field.inv(a.lc)
    return a.scale(inv), s.scale(inv), t.scale(inv)


def lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    return (a * b // gcd(a, b)).monic()


def powmod(base: UniPoly, e: int, modulus: UniPoly) -> UniPoly:
    result = UniPoly.one(base.field)
    base = base % modulus
    while e:
        if e & 1:
            result = (result * base) % modulus
        e >>= 1
        if e:
            base = base.square() % modulus
    return result % modulus


def frobenius_power(h: UniPoly, k: int, modulus: UniPoly) -> UniPoly:
    """h^(2^k) modulo modulus."""
    h = h % modulus
    for _ in range(k):
        h = h.square() % modulus
    return h


# factorization over finite fields

def is_squarefree(p: UniPoly) -> bool:
    if p.deg <= 0:
        return True
    d = p.derivative()
    if not d:
        return False
    return gcd(p, d).deg == 0


def _abs_degree(field) -> int:
    if field.m is None:
        raise PolyError(f"factorization needs a finite field, not {field!r}")
    return field.m


def is_irreducible(p: UniPoly) -> bool:
    """Rabin's test over F_Q, Q = 2^m."""
    m = _abs_degree(p.field)
    n = p.deg
    if n <= 0:
        return False
    if n == 1:
        return True
    x = UniPoly.x(p.field)
    if frobenius_power(x, m * n, p) != x % p:
        return False
    for r in gf2x._prime_divisors(n):
        h = frobenius_power(x, m * (n // r), p)
        if gcd(h - x, p).deg != 0:
            return False
    return True


def distinct_degree(p: UniPoly):
    """Pairs (g, d): g is the product of the irreducible factors of degree d of a monic squarefree p."""
    m = _abs_degree(p.field)
    field = p.field
    out = []
    x = UniPoly.x(field)
    h = x
    rest = p.monic()
    d = 0
    while rest.deg >= 2 * (d + 1):
        d += 1
        h = frobenius_power(h, m, rest)
        g = gcd(h - x, rest)
        if g.deg > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.deg > 0:
        out.append((rest, rest.deg))
    return out


def equal_degree(g: UniPoly, d: int, rng=None):
    """Split a monic squarefree product of degree-d irreducibles, trace map in characteristic 2."""
    if g.deg == d:
        return [g]
    rng = rng or _random.Random(0x6e70)
    field = g.field
    m = _abs_degree(field)
    while True:
        r = UniPoly(field, [field.random(rng) for _ in range(g.deg)])
        if r.deg <= 0:
            continue
        t = r % g
        acc = t
        for _ in range(m * d - 1):
            t = t.square() % g
            acc = acc + t
        h = gcd(acc, g)
        if 0 < h.deg < g.deg:
            return equal_degree(h, d, rng) + equal_degree(g // h, d, rng)


def factor_squarefree(p: UniPoly, rng=None):
    """Monic irreducible factors of a squarefree polynomial, sorted by (degree, coefficients)."""
    if not is_squarefree(p):
        raise PolyError(f"{p} is not squarefree")
    factors = []
    for g, d in distinct_degree(p.monic()):
        factors.extend(equal_degree(g, d, rng))
    return sorted(factors, key=lambda f: (f.deg, f.coeffs))


def roots(p: UniPoly, rng=None):
    """Distinct roots in the coefficient field."""
    if p.deg <= 0:
        return []
    field = p.field
    x = UniPoly.x(field)
    m = _abs_degree(field)
    g = gcd(frobenius_power(x, m, p.monic()) - x, p.monic())
    if g.deg <= 0:
        return []
    return sorted(f.coeffs[0] for f in equal_degree(g, 1, rng))


class RatFunc:
    """Reduced fraction num/den with a monic denominator."""

    __slots__ = ('num', 'den')

    def __init__(self, num: UniPoly, den: UniPoly = None, reduce: bool = True):
        field = num.field if num.coeffs or den is None else den.field
        if den is None:
            den = UniPoly.one(field)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = UniPoly.zero(field), UniPoly.one(field)
        elif reduce:
            g = gcd(num, den)
            if g.deg > 0:
                num = num // g
                den = den // g
            if den.lc != field.one:
                inv = field.inv(den.lc)
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field if self.num.coeffs else self.den.field

    @classmethod
    def zero(cls, field):
        return cls(UniPoly.zero(field), UniPoly.one(field), reduce=False)

    @classmethod
    def one(cls, field):
        return cls(UniPoly.one(field), UniPoly.one(field), reduce=False)

    @classmethod
    def parse(cls, text: str, field, var: str = 'x') -> 'RatFunc':
        from .textfmt import evaluate
        env = {var: UniPoly.x(field)}
        if getattr(field, 'symbol', None) and field.symbol != var:
            env[field.symbol] = field.gen
        value = evaluate(text, env, one=cls.one(field))
        return cls._coerce_to(field, value)

    @staticmethod
    def _coerce_to(field, value) -> 'RatFunc':
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, UniPoly):
            return RatFunc(value, reduce=False)
        if isinstance(value, FieldElem):
            return RatFunc(UniPoly(field, (value.value,)), reduce=False)
        return RatFunc(UniPoly(field, (field.from_int(value),)), reduce=False)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.deg == 0

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (UniPoly, FieldElem, int)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (UniPoly, FieldElem, int)):
            return RatFunc._coerce_to(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int) -> 'RatFunc':
        if n < 0:
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n, reduce=False)

    def frob(self, k: int = 1) -> 'RatFunc':
        return RatFunc(self.num.frob(k), self.den.frob(k), reduce=False)

    def __call__(self, v):
        d = self.den(v)
        if self.field.is_zero(d):
            raise ZeroDivisionError("pole of a rational function")
        return self.field.div(self.num(v), d)

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = 'x') -> str:
        num = self.num.to_text(var)
        if self.den.deg == 0:
            return num
        den = self.den.to_text(var)
        if len([c for c in self.num.coeffs if c != self.field.zero]) > 1:
            num = f"({num})"
        if len([c for c in self.den.coeffs if c != self.field.zero]) > 1:
            den = f"({den})"
        return f"{num}/{den}"
