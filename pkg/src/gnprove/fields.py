"""Coefficient fields: F_{2^m} with log tables, and the rational function field F_2(a).

Both field classes share one protocol. Elements are plain hashable Python
values (an int for F_{2^m}, a reduced (num, den) pair of ints for F_2(a)) and
the field object does the arithmetic, the way FField does it. FieldElem wraps
a value with operators for user-facing code.
"""
import json
import logging
import random as _random
from collections import namedtuple
from functools import lru_cache
from pathlib import Path

from . import GnProveError
from . import gf2x

log = logging.getLogger(__name__)

# Log/antilog tables are built up to this extension degree
TABLE_LIMIT = 16

MODULI_FILE = Path(__file__).parent / 'data' / 'moduli.json'


class FieldError(GnProveError):
    pass


FrobeniusOrbits = namedtuple('FrobeniusOrbits', ['orbits', 'representatives'])


def _factor_text(modulus: int) -> str:
    """Name one irreducible factor of a reducible F_2 polynomial."""
    from sympy import Poly, symbols

    u = symbols('u')
    coeffs = [(modulus >> i) & 1 for i in range(gf2x.degree(modulus), -1, -1)]
    _, factors = Poly(coeffs, u, modulus=2).factor_list()
    bits = 0
    for c in factors[0][0].all_coeffs():
        bits = (bits << 1) | (int(c) % 2)
    return gf2x.to_text(bits)


class FqField:
    """The field F_{2^m} = F_2[u]/(modulus), elements are ints below 2^m."""

    char = 2

    def __init__(self, m: int, modulus: int, symbol: str = 'u'):
        if m < 1 or gf2x.degree(modulus) != m:
            raise FieldError(f"modulus {gf2x.to_text(modulus)} does not have degree {m}")
        if not gf2x.is_irreducible(modulus):
            raise FieldError(f"modulus {gf2x.to_text(modulus)} is reducible, "
                             f"it has the factor {_factor_text(modulus)}")
        self.m = m
        self.modulus = modulus
        self.symbol = symbol
        self.order = 1 << m
        self.zero = 0
        self.one = 1
        self._np = None
        if m <= TABLE_LIMIT:
            self._exp, self._log = self._log_tables()
        else:
            self._exp = self._log = None

    def _primitive_element(self) -> int:
        n = self.order - 1
        if n == 1:
            return 1
        primes = gf2x._prime_divisors(n)
        for c in range(2, self.order):
            if all(gf2x.powmod(c, n // p, self.modulus) != 1 for p in primes):
                return c
        raise FieldError("no primitive element")  # unreachable for a field

    def _log_tables(self):
        n = self.order - 1
        g = self._primitive_element()
        exp = [0] * (2 * n + 1)
        logt = [0] * self.order
        e = 1
        for i in range(n):
            exp[i] = e
            logt[e] = i
            e = gf2x.mulmod(e, g, self.modulus)
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        return exp, logt

    def np_tables(self):
        """Exp/log tables as numpy arrays, for vectorized residue arithmetic."""
        if self._np is None:
            import numpy as np
            self._np = (np.array(self._exp, dtype=np.int64), np.array(self._log, dtype=np.int64))
        return self._np

    def __eq__(self, other):
        return isinstance(other, FqField) and other.m == self.m and other.modulus == self.modulus

    def __hash__(self):
        return hash(('Fq', self.m, self.modulus))

    def __repr__(self):
        return f"F_{{2^{self.m}}}[{gf2x.to_text(self.modulus)}]"

    @property
    def degree(self) -> int:
        return self.m

    @property
    def gen(self):
        return FieldElem(self, gf2x.mod(2, self.modulus))

    def __call__(self, value) -> 'FieldElem':
        if isinstance(value, str):
            return self.parse(value)
        return FieldElem(self, self.reduce(value))

    def reduce(self, bits: int) -> int:
        return gf2x.mod(bits, self.modulus) if bits >> self.m else bits

    def from_int(self, n: int) -> int:
        return n & 1

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def neg(self, a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._exp is None:
            return gf2x.mulmod(a, b, self.modulus)
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._exp is None:
            return gf2x.invert(a, self.modulus)
        return self._exp[(self.order - 1) - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return 1
        if not a:
            return 0
        if self._exp is None:
            return gf2x.powmod(a, n, self.modulus)
        return self._exp[(self._log[a] * n) % (self.order - 1)]

    def frob(self, a: int, k: int = 1) -> int:
        """a^(2^k); negative k inverts the Frobenius."""
        k %= self.m
        if not a or k == 0:
            return a
        return self.pow(a, 1 << k)

    def sqrt(self, a: int) -> int:
        return self.frob(a, -1)

    def trace(self, a: int) -> int:
        """Absolute trace to F_2."""
        t = 0
        for _ in range(self.m):
            t ^= a
            a = self.mul(a, a)
        return t

    def elements(self):
        return range(self.order)

    def random(self, rng=None, nonzero=False) -> int:
        rng = rng or _random
        return rng.randrange(1 if nonzero else 0, self.order)

    def in_subfield(self, a: int, d: int) -> bool:
        """Whether a lies in the subfield F_{2^d}."""
        return self.frob(a, d) == a

    def format(self, a: int) -> str:
        return gf2x.to_text(a, self.symbol)

    def needs_parens(self, a: int) -> bool:
        return bin(a).count('1') > 1

    def parse(self, text: str) -> 'FieldElem':
        from .textfmt import evaluate
        return evaluate(text, {self.symbol: self.gen}, one=FieldElem(self, 1))

    def element(self, value) -> 'FieldElem':
        return FieldElem(self, value)

    # numpy kernels used by the modular resultant

    def vmul(self, a, b):
        import numpy as np
        exp, lg = self.np_tables()
        r = exp[lg[a] + lg[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vinv(self, a):
        # zero maps to garbage; callers mask those entries
        exp, lg = self.np_tables()
        return exp[(self.order - 1) - lg[a]]

    def vpow(self, a, n: int):
        import numpy as np
        exp, lg = self.np_tables()
        if n == 0:
            return np.ones_like(a)
        r = exp[(lg[a] * n) % (self.order - 1)]
        return np.where(a == 0, 0, r)


class RationalFunctionField:
    """The field F_2(a), elements are reduced pairs (num, den) of packed F_2[a] polynomials."""

    char = 2
    m = None
    order = None
    degree = None

    def __init__(self, symbol: str = 'a'):
        self.symbol = symbol
        self.zero = (0, 1)
        self.one = (1, 1)

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.symbol == self.symbol

    def __hash__(self):
        return hash(('F2(t)', self.symbol))

    def __repr__(self):
        return f"F_2({self.symbol})"

    @property
    def gen(self):
        return FieldElem(self, (2, 1))

    def __call__(self, value) -> 'FieldElem':
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, tuple):
            return FieldElem(self, self.make(*value))
        return FieldElem(self, (value, 1))

    def make(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if num == 0:
            return self.zero
        g = gf2x.gcd(num, den)
        if g != 1:
            num = gf2x.divmod_(num, g)[0]
            den = gf2x.divmod_(den, g)[0]
        return (num, den)

    def from_int(self, n: int):
        return (n & 1, 1)

    def is_zero(self, a) -> bool:
        return a[0] == 0

    def add(self, a, b):
        if a[0] == 0:
            return b
        if b[0] == 0:
            return a
        if a[1] == b[1]:
            return self.make(a[0] ^ b[0], a[1])
        return self.make(gf2x.mul(a[0], b[1]) ^ gf2x.mul(b[0], a[1]), gf2x.mul(a[1], b[1]))

    sub = add

    def neg(self, a):
        return a

    def mul(self, a, b):
        if a[0] == 0 or b[0] == 0:
            return self.zero
        # cross-reduce first to keep the operands small
        g1 = gf2x.gcd(a[0], b[1])
        g2 = gf2x.gcd(b[0], a[1])
        n = gf2x.mul(gf2x.divmod_(a[0], g1)[0], gf2x.divmod_(b[0], g2)[0])
        d = gf2x.mul(gf2x.divmod_(a[1], g2)[0], gf2x.divmod_(b[1], g1)[0])
        return (n, d)

    def inv(self, a):
        if a[0] == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return (a[1], a[0])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def frob(self, a, k: int = 1):
        """Coefficientwise Frobenius a(t) -> a(t)^(2^k); only k >= 0 exists here."""
        if k < 0:
            raise FieldError("the Frobenius of F_2(a) is not invertible")
        n, d = a
        for _ in range(k):
            n, d = gf2x.square(n), gf2x.square(d)
        return (n, d)

    def random(self, rng=None, nonzero=False, max_degree: int = 3):
        rng = rng or _random
        while True:
            n = rng.randrange(0, 1 << (max_degree + 1))
            d = rng.randrange(1, 1 << (max_degree + 1))
            if n or not nonzero:
                return self.make(n, d)

    def elements(self):
        raise FieldError("F_2(a) is infinite")

    def format(self, a) -> str:
        n, d = a
        num = gf2x.to_text(n, self.symbol)
        if d == 1:
            return num
        den = gf2x.to_text(d, self.symbol)
        if bin(n).count('1') > 1:
            num = f"({num})"
        if bin(d).count('1') > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def needs_parens(self, a) -> bool:
        return a[1] != 1 or bin(a[0]).count('1') > 1

    def parse(self, text: str) -> 'FieldElem':
        from .textfmt import evaluate
        return evaluate(text, {self.symbol: self.gen}, one=FieldElem(self, self.one))

    def element(self, value) -> 'FieldElem':
        return FieldElem(self, value)

    def specialize(self, a, field: FqField, point: int) -> int:
        """Evaluate a at the symbol = point of a finite field."""
        n, d = a
        dv = _eval_bits(d, field, point)
        if not dv:
            raise ZeroDivisionError(f"denominator vanishes at {field.format(point)}")
        return field.div(_eval_bits(n, field, point), dv)

    def poly_bits(self, a) -> int:
        """The packed polynomial of an element with denominator 1."""
        if a[1] != 1:
            raise FieldError(f"{self.format(a)} is not a polynomial in {self.symbol}")
        return a[0]


def _eval_bits(bits: int, field: FqField, point: int) -> int:
    r = 0
    for i in range(gf2x.degree(bits), -1, -1):
        r = field.mul(r, point)
        if (bits >> i) & 1:
            r ^= 1
    return r


class FieldElem:
    """An element of a coefficient field with Python operators."""

    __slots__ = ('field', 'value')

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError(f"mixing {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.field.add(self.value, v))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.field.div(self.value, v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.field.div(v, self.value))

    def __pow__(self, n: int):
        return FieldElem(self.field, self.field.pow(self.value, n))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def frob(self, k: int = 1):
        return FieldElem(self.field, self.field.frob(self.value, k))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.field.from_int(other) and other in (0, 1)
        return isinstance(other, FieldElem) and other.field == self.field and other.value == self.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"FieldElem({self.field.format(self.value)!r} in {self.field!r})"


@lru_cache(maxsize=None)
def default_modulus(m: int) -> int:
    with open(MODULI_FILE, 'r') as f:
        table = json.load(f)
    if str(m) in table:
        return int(table[str(m)], 16)
    # beyond the shipped table: least irreducible of degree m
    return gf2x.next_irreducible(1 << m)


def _modulus_from_text(text: str, symbol: str) -> int:
    from .poly import UniPoly
    f2 = _cached_field(1, 0b11, symbol)
    p = UniPoly.parse(text, f2, symbol)
    bits = 0
    for i, c in enumerate(p.coeffs):
        if c:
            bits |= 1 << i
    return bits


@lru_cache(maxsize=None)
def _cached_field(m: int, modulus: int, symbol: str) -> FqField:
    log.debug(f"building F_2^{m} with modulus {gf2x.to_text(modulus)}")
    return FqField(m, modulus, symbol)


def field_make(p: int = 2, m: int = 1, modulus='default', symbol: str = 'u') -> FqField:
    """A handle on F_{p^m}; only p = 2 is supported."""
    if p != 2:
        raise FieldError(f"characteristic {p} is not supported, only 2")
    if isinstance(modulus, str):
        modulus = default_modulus(m) if modulus == 'default' else _modulus_from_text(modulus, symbol)
    return _cached_field(m, modulus, symbol)


def frobenius_orbits(field: FqField) -> FrobeniusOrbits:
    """Orbits of x -> x^2 on F_{2^m} minus {0, 1}, plus one representative per full-size orbit."""
    seen = set()
    orbits = []
    reps = []
    for e in range(2, field.order):
        if e in seen:
            continue
        orbit = [e]
        f = field.frob(e)
        while f != e:
            orbit.append(f)
            f = field.frob(f)
        seen.update(orbit)
        orbits.append(tuple(FieldElem(field, v) for v in orbit))
        if len(orbit) == field.m:
            reps.append(FieldElem(field, min(orbit)))
    return FrobeniusOrbits(orbits, reps)


@lru_cache(maxsize=None)
def embedding(src: FqField, dst: FqField):
    """Images of all elements of src in dst, via a root of src's modulus."""
    if dst.m % src.m:
        raise FieldError(f"{src!r} does not embed in {dst!r}")
    if src.m == 1:
        return (0, 1)
    if src == dst:
        return tuple(range(src.order))
    # the roots of src.modulus lie in the subfield of order src.order
    step = (dst.order - 1) // (src.order - 1)
    g = dst._primitive_element()
    root = None
    for k in range(1, src.order - 1):
        r = dst.pow(g, k * step)
        if _eval_bits(src.modulus, dst, r) == 0:
            root = r
            break
    if root is None:
        raise FieldError(f"no root of {gf2x.to_text(src.modulus)} in {dst!r}")
    powers = [1]
    for _ in range(1, src.m):
        powers.append(dst.mul(powers[-1], root))
    images = []
    for v in range(src.order):
        img = 0
        for i in range(src.m):
            if (v >> i) & 1:
                img ^= powers[i]
        images.append(img)
    return tuple(images)
