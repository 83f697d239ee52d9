"""Polynomials in y with F_q[x] coefficients, and irreducibility over F_q(x).

A BiPoly is dense in y: coeffs[i] is the UniPoly in x multiplying y^i.
Annihilating polynomials are kept primitive (content 1 in F_q[x]) with a
deterministic scalar normalization so that printed forms compare bit-exactly.
"""
import logging
import random as _random
from collections import namedtuple
from math import gcd as igcd

from . import GnProveError
from . import gf2x
from .fields import FieldElem, FqField, RationalFunctionField, embedding, field_make
from .poly import UniPoly, RatFunc, gcd, factor_squarefree, is_squarefree, xgcd

log = logging.getLogger(__name__)

# largest absolute extension degree used for specializations x = alpha
MAX_SPECIALIZATION_DEGREE = 20


class BiPolyError(GnProveError):
    pass


FactorCert = namedtuple('FactorCert', ['multiplicity', 'cofactor', 'irreducible'])


class BiPoly:
    """P(x, y) = sum coeffs[i](x) y^i."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def one(cls, field):
        return cls(field, (UniPoly.one(field),))

    @classmethod
    def y(cls, field):
        return cls(field, (UniPoly.zero(field), UniPoly.one(field)))

    @classmethod
    def x(cls, field):
        return cls(field, (UniPoly.x(field),))

    @classmethod
    def from_terms(cls, field, terms: dict):
        """Build from a sparse {y exponent: UniPoly} map."""
        if not terms:
            return cls(field)
        c = [UniPoly.zero(field)] * (max(terms) + 1)
        for e, p in terms.items():
            c[e] = p
        return cls(field, c)

    @classmethod
    def from_ratfuncs(cls, field, coeffs):
        """Clear the denominators of RatFunc coefficients."""
        den = UniPoly.one(field)
        for c in coeffs:
            if isinstance(c, RatFunc):
                den = den * c.den // gcd(den, c.den)
        out = []
        for c in coeffs:
            if isinstance(c, RatFunc):
                out.append(c.num * (den // c.den))
            else:
                out.append(c * den)
        return cls(field, out)

    @classmethod
    def parse(cls, text: str, field, xvar: str = 'x', yvar: str = 'y') -> 'BiPoly':
        from .textfmt import evaluate
        env = {xvar: cls.x(field), yvar: cls.y(field)}
        if getattr(field, 'symbol', None) and field.symbol not in env:
            env[field.symbol] = field.gen
        value = evaluate(text, env, one=cls.one(field))
        if isinstance(value, FieldElem):
            return cls(field, (UniPoly.constant(field, value.value),))
        return value

    # structure

    @property
    def ydeg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def xdeg(self) -> int:
        return max((c.deg for c in self.coeffs), default=-1)

    @property
    def lc(self) -> UniPoly:
        return self.coeffs[-1] if self.coeffs else UniPoly.zero(self.field)

    def coeff(self, i: int) -> UniPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else UniPoly.zero(self.field)

    def terms(self) -> dict:
        """Sparse view {y exponent: coefficient}."""
        return {i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElem, UniPoly)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(c.coeffs for c in self.coeffs))

    def __repr__(self):
        return f"BiPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self, xvar: str = 'x', yvar: str = 'y') -> str:
        """Descending powers of y, e.g. 'y^4 + x^3y^2 + (x^5 + x^4)y + x^3 + x^2 + 1'."""
        if not self.coeffs:
            return '0'
        terms = []
        for i in range(self.ydeg, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = '' if i == 0 else (yvar if i == 1 else f"{yvar}^{i}")
            ctext = c.to_text(xvar)
            if i == 0:
                terms.append(ctext)
            elif c == UniPoly.one(self.field):
                terms.append(mono)
            elif sum(1 for a in c.coeffs if a != self.field.zero) > 1:
                terms.append(f"({ctext}){mono}")
            else:
                terms.append(ctext + mono)
        return ' + '.join(terms)

    # arithmetic

    def _lift(self, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, UniPoly):
            return BiPoly(self.field, (other,))
        if isinstance(other, FieldElem):
            return BiPoly(self.field, (UniPoly(self.field, (other.value,)),))
        if isinstance(other, int):
            return BiPoly(self.field, (UniPoly(self.field, (self.field.from_int(other),)),))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return BiPoly(self.field, out)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return BiPoly(self.field)
        zero = UniPoly.zero(self.field)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return BiPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'BiPoly':
        result = BiPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, FieldElem):
            inv = self.field.inv(other.value)
            return self.map(lambda c: c.scale(inv))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        q = exact_divide(self, other)
        if q is None:
            raise BiPolyError(f"{other} does not divide {self}")
        return q

    def map(self, fn) -> 'BiPoly':
        """Apply fn to every x-coefficient."""
        return BiPoly(self.field, [fn(c) for c in self.coeffs])

    def scale_x(self, p: UniPoly) -> 'BiPoly':
        return BiPoly(self.field, [c * p for c in self.coeffs])

    def frob(self, k: int = 1) -> 'BiPoly':
        return self.map(lambda c: c.frob(k))

    def derivative_y(self) -> 'BiPoly':
        zero = UniPoly.zero(self.field)
        return BiPoly(self.field, [c if i % 2 else zero for i, c in enumerate(self.coeffs)][1:])

    def eval_x(self, v) -> UniPoly:
        """The univariate polynomial in y at x = v (raw field value)."""
        return UniPoly(self.field, [c(v) for c in self.coeffs])

    def eval_y(self, p: UniPoly) -> UniPoly:
        """P(x, p(x))."""
        r = UniPoly.zero(self.field)
        for c in reversed(self.coeffs):
            r = r * p + c
        return r

    def shift_y(self, n: int) -> 'BiPoly':
        return BiPoly(self.field, [UniPoly.zero(self.field)] * n + list(self.coeffs)) if self.coeffs else self

    def reverse_x(self, n: int = None) -> 'BiPoly':
        """x^n P(1/x, y), n defaults to the x-degree."""
        n = self.xdeg if n is None else n
        return self.map(lambda c: c.reverse(n) if c else c)

    def compose_x(self, p: UniPoly) -> 'BiPoly':
        """P(p(x), y)."""
        return self.map(lambda c: c.compose(p))

    def y_exponent_gcd(self) -> int:
        """gcd of the exponents of y with a nonzero coefficient (0 for constants)."""
        g = 0
        for i, c in enumerate(self.coeffs):
            if c:
                g = igcd(g, i)
        return g

    def deflate(self, g: int) -> 'BiPoly':
        """Q with P(x, y) = Q(x, y^g)."""
        return BiPoly(self.field, self.coeffs[::g])

    def inflate(self, g: int) -> 'BiPoly':
        """P(x, y^g)."""
        zero = UniPoly.zero(self.field)
        out = []
        for c in self.coeffs:
            out.append(c)
            out.extend([zero] * (g - 1))
        return BiPoly(self.field, out)

    # content and normalization

    def content(self) -> UniPoly:
        g = UniPoly.zero(self.field)
        for c in self.coeffs:
            if c:
                g = gcd(g, c)
                if g.deg == 0:
                    break
        return g

    def primitive(self) -> 'BiPoly':
        """Divide out the content in F_q[x]."""
        if not self.coeffs:
            return self
        g = self.content()
        if g.deg <= 0:
            return self
        return BiPoly(self.field, [c // g for c in self.coeffs])

    def normalize(self) -> 'BiPoly':
        """Primitive part scaled so that the leading y-coefficient is monic in x."""
        p = self.primitive()
        if not p.coeffs:
            return p
        inv = self.field.inv(p.lc.lc)
        return p.map(lambda c: c.scale(inv))

    def is_primitive(self) -> bool:
        return self.content().deg == 0


def bipoly_divmod(a: BiPoly, b: BiPoly):
    """Division in y over F_q[x]; returns (q, r) or None when a leading x-division is inexact."""
    if not b:
        raise ZeroDivisionError("division by zero BiPoly")
    field = a.field
    rem = list(a.coeffs)
    db = b.ydeg
    lcb = b.lc
    if a.ydeg < db:
        return BiPoly(field), a
    q = [UniPoly.zero(field)] * (a.ydeg - db + 1)
    for i in range(a.ydeg, db - 1, -1):
        c = rem[i]
        if not c:
            continue
        f, r = c.divmod(lcb)
        if r:
            return None
        q[i - db] = f
        for j, bc in enumerate(b.coeffs):
            if bc:
                rem[i - db + j] = rem[i - db + j] + f * bc
    return BiPoly(field, q), BiPoly(field, rem[:db])


def exact_divide(a: BiPoly, b: BiPoly):
    """a / b in F_q[x][y] when b divides a, otherwise None."""
    if b.ydeg == 0:
        c = b.lc
        out = []
        for p in a.coeffs:
            q, r = p.divmod(c)
            if r:
                return None
            out.append(q)
        return BiPoly(a.field, out)
    res = bipoly_divmod(a, b)
    if res is None or res[1]:
        return None
    return res[0]


def pseudo_remainder(a: BiPoly, b: BiPoly) -> BiPoly:
    """lc(b)^(deg a - deg b + 1) a mod b, in y over F_q[x]."""
    if not b:
        raise ZeroDivisionError("pseudo-remainder by zero BiPoly")
    rem = list(a.coeffs)
    db, lcb = b.ydeg, b.lc
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        rem = [r * lcb for r in rem[:i]]
        if c:
            for j, bc in enumerate(b.coeffs[:-1]):
                if bc:
                    rem[i - db + j] = rem[i - db + j] - c * bc
    return BiPoly(a.field, rem)


def bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Greatest common divisor over F_q(x), normalized; factors free of y are dropped."""
    a, b = a.primitive(), b.primitive()
    if a.ydeg < b.ydeg:
        a, b = b, a
    while b and b.ydeg > 0:
        a, b = b, pseudo_remainder(a, b).primitive()
    if b:
        return BiPoly.one(a.field)
    return a.normalize()


def multiplicity(p: BiPoly, q: BiPoly):
    """Largest m with q^m | p, and p / q^m."""
    if not q or q.ydeg < 1:
        raise BiPolyError("multiplicity needs a factor of positive y-degree")
    m = 0
    rest = p
    while True:
        nxt = exact_divide(rest, q)
        if nxt is None:
            return m, rest
        m += 1
        rest = nxt


# irreducibility over F_q(x)

def _squarefree_point(q: BiPoly, values, limit: int):
    """Points v (raw values of the coefficient field of the evaluations) with lc(v) != 0 and q(v, y) squarefree."""
    found = []
    for v in values:
        u = q.eval_x(v)
        if u.deg == q.ydeg and is_squarefree(u):
            found.append(v)
            if len(found) >= limit:
                break
    return found


def _lift_to(q: BiPoly, big: FqField) -> BiPoly:
    """q with coefficients mapped into the extension field big."""
    if q.field == big:
        return q
    images = embedding(q.field, big)
    return BiPoly(big, [c.map_coeffs(lambda a: images[a], big) for c in q.coeffs])


def _degree_sums(degrees):
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _hensel(q: BiPoly, alpha, factors, precision: int):
    """Lift q(x + alpha, y) / lc = prod factors (mod x) to mod x^precision.

    Series in x are lists indexed by the power of x whose entries are
    UniPoly in y; the returned factors are in that representation.
    """
    field = factors[0].field
    shifted = [c.taylor_shift(alpha) for c in q.coeffs]
    # lc(x + alpha) as a unit power series in x, and its inverse
    lc = list(shifted[-1].coeffs) + [field.zero] * precision
    inv = [field.zero] * precision
    inv[0] = field.inv(lc[0])
    for k in range(1, precision):
        acc = field.zero
        for i in range(1, k + 1):
            acc = field.add(acc, field.mul(lc[i], inv[k - i]))
        inv[k] = field.mul(acc, inv[0])
    # F monic in y: coefficient of x^k is a UniPoly in y
    F = []
    for k in range(precision):
        ys = []
        for c in shifted:
            acc = field.zero
            for i in range(k + 1):
                acc = field.add(acc, field.mul(c.coeff(i), inv[k - i]))
            ys.append(acc)
        F.append(UniPoly(field, ys))
    return _lift_tree(F, factors, precision)


def _series_mul(a, b, precision):
    zero = UniPoly.zero(a[0].field)
    out = [zero] * precision
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(min(len(b), precision - i)):
            if b[j]:
                out[i + j] = out[i + j] + ai * b[j]
    return out


def _lift_tree(F, factors, precision):
    if len(factors) == 1:
        return [F]
    half = len(factors) // 2
    g0 = factors[0]
    for f in factors[1:half]:
        g0 = g0 * f
    h0 = factors[half]
    for f in factors[half + 1:]:
        h0 = h0 * f
    G, H = _lift_pair(F, g0, h0, precision)
    return _lift_tree(G, factors[:half], precision) + _lift_tree(H, factors[half:], precision)


def _lift_pair(F, g0, h0, precision):
    """Linear lifting of F = G H with G = g0, H = h0 mod x; g0 monic, g0 and h0 coprime."""
    field = g0.field
    one, s, t = xgcd(g0, h0)
    if one.deg != 0:
        raise BiPolyError("Hensel lifting of non-coprime factors")
    G = [g0] + [UniPoly.zero(field)] * (precision - 1)
    H = [h0] + [UniPoly.zero(field)] * (precision - 1)
    for k in range(1, precision):
        e = F[k]
        for i in range(k + 1):
            if G[i] and H[k - i]:
                e = e + G[i] * H[k - i]
        if not e:
            continue
        # g h0 + h g0 = e with deg g < deg g0, deg h < deg h0
        G[k] = (t * e) % g0
        H[k] = (s * e) % h0
    return G, H


def _recombine(q: BiPoly, alpha, lifted, precision: int, base, images_inv) -> bool:
    """True when some product of lifted factors yields a proper factor of q over the base field."""
    from itertools import combinations

    field = lifted[0][0].field
    lc_shift = q.lc.taylor_shift(alpha)
    lc_series = [UniPoly(field, (lc_shift.coeff(i),)) for i in range(precision)]
    r = len(lifted)
    for size in range(1, r // 2 + 1):
        for subset in combinations(range(r), size):
            prod = lc_series
            for i in subset:
                prod = _series_mul(prod, lifted[i], precision)
            # prod[k] is the y-polynomial coefficient of x^k; regroup by powers of y
            ydeg = max((p.deg for p in prod), default=-1)
            coeffs = []
            ok = True
            for j in range(ydeg + 1):
                xs = UniPoly(field, [prod[k].coeff(j) for k in range(precision)])
                back = xs.taylor_shift(alpha)
                raw = []
                for c in back.coeffs:
                    v = images_inv.get(c)
                    if v is None:
                        ok = False
                        break
                    raw.append(v)
                if not ok:
                    break
                coeffs.append(UniPoly(base, raw))
            if not ok:
                continue
            cand = BiPoly(base, coeffs).primitive()
            if 0 < cand.ydeg < q.ydeg and exact_divide(q, cand) is not None:
                log.debug(f"factor of y-degree {cand.ydeg} found by recombination")
                return True
    return False


def is_irreducible(q: BiPoly, rng=None, tries: int = 4):
    """Decide irreducibility in y over F_q(x): True, False, or None when undecided."""
    if isinstance(q.field, RationalFunctionField):
        return _is_irreducible_symbolic(q, rng)
    rng = rng or _random.Random(0x1dea)
    p = q.primitive()
    if p.ydeg <= 0:
        return False
    if p.ydeg == 1:
        return True
    if not p.derivative_y():
        return _is_irreducible_inseparable(p, rng, tries)
    base = p.field
    degrees = None
    d = 0
    while base.m * (d + 1) <= MAX_SPECIALIZATION_DEGREE:
        d += 1
        big = base if d == 1 else field_make(2, base.m * d)
        pl = _lift_to(p, big)
        points = _squarefree_point(pl, _generators(big, base, d, rng), tries)
        if not points:
            continue
        best = None
        for alpha in points:
            factors = factor_squarefree(pl.eval_x(alpha), rng)
            if len(factors) == 1:
                log.debug(f"irreducible specialization at x = {big.format(alpha)}")
                return True
            sums = _degree_sums([f.deg for f in factors])
            degrees = sums if degrees is None else degrees & sums
            if best is None or len(factors) < len(best[1]):
                best = (alpha, factors)
        if not (degrees - {0, p.ydeg}):
            log.debug("factor degree patterns are incompatible")
            return True
        alpha, factors = best
        images = range(base.order) if big == base else embedding(base, big)
        images_inv = {img: v for v, img in enumerate(images)}
        precision = p.xdeg + 1
        lifted = _hensel(pl, alpha, factors, precision)
        return not _recombine(pl, alpha, lifted, precision, base, images_inv)
    return None


def _generators(big: FqField, base: FqField, d: int, rng, samples: int = 256):
    """Elements of big generating it over base: all of base when d = 1, random ones otherwise."""
    if d == 1:
        values = list(base.elements())
        rng.shuffle(values)
        yield from values
        return
    primes = gf2x._prime_divisors(d)
    for _ in range(samples):
        v = big.random(rng)
        if not any(big.in_subfield(v, base.m * (d // r)) for r in primes):
            yield v


def _is_square(p: UniPoly) -> bool:
    return all(p.coeff(i) == p.field.zero for i in range(1, p.deg + 1, 2))


def _is_irreducible_inseparable(p: BiPoly, rng, tries):
    # p(x, y) = p1(x, y^2); reducible when the monic p1 has square coefficients
    p1 = p.deflate(2)
    lc = p1.lc
    if all(_is_square(c * lc) for c in p1.coeffs):
        return False
    return is_irreducible(p1, rng, tries)


def _is_irreducible_symbolic(q: BiPoly, rng):
    """Over F_2(a): an irreducible specialization a = a0 of the same y-degree settles it."""
    rng = rng or _random.Random(0x1dea)
    p = q.primitive()
    if p.ydeg <= 0:
        return False
    if p.ydeg == 1:
        return True
    src = p.field
    for k in range(2, 9):
        target = field_make(2, k)
        for a0 in range(2, min(target.order, 6)):
            try:
                spec = BiPoly(target, [c.map_coeffs(lambda v: src.specialize(v, target, a0), target)
                                       for c in p.coeffs])
            except ZeroDivisionError:
                continue
            if spec.ydeg != p.ydeg:
                continue
            if is_irreducible(spec, rng):
                log.debug(f"irreducible specialization at a = {target.format(a0)}")
                return True
    return None


def bipoly_factor_cert(p: BiPoly, q: BiPoly) -> FactorCert:
    """Multiplicity m of q in p, the cofactor p / q^m and the irreducibility of q."""
    if not p:
        raise BiPolyError("factor certificate of the zero polynomial")
    if q.ydeg < 1:
        raise BiPolyError(f"{q} has no positive y-degree")
    qn = q.primitive()
    m, rest = multiplicity(p, qn)
    return FactorCert(m, rest, is_irreducible(qn))
