"""Slice relations of limit series and their proof on automata.

A slice relation states, for every N of an arithmetic progression,

    T[lo:hi] = sum_i c_i x^(s_i) T[lo_i:hi_i] + sum_p k_p x^(pos_p)

where every bound is an index expression c 2^N + d (c, d rational with odd
denominators) and every coefficient is a constant or a Frobenius image
b^(2^(N+e)). The positions inside a block of length 2^N are compared with
thresholds through their 2-adic digits, which turns the relation into finitely
many conditions on words w of N digits; the conditions are then checked on
the states A(0, w) of a DFAO, and the set of states reached repeats after
finitely many N.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import GnProveError
from .autoseq import AutomatonError, state_sets_step
from .fields import FieldElem
from .guess import GuessFailure
from .langspec import regex_state_image
from .messages import Status

log = logging.getLogger(__name__)

MAX_SEARCH = 64


class UnsupportedPattern(GnProveError):
    pass


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


# index expressions

@dataclass(frozen=True)
class IndexExpr:
    """c 2^N + d, displayed through named units such as u = 2^N."""

    c: Fraction
    d: Fraction
    parts: Tuple[Tuple[str, int], ...] = field(default=(), compare=False, hash=False)

    @classmethod
    def unit(cls, name: str, c, d=0) -> 'IndexExpr':
        return cls(_frac(c), _frac(d), ((name, 1),))

    @classmethod
    def const(cls, n: int) -> 'IndexExpr':
        return cls(Fraction(0), Fraction(n), (('', n),) if n else ())

    @classmethod
    def coerce(cls, v) -> 'IndexExpr':
        return v if isinstance(v, IndexExpr) else cls.const(int(v))

    def at(self, N: int) -> int:
        v = self.c * (1 << N) + self.d
        if v.denominator != 1:
            raise UnsupportedPattern(f"{self.text} is not an integer at N = {N}")
        return int(v)

    def _combine(self, other, sign: int) -> 'IndexExpr':
        other = IndexExpr.coerce(other)
        parts = dict(self.parts)
        for name, k in other.parts:
            parts[name] = parts.get(name, 0) + sign * k
        return IndexExpr(self.c + sign * other.c, self.d + sign * other.d,
                         tuple((n, k) for n, k in sorted(parts.items(), key=_part_order) if k))

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return IndexExpr.coerce(other)._combine(self, -1)

    def __neg__(self):
        return IndexExpr.const(0) - self

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return IndexExpr(self.c * k, self.d * k, tuple((n, v * k) for n, v in self.parts if v * k))

    __rmul__ = __mul__

    def advance(self, delta: int) -> 'IndexExpr':
        """The same expression read at N + delta, written in terms of N."""
        return IndexExpr(self.c * Fraction(2) ** delta, self.d, self.parts)

    @property
    def key(self):
        return (self.c, self.d)

    def __lt__(self, other):
        return self.key < IndexExpr.coerce(other).key

    def __le__(self, other):
        return self.key <= IndexExpr.coerce(other).key

    @property
    def is_const(self) -> bool:
        return self.c == 0

    @property
    def text(self) -> str:
        if not self.parts:
            if self.c == 0:
                return str(self.d)
            return f"{self.c}*2^N" + (f" + {self.d}" if self.d else '')
        out = []
        for name, k in self.parts:
            mag = abs(k)
            term = str(mag) if not name else (name if mag == 1 else f"{mag}{name}")
            out.append(('- ' if k < 0 else '+ ') + term if out else ('-' if k < 0 else '') + term)
        return ' '.join(out)

    def exponent_text(self) -> str:
        t = self.text
        return t if len(self.parts) <= 1 and ' ' not in t and not t.startswith('-') else f"({t})"

    def __str__(self):
        return self.text

    def to_dict(self) -> dict:
        return {'c': str(self.c), 'd': str(self.d), 'parts': [list(p) for p in self.parts]}

    @classmethod
    def from_dict(cls, data: dict) -> 'IndexExpr':
        return cls(Fraction(data['c']), Fraction(data['d']), tuple((n, int(k)) for n, k in data['parts']))


def _part_order(item):
    return (item[0] == '', item[0])


def settles_from(a: IndexExpr, b: IndexExpr) -> int:
    """Least N from which a.at(N) compares with b.at(N) as a.key with b.key."""
    dc, dd = b.c - a.c, b.d - a.d
    if dc == 0:
        return 0
    N = 0
    while True:
        v = dc * (1 << N) + dd
        if v != 0 and (v > 0) == (dc > 0):
            return N
        N += 1


@dataclass(frozen=True)
class ParamSpec:
    """N = start, start + step, ...; the matrix level is N + level_offset."""

    start: int
    step: int = 2
    level_offset: int = 0

    def contains(self, N: int) -> bool:
        return N >= self.start and (N - self.start) % self.step == 0

    def values(self, count: int, first: int = None) -> List[int]:
        N = self.start if first is None else self.first_at_least(first)
        return [N + i * self.step for i in range(count)]

    def first_at_least(self, n: int) -> int:
        if n <= self.start:
            return self.start
        r = (n - self.start) % self.step
        return n if r == 0 else n + self.step - r

    def level(self, N: int) -> int:
        return N + self.level_offset

    @property
    def text(self) -> str:
        return f"N = {self.start} + {self.step}k"

    def to_dict(self) -> dict:
        return {'start': self.start, 'step': self.step, 'level_offset': self.level_offset}

    @classmethod
    def from_dict(cls, data: dict) -> 'ParamSpec':
        return cls(int(data['start']), int(data['step']), int(data['level_offset']))


# coefficients depending on N

def _raw(v):
    return v.value if isinstance(v, FieldElem) else v


@dataclass(frozen=True)
class Coef:
    """const + sum frob^(N + e)(base)."""

    field: object = field(compare=False, hash=False)
    const: object = 0
    twisted: Tuple[Tuple[object, int], ...] = ()

    @classmethod
    def constant(cls, fld, value) -> 'Coef':
        return cls(fld, _raw(value))

    def at(self, N: int):
        fld = self.field
        v = self.const
        for base, e in self.twisted:
            v = fld.add(v, fld.frob(base, N + e))
        return v

    @property
    def period(self) -> int:
        return self.field.m if self.twisted and self.field.m else 1

    def is_zero(self) -> bool:
        return self.const == self.field.zero and not self.twisted

    def is_one(self) -> bool:
        return self.const == self.field.one and not self.twisted

    def __add__(self, other: 'Coef') -> 'Coef':
        fld = self.field
        const = fld.add(self.const, other.const)
        twisted = list(self.twisted)
        for t in other.twisted:
            if t in twisted:
                twisted.remove(t)
            else:
                twisted.append(t)
        return Coef(fld, const, tuple(sorted(twisted)))

    def text(self, power_unit: str = None) -> str:
        fld = self.field
        out = []
        for base, e in self.twisted:
            b = fld.format(base)
            if fld.needs_parens(base):
                b = f"({b})"
            if power_unit:
                exp = {0: power_unit, -1: f"{power_unit}/2", 1: f"2{power_unit}"}.get(e)
                exp = exp or f"{power_unit}*2^({e})"
            else:
                exp = f"2^(N{e:+d})" if e else "2^N"
            out.append(f"{b}^({exp})" if not exp.isalnum() else f"{b}^{exp}")
        if self.const != fld.zero or not out:
            out.append(fld.format(self.const))
        return ' + '.join(out)

    def to_dict(self) -> dict:
        fld = self.field
        return {'const': fld.format(self.const), 'twisted': [[fld.format(b), e] for b, e in self.twisted]}

    @classmethod
    def from_dict(cls, fld, data: dict) -> 'Coef':
        twisted = tuple((fld.parse(b).value, int(e)) for b, e in data['twisted'])
        return cls(fld, fld.parse(data['const']).value, twisted)


def fit_coefficient(fld, values: Dict[int, object]) -> Coef:
    """A Coef taking the given values at the given N: a constant, or c + frob^(N+e)(base)."""
    vals = {N: _raw(v) for N, v in values.items()}
    first = next(iter(vals.values()))
    if all(v == first for v in vals.values()):
        return Coef(fld, first)
    if fld.m is None:
        return _fit_rational(fld, vals)
    best = None
    for c in (fld.one, fld.zero):
        N0 = min(vals)
        base0 = fld.frob(fld.add(vals[N0], c), -N0)
        if not base0 or any(fld.add(fld.frob(base0, N), c) != v for N, v in vals.items()):
            continue
        # shortest base among the Frobenius conjugates, small |e| first
        for e in sorted(range(-fld.m + 1, fld.m), key=abs):
            b = fld.frob(base0, -e)
            score = (bin(b).count('1') + (c != fld.zero), c == fld.zero, b)
            if best is None or score < best[0]:
                best = (score, c, b, e)
    if best is None:
        raise GuessFailure(f"coefficient values {sorted(vals.items())} are not a Frobenius orbit")
    return Coef(fld, best[1], ((best[2], best[3]),))


def _root_2k(fld, a, k: int):
    """b with b^(2^k) = a in F_2(a), or None."""
    step = 1 << k
    out = []
    for bits in a:
        r, i = 0, 0
        while bits:
            if bits & 1:
                if i % step:
                    return None
                r |= 1 << (i // step)
            bits >>= 1
            i += 1
        out.append(r)
    return fld.make(*out)


def _fit_rational(fld, vals: Dict[int, object]) -> Coef:
    best = None
    for c in (fld.one, fld.zero):
        for e in (0, -1, 1):
            bases = set()
            for N, v in vals.items():
                b = _root_2k(fld, fld.add(v, c), N + e) if N + e >= 0 else None
                if b is None:
                    break
                bases.add(b)
            else:
                if len(bases) != 1:
                    continue
                b = bases.pop()
                if b == fld.zero:
                    continue
                score = (bin(b[0]).count('1') + bin(b[1]).count('1') + (c != fld.zero), c == fld.zero, abs(e))
                if best is None or score < best[0]:
                    best = (score, c, b, e)
    if best is None:
        raise GuessFailure(f"coefficient values {[fld.format(v) for _, v in sorted(vals.items())]} "
                           f"are not of the form c + b^(2^(N+e))")
    return Coef(fld, best[1], ((best[2], best[3]),))


# relations

@dataclass(frozen=True)
class SliceTerm:
    coef: Coef
    shift: IndexExpr
    lo: IndexExpr
    hi: IndexExpr


@dataclass(frozen=True)
class ConstTerm:
    coef: Coef
    position: IndexExpr


@dataclass(frozen=True)
class SliceRelation:
    """T[lo:hi] = terms + constants; a representation of a finite object when lo is None."""

    name: str
    param: ParamSpec
    lo: Optional[IndexExpr]
    hi: Optional[IndexExpr]
    terms: Tuple[SliceTerm, ...]
    constants: Tuple[ConstTerm, ...] = ()
    samples: Tuple[int, ...] = ()
    series_name: str = None
    power_unit: str = None
    ground: object = field(default=None, compare=False, hash=False)

    @property
    def kind(self) -> str:
        return 'finite' if self.lo is None else 'slice'

    @property
    def field(self):
        if self.ground is not None:
            return self.ground
        for t in self.terms:
            return t.coef.field
        for k in self.constants:
            return k.coef.field
        raise UnsupportedPattern(f"relation {self.name} has no terms")

    def coef_period(self) -> int:
        p = 1
        for c in [t.coef for t in self.terms] + [k.coef for k in self.constants]:
            p = p * c.period // gcd(p, c.period)
        return p

    def base_hi(self) -> Optional[IndexExpr]:
        """Highest bound among the unshifted terms, the part of the target taken as known."""
        his = [t.hi for t in self.terms if t.shift.key == (0, 0)]
        return max(his, key=lambda e: e.key) if his else self.lo

    def text(self) -> str:
        series = self.series_name or self.name
        lhs = f"{self.name}" if self.lo is None else \
            f"{series}[{'' if self.lo.key == (0, 0) else self.lo.text}:{self.hi.text}]"
        out = []
        for t in self.terms:
            part = '' if t.coef.is_one() else f"({t.coef.text(self.power_unit)})"
            if t.shift.key != (0, 0):
                part += f"x^{t.shift.exponent_text()}"
            lo = '' if t.lo.key == (0, 0) else t.lo.text
            out.append(part + f"{series}[{lo}:{t.hi.text}]")
        for k in self.constants:
            coef = '' if k.coef.is_one() else f"({k.coef.text(self.power_unit)})"
            pos = k.position
            mono = '1' if pos.key == (0, 0) else f"x^{pos.exponent_text()}"
            out.append(coef + mono if coef and mono != '1' else (coef or mono))
        return f"{lhs} = {' + '.join(out) if out else '0'}"

    def holds_at(self, N: int, series, finite=None) -> bool:
        """Direct check at one N on coefficient lists (raw field values)."""
        fld = self.field
        lo, hi = self._range(N, finite)
        rhs = self._rhs_values(N, series, lo, hi)
        target = finite if self.lo is None else series
        for j in range(lo, hi):
            have = _raw(target[j]) if j < len(target) else fld.zero
            if have != rhs.get(j, fld.zero):
                log.debug(f"{self.name} fails at N = {N}, coefficient {j}")
                return False
        return True

    def _range(self, N: int, finite=None):
        if self.lo is not None:
            return self.lo.at(N), self.hi.at(N)
        top = len(finite)
        for t in self.terms:
            top = max(top, t.shift.at(N) + t.hi.at(N))
        for k in self.constants:
            top = max(top, k.position.at(N) + 1)
        return 0, top

    def _rhs_values(self, N: int, series, lo: int, hi: int) -> dict:
        fld = self.field
        out = {}
        for t in self.terms:
            c = t.coef.at(N)
            s = t.shift.at(N)
            a, b = max(t.lo.at(N), lo - s), min(t.hi.at(N), hi - s)
            for l in range(a, b):
                v = fld.mul(c, _raw(series[l]))
                if v != fld.zero:
                    out[l + s] = fld.add(out.get(l + s, fld.zero), v)
        for k in self.constants:
            p = k.position.at(N)
            if lo <= p < hi:
                out[p] = fld.add(out.get(p, fld.zero), k.coef.at(N))
        return out

    def to_dict(self) -> dict:
        def expr(e):
            return None if e is None else e.to_dict()
        return {
            'name': self.name,
            'kind': self.kind,
            'text': self.text(),
            'param': self.param.to_dict(),
            'lo': expr(self.lo),
            'hi': expr(self.hi),
            'terms': [{'coef': t.coef.to_dict(), 'shift': expr(t.shift), 'lo': expr(t.lo), 'hi': expr(t.hi)}
                      for t in self.terms],
            'constants': [{'coef': k.coef.to_dict(), 'position': expr(k.position)} for k in self.constants],
            'samples': list(self.samples),
            'series_name': self.series_name,
            'power_unit': self.power_unit,
        }

    @classmethod
    def from_dict(cls, data: dict, fld) -> 'SliceRelation':
        def expr(d):
            return None if d is None else IndexExpr.from_dict(d)
        terms = tuple(SliceTerm(Coef.from_dict(fld, t['coef']), expr(t['shift']), expr(t['lo']), expr(t['hi']))
                      for t in data['terms'])
        consts = tuple(ConstTerm(Coef.from_dict(fld, k['coef']), expr(k['position'])) for k in data['constants'])
        return cls(data['name'], ParamSpec.from_dict(data['param']), expr(data['lo']), expr(data['hi']),
                   terms, consts, tuple(data['samples']), data['series_name'], data['power_unit'], fld)


@dataclass(frozen=True)
class RelationTemplate:
    """Candidate shape: target range, candidate terms (shift, lo, hi) and constant positions."""

    lo: Optional[IndexExpr]
    hi: Optional[IndexExpr]
    terms: Tuple[Tuple[IndexExpr, IndexExpr, IndexExpr], ...]
    constants: Tuple[IndexExpr, ...] = ()
    power_unit: str = None

    def describe(self) -> str:
        terms = ', '.join(f"x^{s.exponent_text()}T[{lo.text}:{hi.text}]" for s, lo, hi in self.terms)
        consts = ', '.join(f"x^{p.exponent_text()}" for p in self.constants)
        return f"[{terms}{'; ' + consts if consts else ''}]"


# guessing

def _solve_linear(fld, rows: List[List[object]], rhs: List[object]) -> Optional[List[object]]:
    """One solution of rows . x = rhs over the field, free variables set to zero."""
    n = len(rows[0]) if rows else 0
    pivots = {}          # column -> (row, value)
    for row, b in zip(rows, rhs):
        row = list(row)
        for col in range(n):
            if row[col] == fld.zero or col not in pivots:
                continue
            prow, pb = pivots[col]
            c = row[col]
            row = [fld.add(x, fld.mul(c, y)) for x, y in zip(row, prow)]
            b = fld.add(b, fld.mul(c, pb))
        lead = next((col for col in range(n) if row[col] != fld.zero), None)
        if lead is None:
            if b != fld.zero:
                return None
            continue
        inv = fld.inv(row[lead])
        row = [fld.mul(inv, x) for x in row]
        b = fld.mul(inv, b)
        # keep every stored pivot row reduced in the new column
        for col, (prow, pb) in list(pivots.items()):
            c = prow[lead]
            if c != fld.zero:
                pivots[col] = ([fld.add(x, fld.mul(c, y)) for x, y in zip(prow, row)], fld.add(pb, fld.mul(c, b)))
        pivots[lead] = (row, b)
    sol = [fld.zero] * n
    for col, (row, b) in pivots.items():
        sol[col] = b
    return sol


def guess_slice_relation(name: str, fld, template: RelationTemplate, param: ParamSpec,
                         series_at: Callable[[int], Sequence], samples: Sequence[int],
                         finite_at: Callable[[int], Sequence] = None,
                         series_name: str = None) -> SliceRelation:
    """Fit the template's coefficients at each sample N, then across the samples."""
    if template.lo is None and finite_at is None:
        raise ValueError("a representation template needs the finite objects")
    per_sample = []
    for N in samples:
        series = series_at(N)
        finite = finite_at(N) if finite_at is not None else None
        if template.lo is not None:
            lo, hi = template.lo.at(N), template.hi.at(N)
        else:
            lo, hi = 0, len(finite)
            for s, _, h in template.terms:
                hi = max(hi, s.at(N) + h.at(N))
            for p in template.constants:
                hi = max(hi, p.at(N) + 1)
        ranges = [(s.at(N), a.at(N), b.at(N)) for s, a, b in template.terms]
        positions = [p.at(N) for p in template.constants]
        need = max([b for _, _, b in ranges] + ([hi] if template.lo is not None else [0]))
        if len(series) < need:
            raise GuessFailure(f"{name}: {len(series)} known coefficients, N = {N} needs {need}")
        rows, rhs = [], []
        for j in range(lo, hi):
            row = []
            for s, a, b in ranges:
                l = j - s
                row.append(_raw(series[l]) if a <= l < b else fld.zero)
            row.extend(fld.one if j == p else fld.zero for p in positions)
            target = finite if finite is not None else series
            rows.append(row)
            rhs.append(_raw(target[j]) if j < len(target) else fld.zero)
        sol = _solve_linear(fld, rows, rhs)
        if sol is None:
            raise GuessFailure(f"{name}: template {template.describe()} inconsistent at N = {N}")
        per_sample.append((N, sol))
    count = len(template.terms) + len(template.constants)
    coefs = [fit_coefficient(fld, {N: sol[i] for N, sol in per_sample}) for i in range(count)]
    terms = tuple(SliceTerm(c, s, a, b) for c, (s, a, b) in zip(coefs, template.terms) if not c.is_zero())
    consts = tuple(ConstTerm(c, p) for c, p in zip(coefs[len(template.terms):], template.constants)
                   if not c.is_zero())
    rel = SliceRelation(name, param, template.lo, template.hi, terms, consts, tuple(samples),
                        series_name, template.power_unit, fld)
    log.info(f"guessed {rel.text()} from N in {list(samples)}")
    return rel


# compilation to word conditions

@dataclass(frozen=True)
class TwoAdic:
    """Digits of a rational with odd denominator in base 2, least significant first."""

    prefix: Tuple[int, ...]
    cycle: Tuple[int, ...]

    @classmethod
    def of(cls, value: Fraction) -> 'TwoAdic':
        value = _frac(value)
        if value.denominator % 2 == 0:
            raise UnsupportedPattern(f"{value} has no 2-adic digit expansion")
        a, b = value.numerator, value.denominator
        seen = {}
        digits = []
        while a not in seen:
            seen[a] = len(digits)
            dig = a & 1
            digits.append(dig)
            a = (a - dig * b) // 2
        i = seen[a]
        return cls(tuple(digits[:i]), tuple(digits[i:]))

    def phase(self, i: int) -> int:
        if i < len(self.prefix):
            return i
        return len(self.prefix) + (i - len(self.prefix)) % len(self.cycle)

    def digit(self, i: int) -> int:
        p = self.phase(i)
        return self.prefix[p] if p < len(self.prefix) else self.cycle[p - len(self.prefix)]


def split_block(e: IndexExpr) -> Tuple[int, IndexExpr]:
    """e = q 2^N + r with 0 <= r < 2^N for large N; r = f 2^N + d with 0 <= f <= 1."""
    q = floor(e.c)
    f = e.c - q
    d = e.d
    if f == 0 and d < 0:
        q -= 1
        f = Fraction(1)
    return q, IndexExpr(f, d)


@dataclass(frozen=True)
class ClassDomain:
    """Words w with [w]_2 equal to threshold `index`, or strictly above it and below the next."""

    index: int
    open: bool
    labels: Tuple[str, ...]

    @property
    def text(self) -> str:
        t = self.labels
        if not self.open:
            return f"[w] = {t[self.index]}"
        if self.index + 1 < len(t):
            return f"{t[self.index]} < [w] < {t[self.index + 1]}"
        return f"{t[self.index]} < [w]"


@dataclass(frozen=True)
class RegexDomain:
    regex: str

    @property
    def text(self) -> str:
        return f"w in {self.regex}"


@dataclass(frozen=True)
class WordCondition:
    """sum coef tau(A(s, word)) + constant = 0 for every s in the domain."""

    terms: Tuple[Tuple[str, Coef], ...]
    constant: Coef
    domain: object
    power_unit: str = None

    def value(self, d, s: int, N: int):
        fld = self.constant.field
        v = self.constant.at(N)
        for word, coef in self.terms:
            v = fld.add(v, fld.mul(coef.at(N), _raw(d.tau[d.read(s, word)])))
        return v

    def text(self) -> str:
        parts = []
        for word, coef in self.terms:
            t = f"tau(A(s,{word}))" if word else "tau(s)"
            parts.append(t if coef.is_one() else f"({coef.text(self.power_unit)}) {t}")
        if not self.constant.is_zero():
            parts.append(self.constant.text(self.power_unit))
        return f"{' + '.join(parts)} = 0 on {self.domain.text}"


def language_condition(fld, regex: str, words: Sequence[str], constant=0) -> WordCondition:
    """sum_w tau(A(s, w)) + constant = 0 for every s in {A(0, w) : w in L(regex)}."""
    one = Coef.constant(fld, fld.one)
    return WordCondition(tuple((w, one) for w in words), Coef.constant(fld, constant), RegexDomain(regex))


@dataclass
class CompiledRelation:
    relation: SliceRelation
    thresholds: List[IndexExpr]
    digits: List[TwoAdic]
    conditions: List[WordCondition]
    valid_from: int

    def to_dict(self) -> dict:
        return {
            'relation': self.relation.text(),
            'thresholds': [t.text for t in self.thresholds],
            'conditions': [c.text() for c in self.conditions],
            'valid_from': self.valid_from,
        }


def _threshold_label(r: IndexExpr) -> str:
    if r.c == 0:
        return str(r.d)
    head = '2^N' if r.c == 1 else f"{r.c}*2^N"
    if r.d == 0:
        return head
    return f"{head} {'-' if r.d < 0 else '+'} {abs(r.d)}"


def compile_to_word_conditions(rel: SliceRelation) -> CompiledRelation:
    if rel.lo is None:
        raise UnsupportedPattern(f"{rel.name} is a representation, not a slice relation")
    for t in rel.terms:
        if t.shift.d != 0 or t.shift.c.denominator != 1:
            raise UnsupportedPattern(f"shift {t.shift.text} is not a multiple of 2^N")
    bounds = [rel.lo, rel.hi]
    for t in rel.terms:
        bounds += [t.lo + t.shift, t.hi + t.shift]
    bounds += [k.position for k in rel.constants]
    offsets = {IndexExpr(Fraction(0), Fraction(0)).key: IndexExpr(Fraction(0), Fraction(0))}
    for b in bounds:
        _, r = split_block(b)
        offsets.setdefault(r.key, r)
    thresholds = sorted(offsets.values(), key=lambda e: e.key)
    for t in thresholds:
        # the digits of f 2^N + d are those of d only when f is 2-adically integral
        if t.c.denominator % 2 == 0:
            raise UnsupportedPattern(f"threshold {_threshold_label(t)} has no fixed digit expansion")
    rank = {t.key: i for i, t in enumerate(thresholds)}
    labels = tuple(_threshold_label(t) for t in thresholds)

    def pos(e: IndexExpr):
        q, r = split_block(e)
        return (q, rank[r.key], 0)

    def inside(p, lo: IndexExpr, hi: IndexExpr) -> bool:
        return pos(lo) <= p < pos(hi)

    q_lo = split_block(rel.lo)[0]
    q_hi = pos(rel.hi)[0]
    fld = rel.field
    one = Coef(fld, fld.one)
    conditions = []
    for q in range(q_lo, q_hi + 1):
        for i in range(len(thresholds)):
            for is_open in (0, 1):
                p = (q, i, is_open)
                if not inside(p, rel.lo, rel.hi):
                    continue
                acc: Dict[str, Coef] = {_block_word(q): one}
                for t in rel.terms:
                    m = int(t.shift.c)
                    p2 = (q - m, i, is_open)
                    if q - m < 0 or not inside(p2, t.lo, t.hi):
                        continue
                    w = _block_word(q - m)
                    acc[w] = acc[w] + t.coef if w in acc else t.coef
                constant = Coef(fld, fld.zero)
                if not is_open:
                    for k in rel.constants:
                        if pos(k.position) == (q, i, 0):
                            constant = constant + k.coef
                terms = tuple((w, c) for w, c in sorted(acc.items(), key=lambda kv: (len(kv[0]), kv[0]))
                              if not c.is_zero())
                if not terms and constant.is_zero():
                    continue
                dom = ClassDomain(i, bool(is_open), labels)
                conditions.append(WordCondition(terms, constant, dom, rel.power_unit))
    valid = _valid_from(rel, thresholds)
    compiled = CompiledRelation(rel, thresholds, [TwoAdic.of(t.d) for t in thresholds], conditions, valid)
    log.debug(f"{rel.name}: {len(conditions)} word conditions over {len(thresholds)} thresholds, "
              f"valid from N = {valid}")
    return compiled


def _block_word(q: int) -> str:
    return '' if q == 0 else format(q, 'b')


def _valid_from(rel: SliceRelation, thresholds: List[IndexExpr]) -> int:
    N = rel.param.start
    for _ in range(MAX_SEARCH):
        try:
            vals = [t.at(N) for t in thresholds]
        except UnsupportedPattern:
            vals = None
        if vals is not None and all(0 <= v < (1 << N) for v in vals) and \
                all(a < b for a, b in zip(vals, vals[1:])):
            return N
        N += rel.param.step
    raise UnsupportedPattern(f"{rel.name}: thresholds never separate within {MAX_SEARCH} steps")


# verification

@dataclass
class RelationCheck:
    relation: str
    status: Status
    checked: List[int] = field(default_factory=list)
    base_cases: List[int] = field(default_factory=list)
    repeat: Optional[Tuple[int, int]] = None
    counterexample: Optional[dict] = None
    clause: Optional[str] = None
    witness: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status is Status.PASSED

    def to_dict(self) -> dict:
        return {
            'relation': self.relation,
            'status': self.status.label,
            'checked': self.checked,
            'base_cases': self.base_cases,
            'repeat': list(self.repeat) if self.repeat else None,
            'counterexample': self.counterexample,
            'clause': self.clause,
            'witness': self.witness,
        }


def _carry_step(d, reached, digits: Sequence[int]):
    out = set()
    for s, status in reached:
        for j in range(d.k):
            new = tuple(st if j == t else (1 if j > t else -1) for st, t in zip(status, digits))
            out.add((d.delta[s][j], new))
    return frozenset(out)


def _class_states(reached, dom: ClassDomain, count: int):
    i = dom.index
    if not dom.open:
        return {s for s, st in reached if st[i] == 0}
    if i + 1 < count:
        return {s for s, st in reached if st[i] == 1 and st[i + 1] == -1}
    return {s for s, st in reached if st[i] == 1}


def verify_word_conditions(d, compiled: CompiledRelation, direct: Callable[[int], bool] = None,
                           max_length: int = 4096) -> RelationCheck:
    """Check every condition for every N of the progression.

    For N below compiled.valid_from the relation is checked with `direct`
    (coefficientwise on the series) when given.
    """
    if d.k != 2:
        raise UnsupportedPattern("word conditions are compiled for binary automata")
    rel = compiled.relation
    check = RelationCheck(rel.text(), Status.UNVERIFIED)
    param = rel.param
    for N in range(param.start, compiled.valid_from, param.step):
        if direct is None:
            check.clause = f"no direct check for N = {N} below the compiled range"
            return check
        if not direct(N):
            return _fail(check, f"relation fails at N = {N}", {'N': N})
        check.base_cases.append(N)
    modulus = param.step * rel.coef_period() // gcd(param.step, rel.coef_period())
    if len(compiled.thresholds) == 1:
        return _verify_on_set_trace(d, compiled, check, modulus, max_length)
    count = len(compiled.thresholds)
    reached = frozenset({(d.initial, (0,) * count)})
    seen = {}
    for N in range(max_length):
        if N >= compiled.valid_from and param.contains(N):
            key = (reached, tuple(t.phase(N) for t in compiled.digits), N % modulus)
            if key in seen:
                check.repeat = (seen[key], N)
                check.status = Status.PASSED
                log.info(f"{rel.name}: conditions hold, reached sets repeat between N = {seen[key]} and {N}")
                return check
            seen[key] = N
            bad = _check_at(d, compiled, lambda dom: _class_states(reached, dom, count), N)
            if bad is not None:
                return _fail(check, f"condition {bad['condition']} fails at N = {N}", bad)
            check.checked.append(N)
        reached = _carry_step(d, reached, [t.digit(N) for t in compiled.digits])
    check.clause = f"no repeat of the reached sets below N = {max_length}"
    return check


def _verify_on_set_trace(d, compiled: CompiledRelation, check: RelationCheck, modulus: int,
                         max_length: int) -> RelationCheck:
    """Threshold 0 alone: the classes are the pointer A(0, 0^N) and E_N."""
    rel = compiled.relation
    try:
        trace = state_sets_step(d, stride=1, start_length=0, max_steps=max_length)
    except AutomatonError as e:
        check.clause = str(e)
        return check
    seen = {}
    for N in range(compiled.valid_from, max_length):
        if not rel.param.contains(N):
            continue
        entry = trace.entry_for(N)
        key = (entry.pointer, entry.states, N % modulus)
        if key in seen:
            check.repeat = (seen[key], N)
            check.status = Status.PASSED
            log.info(f"{rel.name}: conditions hold, (pointer, E_N) repeats between N = {seen[key]} and {N}")
            return check
        seen[key] = N
        bad = _check_at(d, compiled, lambda dom: entry.states if dom.open else {entry.pointer}, N)
        if bad is not None:
            return _fail(check, f"condition {bad['condition']} fails at N = {N}", bad)
        check.checked.append(N)
        check.witness.append({'N': N, 'pointer': entry.pointer, 'states': sorted(entry.states)})
    check.clause = f"no repeat of (pointer, E_N) below N = {max_length}"
    return check


def _check_at(d, compiled: CompiledRelation, states_of: Callable, N: int) -> Optional[dict]:
    fld = compiled.relation.field
    for idx, cond in enumerate(compiled.conditions):
        for s in sorted(states_of(cond.domain)):
            v = cond.value(d, s, N)
            if v != fld.zero:
                return {'N': N, 'state': s, 'condition': idx, 'text': cond.text(), 'value': fld.format(v)}
    return None


def check_regex_conditions(d, conditions: Sequence[WordCondition], N: int = 0,
                           name: str = 'conditions') -> RelationCheck:
    """Conditions whose domains are regular languages of words, independent of N."""
    check = RelationCheck(name, Status.UNVERIFIED)
    images = {}
    for idx, cond in enumerate(conditions):
        if not isinstance(cond.domain, RegexDomain):
            raise UnsupportedPattern("check_regex_conditions takes regex domains only")
        states = images.get(cond.domain.regex)
        if states is None:
            states = images[cond.domain.regex] = regex_state_image(d, cond.domain.regex, d.initial)
        check.witness.append({'condition': cond.text(), 'states': sorted(states)})
        fld = cond.constant.field
        for s in sorted(states):
            v = cond.value(d, s, N)
            if v != fld.zero:
                return _fail(check, f"condition {idx} fails at state {s}",
                             {'state': s, 'condition': idx, 'text': cond.text(), 'value': fld.format(v)})
    check.status = Status.PASSED
    return check


def _fail(check: RelationCheck, clause: str, counterexample: dict) -> RelationCheck:
    check.status = Status.FAILED
    check.clause = clause
    check.counterexample = counterexample
    log.info(f"{check.relation}: {clause}")
    return check
