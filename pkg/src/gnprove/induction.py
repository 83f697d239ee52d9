"""Symbolic induction steps on segment polynomials.

A segment T[lo:hi] stands for sum_(lo <= l < hi) t_l x^l with bounds given as
index expressions. Matrix products are expanded entry by entry, so every
segment is a scalar and the algebra of segments is commutative; a step is
proved when the two sides agree as formal sums of monomials x^e S_1 ... S_r.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import GnProveError
from .messages import Status
from .relations import IndexExpr, SliceRelation, UnsupportedPattern, settles_from

log = logging.getLogger(__name__)

MAX_DEPTH = 16
ZERO = IndexExpr.const(0)


@dataclass(frozen=True)
class Segment:
    series: str
    lo: IndexExpr
    hi: IndexExpr

    @property
    def sort_key(self):
        return (self.series, self.lo.key, self.hi.key)

    def text(self) -> str:
        lo = '' if self.lo.key == ZERO.key else self.lo.text
        return f"{self.series}[{lo}:{self.hi.text}]"


def _monomial_key(exp: IndexExpr, segs) -> tuple:
    return (exp, tuple(sorted(segs, key=lambda s: s.sort_key)))


class SegPoly:
    """Formal sum coefficient * x^exp * S_1 ... S_r over a field."""

    def __init__(self, fld, terms: Dict[tuple, object] = None):
        self.field = fld
        self.terms = {k: v for k, v in (terms or {}).items() if v != fld.zero}

    @classmethod
    def monomial(cls, fld, coef, exp: IndexExpr, segs=()) -> 'SegPoly':
        return cls(fld, {_monomial_key(exp, segs): coef})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: 'SegPoly') -> 'SegPoly':
        fld = self.field
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = fld.add(out.get(k, fld.zero), v)
        return SegPoly(fld, out)

    def __mul__(self, other: 'SegPoly') -> 'SegPoly':
        fld = self.field
        out = {}
        for (e1, s1), v1 in self.terms.items():
            for (e2, s2), v2 in other.terms.items():
                k = _monomial_key(e1 + e2, s1 + s2)
                out[k] = fld.add(out.get(k, fld.zero), fld.mul(v1, v2))
        return SegPoly(fld, out)

    def text(self, limit: int = 8) -> str:
        parts = []
        for (exp, segs), v in list(self.terms.items())[:limit]:
            c = '' if v == self.field.one else f"({self.field.format(v)})"
            mono = '' if exp.key == ZERO.key else f"x^{exp.exponent_text()}"
            parts.append(c + mono + ''.join(s.text() for s in segs) or '1')
        more = len(self.terms) - limit
        return ' + '.join(parts) + (f" + ... ({more} more)" if more > 0 else '')


class InductionError(GnProveError):
    pass


@dataclass(frozen=True)
class InductionStep:
    """target_(n+1) = left_n right_n together with limit = limit_left * limit_right.

    Representations are keyed by (object, i, j); the conclusion is read at
    N + delta and rewritten in terms of N.
    """

    name: str
    left: str
    right: str
    target: str
    limit: str
    limit_left: str
    limit_right: str
    delta: int = 1


@dataclass
class InductionCheck:
    step: str
    status: Status
    representatives: List[int] = field(default_factory=list)
    valid_from: int = 0
    clause: Optional[str] = None
    residual: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status is Status.PASSED

    def to_dict(self) -> dict:
        return {
            'step': self.step,
            'status': self.status.label,
            'representatives': self.representatives,
            'valid_from': self.valid_from,
            'clause': self.clause,
            'residual': self.residual,
        }


class _Context:
    def __init__(self, fld, N: int, slices: Dict[str, SliceRelation], prefixes: Dict[str, Sequence],
                 finite: Dict[str, int] = None):
        self.field = fld
        self.N = N
        self.slices = slices
        self.prefixes = prefixes
        self.finite = finite or {}
        self.settle = 0

    # asymptotic comparisons, remembering from which N they are exact

    def lt(self, a: IndexExpr, b: IndexExpr) -> bool:
        self.settle = max(self.settle, settles_from(a, b))
        return a.key < b.key

    def le(self, a: IndexExpr, b: IndexExpr) -> bool:
        return not self.lt(b, a)

    def max(self, a, b):
        return b if self.lt(a, b) else a

    def min(self, a, b):
        return a if self.lt(a, b) else b

    def rep(self, rel: SliceRelation, delta: int = 0) -> SegPoly:
        fld = self.field
        out = SegPoly(fld)
        for t in rel.terms:
            seg = Segment(rel.series_name, t.lo.advance(delta), t.hi.advance(delta))
            out = out + SegPoly.monomial(fld, t.coef.at(self.N + delta), t.shift.advance(delta), (seg,))
        for k in rel.constants:
            out = out + SegPoly.monomial(fld, k.coef.at(self.N + delta), k.position.advance(delta))
        return out

    def reduce_segment(self, seg: Segment, depth: int = 0) -> SegPoly:
        """seg written with segments below the lower bound of its slice relation."""
        fld = self.field
        if not self.lt(seg.lo, seg.hi):
            return SegPoly(fld)
        length = self.finite.get(seg.series)
        if length is not None:
            end = IndexExpr.const(length)
            if not self.lt(seg.lo, end):
                return SegPoly(fld)
            if self.lt(end, seg.hi):
                seg = Segment(seg.series, seg.lo, end)
            return SegPoly.monomial(fld, fld.one, ZERO, (seg,))
        rel = self.slices.get(seg.series)
        whole = SegPoly.monomial(fld, fld.one, ZERO, (seg,))
        if rel is None or self.le(seg.hi, rel.lo):
            return whole
        if depth > MAX_DEPTH:
            raise UnsupportedPattern(f"segment {seg.text()} does not reduce")
        if self.lt(seg.lo, rel.lo):
            low = Segment(seg.series, seg.lo, rel.lo)
            high = Segment(seg.series, rel.lo, seg.hi)
            return SegPoly.monomial(fld, fld.one, ZERO, (low,)) + self.reduce_segment(high, depth)
        if self.lt(rel.hi, seg.hi):
            raise UnsupportedPattern(f"segment {seg.text()} reaches beyond {rel.text()}")
        a, b = seg.lo, seg.hi
        out = SegPoly(fld)
        for t in rel.terms:
            lo = self.max(t.lo, a - t.shift)
            hi = self.min(t.hi, b - t.shift)
            if not self.lt(lo, hi):
                continue
            part = self.reduce_segment(Segment(seg.series, lo, hi), depth + 1)
            out = out + SegPoly.monomial(fld, t.coef.at(self.N), t.shift) * part
        for k in rel.constants:
            if self.le(a, k.position) and self.lt(k.position, b):
                out = out + SegPoly.monomial(fld, k.coef.at(self.N), k.position)
        return out

    def reduce(self, p: SegPoly) -> SegPoly:
        fld = self.field
        out = SegPoly(fld)
        for (exp, segs), v in p.terms.items():
            acc = SegPoly.monomial(fld, v, exp)
            for s in segs:
                acc = acc * self.reduce_segment(s)
            out = out + acc
        return out

    def elementary(self, polys: Sequence[SegPoly]) -> List[SegPoly]:
        """Split every segment at all bounds seen for its series, then expand numeric prefixes."""
        cuts: Dict[str, Dict[tuple, IndexExpr]] = {}
        for p in polys:
            for (_, segs) in p.terms:
                for s in segs:
                    c = cuts.setdefault(s.series, {})
                    c.setdefault(s.lo.key, s.lo)
                    c.setdefault(s.hi.key, s.hi)
        for series, c in cuts.items():
            h = len(self.prefixes.get(series, ()))
            if h:
                c.setdefault(IndexExpr.const(h).key, IndexExpr.const(h))
        ordered = {}
        for series, c in cuts.items():
            pts = sorted(c.values(), key=lambda e: e.key)
            for x, y in zip(pts, pts[1:]):
                self.lt(x, y)
            ordered[series] = pts
        memo = {}

        def split(seg: Segment) -> SegPoly:
            if seg in memo:
                return memo[seg]
            fld = self.field
            pts = [e for e in ordered[seg.series] if seg.lo.key <= e.key <= seg.hi.key]
            out = SegPoly(fld)
            for lo, hi in zip(pts, pts[1:]):
                out = out + self._numeric(Segment(seg.series, lo, hi))
            memo[seg] = out
            return out

        result = []
        for p in polys:
            out = SegPoly(self.field)
            for (exp, segs), v in p.terms.items():
                acc = SegPoly.monomial(self.field, v, exp)
                for s in segs:
                    acc = acc * split(s)
                out = out + acc
            result.append(out)
        return result

    def _numeric(self, seg: Segment) -> SegPoly:
        fld = self.field
        if not (seg.lo.is_const and seg.hi.is_const):
            return SegPoly.monomial(fld, fld.one, ZERO, (seg,))
        known = self.prefixes.get(seg.series, ())
        lo, hi = int(seg.lo.d), int(seg.hi.d)
        if hi > len(known):
            raise InductionError(f"{seg.series} needs {hi} known coefficients, have {len(known)}")
        out = SegPoly(fld)
        for l in range(lo, hi):
            out = out + SegPoly.monomial(fld, known[l], IndexExpr.const(l))
        return out

    def bounds(self, key) -> Tuple[IndexExpr, IndexExpr]:
        exp, segs = key
        val, top = exp, exp
        for s in segs:
            val = val + s.lo
            top = top + s.hi - 1
        return val, top


def _component(name: str, i: int, j: int) -> str:
    return f"{name}[{i},{j}]"


def verify_symbolic_induction(step: InductionStep, fld, reps: Dict[tuple, SliceRelation],
                              conclusion: Dict[tuple, SliceRelation], slices: Dict[str, SliceRelation],
                              prefixes: Dict[str, Sequence], representatives: Sequence[int],
                              finite: Dict[str, int] = None) -> InductionCheck:
    """Prove target_(n+1) = conclusion from the representations of left_n and right_n.

    `reps` holds the representations at level n keyed by (object, i, j),
    `slices` the slice relations of the limit components, `prefixes` their
    first coefficients, and `representatives` one N per residue class of the
    coefficients. Components listed in `finite` are polynomials of the given
    length whose coefficients are all in `prefixes`.
    """
    check = InductionCheck(step.name, Status.UNVERIFIED, list(representatives))
    try:
        for N in representatives:
            bad = None
            # the conclusion modulo x^B with factors cut at B - s, then at B
            for wide in (False, True):
                ctx = _Context(fld, N, slices, prefixes, finite)
                bad = _check_at(step, ctx, reps, conclusion, wide)
                check.valid_from = max(check.valid_from, ctx.settle)
                if bad is None:
                    break
            if bad is not None:
                check.status = Status.FAILED
                check.clause, check.residual = bad
                log.info(f"{step.name}: {check.clause} at N = {N}")
                return check
    except (UnsupportedPattern, InductionError) as e:
        check.status = Status.UNVERIFIED
        check.clause = str(e)
        log.info(f"{step.name}: {e}")
        return check
    check.status = Status.PASSED
    log.info(f"{step.name}: symbolic step holds from N = {check.valid_from}")
    return check


def _check_at(step: InductionStep, ctx: _Context, reps, conclusion, wide: bool = False) -> Optional[Tuple[str, str]]:
    fld = ctx.field
    for i in range(2):
        for j in range(2):
            lhs = SegPoly(fld)
            for k in range(2):
                lhs = lhs + ctx.rep(reps[(step.left, i, k)]) * ctx.rep(reps[(step.right, k, j)])
            target = conclusion[(step.target, i, j)]
            B = None
            rhs = SegPoly(fld)
            for t in target.terms:
                if t.lo.key != ZERO.key:
                    raise UnsupportedPattern(f"conclusion term of {target.name} does not start at 0")
                s = t.shift.advance(step.delta)
                top = s + t.hi.advance(step.delta)
                if B is None:
                    B = top
                elif B.key != top.key:
                    raise UnsupportedPattern(f"conclusion terms of {target.name} end at different degrees")
                width = top if wide else top - s
                prod = SegPoly(fld)
                for k in range(2):
                    a = Segment(_component(step.limit_left, i, k), ZERO, width)
                    b = Segment(_component(step.limit_right, k, j), ZERO, width)
                    prod = prod + SegPoly.monomial(fld, fld.one, ZERO, (a, b))
                rhs = rhs + SegPoly.monomial(fld, t.coef.at(ctx.N + step.delta), s) * prod
            if B is None:
                # a constant matrix entry: the whole product is known
                for k in target.constants:
                    rhs = rhs + SegPoly.monomial(fld, k.coef.at(ctx.N + step.delta), k.position.advance(step.delta))
                lhs, rhs = ctx.elementary([ctx.reduce(lhs), rhs])
                if (lhs + rhs).terms:
                    return (f"entry ({i},{j}) differs from a constant", (lhs + rhs).text())
                continue
            high = SegPoly(fld)
            for k in target.constants:
                pos = k.position.advance(step.delta)
                mono = SegPoly.monomial(fld, k.coef.at(ctx.N + step.delta), pos)
                if ctx.le(B, pos):
                    high = high + mono
                else:
                    rhs = rhs + mono
            lhs, rhs = ctx.elementary([ctx.reduce(lhs), ctx.reduce(rhs)])
            lhs_low = SegPoly(fld)
            lhs_high = SegPoly(fld)
            for key, v in lhs.terms.items():
                val, top = ctx.bounds(key)
                if ctx.le(B, val):
                    lhs_high.terms[key] = v
                elif ctx.lt(top, B):
                    lhs_low.terms[key] = v
                else:
                    return (f"entry ({i},{j}) has a term across x^{B.exponent_text()}",
                            SegPoly(fld, {key: v}).text())
            if (lhs_high + high).terms:
                return (f"entry ({i},{j}) differs at and above x^{B.exponent_text()}",
                        (lhs_high + high).text())
            diff = lhs_low + rhs
            rest = SegPoly(fld, {key: v for key, v in diff.terms.items() if ctx.lt(ctx.bounds(key)[0], B)})
            if rest:
                return (f"entry ({i},{j}) differs below x^{B.exponent_text()}", rest.text())
    return None
