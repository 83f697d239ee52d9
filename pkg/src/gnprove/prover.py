"""Guess'n'Prove pipelines for the Thue-Morse and period-doubling continued fractions.

A pipeline guesses, from truncated data, the algebraic equations of the
sixteen limit components X^e[i,j], X^o[i,j] of a doubling family of 2x2
matrices, the product relations between the limits, slice relations of the
limits and representations of the finite matrices through the limits. Each
guess is then proved by a finite check: resultant certificates, word
conditions on automata and a symbolic induction step. The final minimal
polynomial of the continued fraction comes from a quotient resultant.

Every guessed object is kept in the report artifacts, so that `replay`
repeats all the checks without guessing anything.
"""
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .autoseq import dfao_isomorphism, dump_structured, load_structured
from .bipoly import BiPoly
from .cfrac import FACTORS, LetterError, letter_product, pd_family, pd_letters, tm_family, tm_letters
from .christol import KernelOverflow, NormalizationError, christol_run
from .fields import FieldElem, FqField, RationalFunctionField, field_make, frobenius_orbits
from .guess import (GuessFailure, MinPolyCertificate, annihilator_product, annihilator_quotient, annihilator_sum,
                    certify_common_root, certify_min_poly, common_root_order, guess_escalating, guess_factor)
from .induction import InductionStep, verify_symbolic_induction
from .messages import Stage, Status
from .poly import UniPoly
from .relations import (IndexExpr, ParamSpec, RelationTemplate, SliceRelation, SliceTerm, UnsupportedPattern,
                        compile_to_word_conditions, guess_slice_relation, verify_word_conditions)
from .resultant import ResultantError
from .series import PrecisionError, TruncSeries, certify_unique_solution, residual_valuation, solve_unique_series

log = logging.getLogger(__name__)

PARITY = 'eo'
MAX_SAMPLE_N = 14


# families

@dataclass(frozen=True)
class FamilySpec:
    """A doubling family: target_(n+1) = left_n right_n for each step, N = n - offset."""

    kind: str
    flavor: str
    names: Tuple[str, str]
    offset: int
    unit: str
    steps: Tuple[Tuple[str, str, str], ...]

    def family(self, a, b):
        build = tm_family if self.kind == 'tm' else pd_family
        return build(a, b, self.flavor)

    def param(self, parity: int, start: int = None) -> ParamSpec:
        first = (parity - self.offset) % 2
        if start is not None:
            first = start
        return ParamSpec(first, 2, self.offset)

    def parity_of(self, N: int) -> int:
        return (N + self.offset) % 2

    def words(self, a, b, n: int):
        """Letter words of the two objects at level n, first letter rightmost in the product."""
        if self.kind == 'tm':
            return tm_letters(a, b, 1 << n), tm_letters(b, a, 1 << n)
        first = pd_letters(a, b, 1 << n)
        second = [b] if n == 0 else pd_letters(a, b, 1 << (n - 1)) * 2
        return first, second


TM_NCF = FamilySpec('tm', 'ncf', ('M', 'W'), 1, 'v', (('M', 'W', 'M'), ('W', 'M', 'W')))
TM_STIELTJES = FamilySpec('tm', 'stieltjes', ('M', 'W'), 1, 'u', (('M', 'W', 'M'), ('W', 'M', 'W')))
PD_NCF = FamilySpec('pd', 'ncf', ('A', 'B'), 0, 'v', (('A', 'B', 'A'), ('B', 'A', 'A')))

SPECS = {'tm-ncf': TM_NCF, 'tm-stieltjes': TM_STIELTJES, 'pd-ncf': PD_NCF}


def series_name(obj: str, parity: int, i: int, j: int) -> str:
    return f"{obj}^{PARITY[parity]}[{i},{j}]"


def _components(spec: FamilySpec):
    for obj in spec.names:
        for parity in (0, 1):
            for i in range(2):
                for j in range(2):
                    yield obj, parity, i, j


# report records

@dataclass
class ProofStep:
    stage: Stage
    name: str
    status: Status
    clause: Optional[str] = None
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status is Status.PASSED

    def to_dict(self) -> dict:
        return {'stage': self.stage.value, 'name': self.name, 'status': self.status.label,
                'clause': self.clause, 'data': self.data}

    @classmethod
    def from_dict(cls, data: dict) -> 'ProofStep':
        return cls(Stage.from_label(data['stage']), data['name'], Status.from_label(data['status']),
                   data.get('clause'), data.get('data', {}))


@dataclass
class ProofReport:
    pipeline: str
    inputs: dict
    profile: dict
    steps: List[ProofStep] = field(default_factory=list)
    final: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)

    @property
    def status(self) -> Status:
        if not self.steps:
            return Status.UNVERIFIED
        return Status.combine(s.status for s in self.steps)

    @property
    def failing_stage(self) -> Optional[Stage]:
        for s in self.steps:
            if not s.ok:
                return s.stage
        return None

    def add(self, step: ProofStep) -> ProofStep:
        self.steps.append(step)
        log.debug(f"[{step.stage.value}] {step.name}: {step.status.label}"
                  + (f" ({step.clause})" if step.clause else ''))
        return step

    def stage_status(self, stage: Stage) -> Status:
        return Status.combine(s.status for s in self.steps if s.stage is stage)

    def to_dict(self) -> dict:
        failing = self.failing_stage
        return {
            'pipeline': self.pipeline,
            'status': self.status.label,
            'failing_stage': failing.value if failing else None,
            'inputs': self.inputs,
            'profile': self.profile,
            'steps': [s.to_dict() for s in self.steps],
            'final': self.final,
            'artifacts': self.artifacts,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> 'ProofReport':
        return cls(data['pipeline'], data['inputs'], data['profile'],
                   [ProofStep.from_dict(s) for s in data.get('steps', [])],
                   data.get('final', {}), data.get('artifacts', {}))


# fields and letters in reports

def field_to_dict(fld) -> dict:
    if isinstance(fld, RationalFunctionField):
        return {'kind': 'rational', 'symbol': fld.symbol}
    return {'kind': 'finite', 'm': fld.m, 'modulus': fld.modulus, 'symbol': fld.symbol}


def field_from_dict(data: dict):
    if data['kind'] == 'rational':
        return RationalFunctionField(data['symbol'])
    return field_make(2, int(data['m']), int(data['modulus']), data['symbol'])


def letter_text(t) -> str:
    return t.to_text('z') if isinstance(t, UniPoly) else t.field.format(t.value)


def parse_letter(text: str, fld, flavor: str):
    if flavor == 'ncf':
        return UniPoly.parse(text, fld, 'z')
    return fld.parse(text)


# limit coefficients

def _common_prefix(a: UniPoly, b: UniPoly) -> int:
    zero = a.field.zero
    ca, cb = a.coeffs, b.coeffs
    top = max(len(ca), len(cb))
    for k in range(top):
        if (ca[k] if k < len(ca) else zero) != (cb[k] if k < len(cb) else zero):
            return k
    return top


class LimitSource:
    """Coefficients of the limits X^e = lim X_(2k) and X^o = lim X_(2k+1), read off the levels.

    A component whose levels n, n + 2 and n + 4 coincide is a polynomial and
    is returned as a UniPoly; otherwise the common prefix of two consecutive
    levels of the same parity is taken as known.
    """

    def __init__(self, spec: FamilySpec, a, b, start_level: int, max_level: int):
        self.spec = spec
        self.family = spec.family(a, b)
        self.start_level = start_level
        self.max_level = max_level
        self._known = {}

    def matrix(self, obj: str, n: int):
        return self.family.level(n)[self.spec.names.index(obj)]

    def entry(self, obj: str, n: int, i: int, j: int) -> UniPoly:
        return self.matrix(obj, n)[i, j]

    def degree(self, obj: str, n: int) -> int:
        m = self.matrix(obj, n)
        return max(m[i, j].deg for i in range(2) for j in range(2))

    def known(self, obj: str, parity: int, i: int, j: int, order: int):
        key = (obj, parity, i, j)
        have = self._known.get(key)
        if have is not None and (isinstance(have, UniPoly) or have.order >= order):
            return have
        n = self.start_level + (self.start_level - parity) % 2
        best = 0
        while n + 2 <= self.max_level:
            a, b = self.entry(obj, n, i, j), self.entry(obj, n + 2, i, j)
            if a == b and n + 4 <= self.max_level and a == self.entry(obj, n + 4, i, j):
                self._known[key] = a
                return a
            k = _common_prefix(a, b)
            if k >= order:
                got = TruncSeries(a.field, a.coeffs[:k], k)
                self._known[key] = got
                log.debug(f"{series_name(*key)}: {k} coefficients from levels {n}, {n + 2}")
                return got
            best = max(best, k)
            n += 2
        raise GuessFailure(f"{series_name(*key)}: only {best} coefficients settle by level {self.max_level}, "
                           f"{order} needed")


_SOURCES: Dict[tuple, LimitSource] = {}


def _source(spec: FamilySpec, a, b, cfg: dict) -> LimitSource:
    key = (spec, a.field, letter_text(a), letter_text(b), cfg['source_level'], cfg['max_level'])
    src = _SOURCES.get(key)
    if src is None:
        src = _SOURCES[key] = LimitSource(spec, a, b, cfg['source_level'], cfg['max_level'])
    return src


# equations

@dataclass
class Equation:
    """phi annihilates the component `name`, whose root is fixed by `init`; `finite` for polynomials."""

    name: str
    phi: BiPoly
    init: Tuple
    ladder: Tuple[int, ...] = ()
    finite: Optional[UniPoly] = None

    def series(self, order: int) -> TruncSeries:
        if self.finite is not None:
            return TruncSeries.from_poly(self.finite, order)
        return solve_unique_series(self.phi, self.init, order)

    @property
    def is_zero(self) -> bool:
        return self.finite is not None and not self.finite

    def to_dict(self) -> dict:
        fld = self.phi.field
        return {'phi': self.phi.to_text(), 'init': [fld.format(v) for v in self.init],
                'ladder': list(self.ladder),
                'finite': None if self.finite is None else self.finite.to_text()}

    @classmethod
    def from_dict(cls, name: str, data: dict, fld) -> 'Equation':
        finite = None if data['finite'] is None else UniPoly.parse(data['finite'], fld)
        return cls(name, BiPoly.parse(data['phi'], fld), tuple(fld.parse(v).value for v in data['init']),
                   tuple(data['ladder']), finite)


class SeriesStore:
    """Roots of the equations, extended on demand."""

    def __init__(self, equations: Dict[str, Equation]):
        self.equations = equations
        self._cache: Dict[str, TruncSeries] = {}

    def get(self, name: str, order: int) -> TruncSeries:
        have = self._cache.get(name)
        if have is None or have.order < order:
            have = self._cache[name] = self.equations[name].series(max(order, 2 * have.order if have else order))
        return have.truncate(order)


def guess_annihilator(source, ladders, degrees, cfg: dict, what: str,
                      accept=None) -> Tuple[BiPoly, Tuple[int, ...]]:
    """Try each ladder of the profile, its short prefixes first."""
    failures = []
    for ladder, degs in zip(ladders, degrees):
        for size in range(2, len(ladder) + 1):
            try:
                phi = guess_escalating(source, ladder[:size], degs[:size], cfg['retries'], cfg['margin'], accept)
                return phi, tuple(ladder[:size])
            except GuessFailure as e:
                failures.append(str(e))
    raise GuessFailure(f"{what}: {failures[-1] if failures else 'no ladder in the profile'}")


def holds_on_longer_data(source: LimitSource, key: tuple, cand: BiPoly, cfg: dict) -> bool:
    """cand still annihilates the limit at twice as many coefficients as it has unknowns.

    Limits that do not settle that far keep the candidate.
    """
    order = 2 * sum(c.deg + 1 for c in cand.coeffs if c) + cfg['margin']
    try:
        f = source.known(*key, order)
    except GuessFailure:
        log.debug(f"{series_name(*key)}: no data at order {order}, candidate kept")
        return True
    if isinstance(f, UniPoly):
        f = TruncSeries.from_poly(f, order)
    return residual_valuation(cand, f).vanishes


def minimal_init(phi: BiPoly, f: TruncSeries, cfg: dict) -> Optional[tuple]:
    """The shortest prefix of f, from the profile's minimum, fixing f as the unique root."""
    for L in range(cfg['min_init'], cfg['max_init'] + 1):
        init = f.coeffs[:L]
        if not certify_unique_solution(phi, init).ok:
            continue
        if solve_unique_series(phi, init, f.order).coeffs != f.coeffs:
            return None
        return tuple(init)
    return None


def guess_equation(source: LimitSource, obj: str, parity: int, i: int, j: int, cfg: dict) -> Equation:
    name = series_name(obj, parity, i, j)
    first = source.known(obj, parity, i, j, cfg['min_init'] + 1)
    fld = source.family.level(0)[0][0, 0].field
    if isinstance(first, UniPoly):
        phi = BiPoly(fld, (first, UniPoly.one(fld)))
        init = tuple(TruncSeries.from_poly(first, cfg['min_init']).coeffs)
        log.info(f"{name}: polynomial of degree {first.deg}")
        return Equation(name, phi, init, (0, 1), first)
    phi, ladder = guess_annihilator(lambda order: source.known(obj, parity, i, j, order),
                                    cfg['ladders'], cfg['degrees'], cfg, name,
                                    lambda cand: holds_on_longer_data(source, (obj, parity, i, j), cand, cfg))
    f = source.known(obj, parity, i, j, 1)
    init = minimal_init(phi, f, cfg)
    if init is None:
        raise GuessFailure(f"{name}: no prefix of at most {cfg['max_init']} terms fixes the root")
    log.info(f"{name}: y-degree {phi.ydeg}, x-degree {phi.xdeg}, {len(init)} initial terms")
    return Equation(name, phi, init, ladder)


def _guess_equation_task(task):
    spec, a, b, cfg, key = task
    try:
        return guess_equation(_source(spec, a, b, cfg), *key, cfg)
    except GuessFailure as e:
        return e


def _run_tasks(fn, tasks: Sequence, jobs: int) -> list:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


# index expressions of the degrees

@dataclass(frozen=True)
class Units:
    """u = deg X_n, u_next = deg X_(n+1) and v = 2^N, all written in terms of N."""

    u: IndexExpr
    u_next: IndexExpr
    v: IndexExpr

    def to_dict(self) -> dict:
        return {'u': self.u.to_dict(), 'u_next': self.u_next.to_dict(), 'v': self.v.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> 'Units':
        return cls(IndexExpr.from_dict(data['u']), IndexExpr.from_dict(data['u_next']),
                   IndexExpr.from_dict(data['v']))


def degree_law(spec: FamilySpec, source: LimitSource, obj: str, parity: int) -> Tuple[Fraction, Fraction]:
    """(c, d) with deg X_n = c 2^N + d on the levels of one parity, checked on a third level."""
    levels = [n for n in range(max(spec.offset, 1), source.max_level + 1) if n % 2 == parity]
    for n1, n2, n3 in zip(levels, levels[1:], levels[2:]):
        N1, N2, N3 = n1 - spec.offset, n2 - spec.offset, n3 - spec.offset
        d1, d2, d3 = (source.degree(obj, n) for n in (n1, n2, n3))
        c = Fraction(d2 - d1, (1 << N2) - (1 << N1))
        d = d1 - c * (1 << N1)
        if c * (1 << N3) + d == d3:
            return c, d
    raise UnsupportedPattern(f"degrees of {obj}_n are not of the form c 2^N + d")


def fit_units(spec: FamilySpec, source: LimitSource, obj: str, parity: int) -> Units:
    c, d = degree_law(spec, source, obj, parity)
    c2, d2 = degree_law(spec, source, obj, 1 - parity)
    unit = spec.unit
    v = IndexExpr.unit(unit, 1)
    if d == 0 and c.denominator == 1:
        u = IndexExpr(c, d, ((unit, int(c)),))
    else:
        u = IndexExpr.unit('u', c, d)
    # the next level, read at N + 1
    nc = 2 * c2
    if d2 == 0 and nc.denominator == 1 and u.parts == ((unit, int(c)),):
        u_next = IndexExpr(nc, d2, ((unit, int(nc)),))
    elif c2 == c and (d2 - 2 * d).denominator == 1:
        u_next = u * 2 + IndexExpr.const(int(d2 - 2 * d))
    else:
        u_next = IndexExpr.unit('w', nc, d2)
    log.debug(f"{obj}^{PARITY[parity]}: u = {c}*2^N + {d}, next {u_next.text}")
    return Units(u, u_next, v)


# templates

def _dedupe(exprs) -> List[IndexExpr]:
    out = {}
    for e in exprs:
        out.setdefault(e.key, e)
    return sorted(out.values(), key=lambda e: e.key)


def window_template(units: Units, power_unit: str) -> RelationTemplate:
    """T[u:u_next] from shifted pieces x^(m v) T[lo:hi] and constants at the block starts."""
    u, un, v = units.u, units.u_next, units.v
    zero = IndexExpr.const(0)
    pts = [zero, u]
    m = 1
    while (v * m).key < u.key:
        pts += [v * m, u - v * m]
        m += 1
    m = 1
    while (v * m).key < un.key:
        w = un - v * m
        if zero.key < w.key < u.key:
            pts.append(w)
        m += 1
    bps = _dedupe(pts)
    pieces = list(zip(bps, bps[1:]))
    terms = []
    m = 1
    while (v * m).key < un.key:
        s = v * m
        for lo, hi in pieces:
            if u.key <= (lo + s).key and (hi + s).key <= un.key:
                terms.append((s, lo, hi))
        m += 1
    constants = []
    j = 0
    while (u + v * j).key < un.key:
        constants.append(u + v * j)
        j += 1
    for k in range(1, 5):
        p = un - k
        if u.key < p.key and all(p.key != c.key for c in constants):
            constants.append(p)
    return RelationTemplate(u, un, tuple(terms), tuple(constants), power_unit)


def representation_template(units: Units, power_unit: str) -> RelationTemplate:
    """X_n = sum_m x^(m v) T[lo:hi] over pieces of [0, u - m v), plus a constant at x^u."""
    u, v = units.u, units.v
    zero = IndexExpr.const(0)
    pts = [zero, u]
    m = 1
    while (v * m).key < u.key:
        pts += [v * m, u - v * m]
        m += 1
    bps = _dedupe(pts)
    pieces = list(zip(bps, bps[1:]))
    terms = []
    m = 0
    while (v * m).key < u.key:
        s = v * m
        for lo, hi in pieces:
            if (hi + s).key <= u.key:
                terms.append((s, lo, hi))
        m += 1
    return RelationTemplate(None, None, tuple(terms), (u,), power_unit)


def _exprs(template: RelationTemplate) -> List[IndexExpr]:
    out = [e for t in template.terms for e in t] + list(template.constants)
    if template.lo is not None:
        out += [template.lo, template.hi]
    return out


def _well_formed(template: RelationTemplate, N: int) -> bool:
    try:
        for e in _exprs(template):
            if e.at(N) < 0:
                return False
        for s, lo, hi in template.terms:
            if lo.at(N) > hi.at(N):
                return False
        if template.lo is not None and template.lo.at(N) >= template.hi.at(N):
            return False
    except UnsupportedPattern:
        return False
    return True


def sample_points(template: RelationTemplate, param: ParamSpec, rows, count: int) -> List[int]:
    """`count` consecutive N of the progression from the first with enough equations per unknown."""
    cols = len(template.terms) + len(template.constants)
    N = param.start
    while N <= MAX_SAMPLE_N:
        if _well_formed(template, N) and rows(N) >= 2 * cols + 8:
            return [N + k * param.step for k in range(count)]
        N += param.step
    raise GuessFailure(f"no sample point below N = {MAX_SAMPLE_N} for template {template.describe()}")


def holds_from(rel: SliceRelation, template: RelationTemplate, last: int, check) -> int:
    """The least N from which `check` holds up to `last` on well-formed instances."""
    start = last
    N = last - rel.param.step
    while N >= 0 and _well_formed(template, N):
        try:
            ok = check(N)
        except UnsupportedPattern:
            ok = False
        if not ok:
            break
        start = N
        N -= rel.param.step
    return start


def merge_representation(rel: SliceRelation, template: RelationTemplate,
                         wildcard: Dict[tuple, bool]) -> SliceRelation:
    """Merge the pieces of each shift into x^(m v) T[0:hi].

    Pieces where T vanishes on every sample are free: they may carry any
    coefficient, so they join the neighbouring term.
    """
    coefs = {(t.shift.key, t.lo.key, t.hi.key): t.coef for t in rel.terms}
    shifts: Dict[tuple, tuple] = {}
    for s, lo, hi in template.terms:
        shifts.setdefault(s.key, (s, []))[1].append((lo, hi))
    terms = []
    for _, (s, pieces) in sorted(shifts.items()):
        pieces.sort(key=lambda p: p[0].key)
        coef, end, gap, stopped = None, None, False, False
        for lo, hi in pieces:
            key = (s.key, lo.key, hi.key)
            here = coefs.get(key)
            if wildcard[key]:
                if coef is not None and not stopped:
                    end = hi
                continue
            if here is None:
                if coef is None:
                    gap = True
                else:
                    stopped = True
                continue
            if gap or stopped or (coef is not None and here != coef):
                raise UnsupportedPattern(f"{rel.name}: the pieces at x^{s.exponent_text()} are not one prefix")
            coef, end = here, hi
        if coef is not None:
            terms.append(SliceTerm(coef, s, IndexExpr.const(0), end))
    return replace(rel, terms=tuple(terms))


# the prover

class Prover:
    """One pipeline run over fixed letters: guess halves fill `art`, proof halves append steps."""

    def __init__(self, spec: FamilySpec, a, b, fld, cfg: dict, report: ProofReport, jobs: int = 1):
        self.spec = spec
        self.a, self.b = a, b
        self.field = fld
        self.cfg = cfg
        self.report = report
        self.jobs = jobs
        self.source = _source(spec, a, b, cfg)
        self.equations: Dict[str, Equation] = {}
        self.store = SeriesStore(self.equations)
        self.products: Dict[str, list] = {}
        self.automata = {}
        self.units: Dict[tuple, Units] = {}
        self.slices: Dict[str, SliceRelation] = {}
        self.reps: Dict[tuple, SliceRelation] = {}
        self.final_polys: Dict[str, dict] = {}
        self._resultants: Dict[tuple, BiPoly] = {}

    @property
    def finite_field(self) -> bool:
        return self.field.m is not None

    def add(self, stage: Stage, name: str, status: Status, clause: str = None, **data) -> ProofStep:
        return self.report.add(ProofStep(stage, name, status, clause, data))

    def unverified(self, stage: Stage, name: str, e: Exception) -> bool:
        self.add(stage, name, Status.UNVERIFIED, str(e))
        log.info(f"{stage.value}: {name} unverified: {e}")
        return False

    # matrices

    def prove_matrices(self, levels: int = 4) -> bool:
        factor = FACTORS[self.spec.flavor]
        bad = None
        for n in range(levels + 1):
            words = self.spec.words(self.a, self.b, n)
            for obj, word in zip(self.spec.names, words):
                if letter_product(word, factor) != self.source.matrix(obj, n):
                    bad = f"{obj}_{n} differs from the direct product of its letters"
                    break
            if bad:
                break
        self.add(Stage.MATRICES, 'doubling recursion', Status.FAILED if bad else Status.PASSED, bad,
                 levels=levels)
        return bad is None

    # equations

    def guess_equations(self) -> bool:
        keys = list(_components(self.spec))
        tasks = [(self.spec, self.a, self.b, self.cfg, key) for key in keys]
        ok = True
        for key, got in zip(keys, _run_tasks(_guess_equation_task, tasks, self.jobs)):
            if isinstance(got, Exception):
                ok = self.unverified(Stage.EQUATIONS, series_name(*key), got)
            else:
                self.equations[got.name] = got
        return ok

    def prove_equations(self) -> bool:
        ok = True
        for name, eq in self.equations.items():
            cert = certify_unique_solution(eq.phi, eq.init)
            status = Status.PASSED if cert.ok else Status.FAILED
            ok = ok and cert.ok
            self.add(Stage.EQUATIONS, name, status, cert.clause, phi=eq.phi.to_text(),
                     init=[self.field.format(v) for v in eq.init], ladder=list(eq.ladder),
                     polynomial=eq.finite is not None)
        return ok

    # product relations between the limits

    def _relation_keys(self):
        for target, left, right in self.spec.steps:
            for p in (0, 1):
                for i in range(2):
                    for j in range(2):
                        yield target, left, right, p, i, j

    @staticmethod
    def relation_name(target, left, right, p, i, j) -> str:
        q = 1 - p
        return (f"{series_name(target, q, i, j)} = {series_name(left, p, i, 0)} {series_name(right, p, 0, j)}"
                f" + {series_name(left, p, i, 1)} {series_name(right, p, 1, j)}")

    def guess_products(self) -> bool:
        ok = True
        for key in self._relation_keys():
            target, left, right, p, i, j = key
            name = self.relation_name(*key)
            parts = []
            try:
                for k in range(2):
                    ln, rn = series_name(left, p, i, k), series_name(right, p, k, j)
                    L, R = self.equations[ln], self.equations[rn]
                    if L.is_zero or R.is_zero:
                        continue
                    if L.finite is not None and R.finite is not None:
                        parts.append({'left': ln, 'right': rn, 'annihilator': None})
                        continue
                    P = self._product_annihilator(ln, rn)
                    Q = guess_factor(lambda order, ln=ln, rn=rn: self._product(ln, rn, order), P,
                                     list(zip(self.cfg['ladders'],
                                              [[2 * d for d in ds] for ds in self.cfg['degrees']])),
                                     self.cfg['retries'], self.cfg['margin'])
                    parts.append({'left': ln, 'right': rn, 'annihilator': Q})
            except (GuessFailure, ResultantError) as e:
                ok = self.unverified(Stage.RELATIONS, name, e)
                continue
            self.products[name] = parts
        return ok

    def _product(self, ln: str, rn: str, order: int) -> TruncSeries:
        return (self.store.get(ln, order) * self.store.get(rn, order)).truncate(order)

    def _product_annihilator(self, ln: str, rn: str) -> BiPoly:
        key = ('product', ln, rn)
        if key not in self._resultants:
            self._resultants[key] = annihilator_product(self.equations[ln].phi, self.equations[rn].phi)
        return self._resultants[key]

    def _certify(self, Q: BiPoly, P: BiPoly, series_at, order: int, provenance: str,
                 minimal: bool = True) -> MinPolyCertificate:
        """certify_min_poly, doubling the order while the cofactor still vanishes.

        Without `minimal`, a candidate that is not certified minimal may still
        pass as an annihilator through the common-root check.
        """
        top = max(order, self.cfg['max_order'])
        cert = certify_min_poly(Q, P, series_at(order), order, provenance)
        while (not cert.ok and cert.cofactor_residual is not None and cert.cofactor_residual.vanishes
               and order < top):
            order = min(2 * order, top)
            log.debug(f"{provenance}: cofactor vanishes, certifying again at order {order}")
            cert = certify_min_poly(Q, P, series_at(order), order, provenance)
        if cert.ok or minimal:
            return cert
        k = common_root_order(Q, P)
        if Q.normalize() != P.normalize() and k > top:
            cert.notes.append(f"common-root check needs order {k}, above {top}")
            return cert
        root = certify_common_root(Q, P, series_at(min(k, top)), provenance)
        if not root.ok:
            return cert
        root.notes.append(f"not minimal: {cert.clause}")
        return root

    def prove_products(self) -> bool:
        ok = True
        for key in self._relation_keys():
            name = self.relation_name(*key)
            parts = self.products.get(name)
            if parts is None:
                continue
            target, left, right, p, i, j = key
            try:
                step = self._prove_product(series_name(target, 1 - p, i, j), name, parts)
            except (PrecisionError, ResultantError) as e:
                step = self.add(Stage.RELATIONS, name, Status.UNVERIFIED, str(e))
            ok = ok and step.ok
        return ok

    def _prove_product(self, target: str, name: str, parts: list) -> ProofStep:
        fld = self.field
        po, so = self.cfg['product_order'], self.cfg['sum_order']
        X = self.equations[target]
        certs = []
        annihilators = []
        total = TruncSeries.zero(fld, so)
        exact = X.finite is not None
        for part in parts:
            series = self._product(part['left'], part['right'], so)
            total = total + series
            Q = part['annihilator']
            if Q is None:
                prod = self.equations[part['left']].finite * self.equations[part['right']].finite
                annihilators.append(BiPoly(fld, (prod, UniPoly.one(fld))))
                continue
            exact = False
            P = self._product_annihilator(part['left'], part['right'])
            cert = self._certify(Q, P, lambda order, part=part: self._product(part['left'], part['right'], order),
                                 po, 'product resultant', minimal=False)
            certs.append(cert.to_dict())
            if not cert.ok:
                return self.add(Stage.RELATIONS, name, cert.status, f"{part['left']} {part['right']}: {cert.clause}",
                                certificates=certs)
            annihilators.append(Q)
        if not annihilators:
            status = Status.PASSED if X.is_zero else Status.FAILED
            return self.add(Stage.RELATIONS, name, status, None if X.is_zero else "products vanish, target does not",
                            certificates=certs)
        if exact and all(a.ydeg == 1 for a in annihilators):
            value = UniPoly.zero(fld)
            for a in annihilators:
                value = value + a.coeff(0)
            same = value == X.finite
            return self.add(Stage.RELATIONS, name, Status.PASSED if same else Status.FAILED,
                            None if same else "polynomial products differ from the target", certificates=certs)
        P = annihilators[0] if len(annihilators) == 1 else annihilator_sum(*annihilators)
        cert = self._certify(X.phi, P, lambda order: self._total(parts, order), so, 'sum resultant', minimal=False)
        certs.append(cert.to_dict())
        if not cert.ok:
            return self.add(Stage.RELATIONS, name, cert.status, f"sum: {cert.clause}", certificates=certs)
        L = len(X.init)
        if total.coeffs[:L] != tuple(X.init):
            return self.add(Stage.RELATIONS, name, Status.FAILED,
                            f"the first {L} terms of the sum differ from the initial terms of {target}",
                            certificates=certs)
        return self.add(Stage.RELATIONS, name, Status.PASSED, None, certificates=certs)

    def _total(self, parts: list, order: int) -> TruncSeries:
        total = TruncSeries.zero(self.field, order)
        for part in parts:
            total = total + self._product(part['left'], part['right'], order)
        return total

    # automata

    def build_automata(self) -> bool:
        ok = True
        for name, eq in self.equations.items():
            if eq.finite is not None:
                continue
            try:
                res = christol_run(eq.phi, eq.init, affine=bool(eq.phi.coeff(0)), max_states=self.cfg['max_states'])
            except (KernelOverflow, NormalizationError) as e:
                ok = self.unverified(Stage.AUTOMATA, name, e)
                continue
            self.automata[name] = res.minimal
        return ok

    def prove_automata(self, fresh: bool = False) -> bool:
        ok = True
        check = self.cfg['automaton_check']
        for name, d in self.automata.items():
            eq = self.equations[name]
            clause = None
            data = {'states': d.size}
            if fresh:
                try:
                    again = christol_run(eq.phi, eq.init, affine=bool(eq.phi.coeff(0)),
                                         max_states=self.cfg['max_states']).minimal
                except (KernelOverflow, NormalizationError) as e:
                    ok = self.unverified(Stage.AUTOMATA, name, e)
                    continue
                iso = dfao_isomorphism(again, d)
                if iso is None:
                    clause = "stored automaton differs from the kernel automaton"
            if clause is None:
                coeffs = self.store.get(name, check).coeffs
                bad = next((n for n in range(check) if d(n) != coeffs[n]), None)
                if bad is not None:
                    clause = f"automaton output differs from the series at n = {bad}"
            ok = ok and clause is None
            self.add(Stage.AUTOMATA, name, Status.FAILED if clause else Status.PASSED, clause, **data)
        return ok

    # slice relations

    def units_of(self, obj: str, parity: int) -> Units:
        key = (obj, parity)
        if key not in self.units:
            self.units[key] = fit_units(self.spec, self.source, obj, parity)
        return self.units[key]

    def _coeffs(self, name: str, order: int):
        return self.store.get(name, order).coeffs

    def guess_slices(self) -> bool:
        ok = True
        for obj, parity, i, j in _components(self.spec):
            name = series_name(obj, parity, i, j)
            eq = self.equations[name]
            try:
                units = self.units_of(obj, parity)
                template = window_template(units, self.spec.unit)
                param = self.spec.param(parity)
                if eq.finite is not None:
                    N = param.start
                    while not _well_formed(template, N) or units.u.at(N) < len(eq.finite.coeffs):
                        N += param.step
                    self.slices[name] = SliceRelation(name, self.spec.param(parity, N), units.u, units.u_next, (),
                                                      (), (), name, self.spec.unit, self.field)
                    continue
                samples = sample_points(template, param, lambda N: units.u_next.at(N) - units.u.at(N),
                                        self.cfg['samples'])
                rel = guess_slice_relation(name, self.field, template, param,
                                           lambda N: self._coeffs(name, units.u_next.at(N)), samples,
                                           series_name=name)
                start = holds_from(rel, template, samples[-1],
                                   lambda N: rel.holds_at(N, self._coeffs(name, units.u_next.at(N))))
                self.slices[name] = replace(rel, param=self.spec.param(parity, start))
            except (GuessFailure, UnsupportedPattern) as e:
                ok = self.unverified(Stage.SLICE_RELATION, name, e)
        return ok

    def prove_slices(self) -> bool:
        ok = True
        for name, rel in self.slices.items():
            eq = self.equations[name]
            if eq.finite is not None:
                self.add(Stage.SLICE_RELATION, name, Status.PASSED, None, relation=rel.text(),
                         polynomial_degree=eq.finite.deg, start=rel.param.start)
                continue
            direct = (lambda N, rel=rel, name=name: rel.holds_at(N, self._coeffs(name, rel.hi.at(N))))
            if not self.finite_field:
                checked = [N for N in rel.param.values(self.cfg['samples'] + 1)]
                good = all(direct(N) for N in checked)
                self.add(Stage.SLICE_RELATION, name, Status.UNVERIFIED if good else Status.FAILED,
                         f"checked at N = {', '.join(map(str, checked))}", relation=rel.text())
                ok = False
                continue
            d = self.automata.get(name)
            if d is None:
                ok = self.unverified(Stage.SLICE_RELATION, name, UnsupportedPattern("no automaton"))
                continue
            try:
                compiled = compile_to_word_conditions(rel)
                check = verify_word_conditions(d, compiled, direct, self.cfg['max_length'])
            except UnsupportedPattern as e:
                ok = self.unverified(Stage.SLICE_RELATION, name, e)
                continue
            ok = ok and check.ok
            self.add(Stage.SLICE_RELATION, name, check.status, check.clause, relation=rel.text(),
                     conditions=[c.text() for c in compiled.conditions], check=check.to_dict())
        return ok

    # representations of the finite matrices

    def _finite_coeffs(self, obj, N, i, j):
        return self.source.entry(obj, N + self.spec.offset, i, j).coeffs

    def guess_representations(self) -> bool:
        ok = True
        for obj, parity, i, j in _components(self.spec):
            name = series_name(obj, parity, i, j)
            label = f"{obj}_n[{i},{j}] ({PARITY[parity]})"
            try:
                units = self.units_of(obj, parity)
                template = representation_template(units, self.spec.unit)
                param = self.spec.param(parity)
                def order(N, u=units.u):
                    return u.at(N) + 1

                samples = sample_points(template, param, order, self.cfg['samples'])
                rel = guess_slice_relation(f"{obj}_n[{i},{j}]", self.field, template, param,
                                           lambda N: self._coeffs(name, order(N)), samples,
                                           finite_at=lambda N: self._finite_coeffs(obj, N, i, j), series_name=name)
                wildcard = {}
                for s, lo, hi in template.terms:
                    wildcard[(s.key, lo.key, hi.key)] = all(
                        not any(c != self.field.zero for c in self._coeffs(name, order(N))[lo.at(N):hi.at(N)])
                        for N in samples)
                rel = merge_representation(rel, template, wildcard)
                start = holds_from(rel, template, samples[-1],
                                   lambda N: rel.holds_at(N, self._coeffs(name, order(N)),
                                                          self._finite_coeffs(obj, N, i, j)))
                self.reps[(obj, parity, i, j)] = replace(rel, param=self.spec.param(parity, start))
            except (GuessFailure, UnsupportedPattern) as e:
                ok = self.unverified(Stage.INDUCTION, label, e)
        return ok

    # induction

    def prove_induction(self) -> bool:
        ok = True
        fld = self.field
        bounds = {}
        for target, left, right in self.spec.steps:
            for p in (0, 1):
                q = 1 - p
                step = InductionStep(f"{target}_(n+1) = {left}_n {right}_n, n {PARITY[p]}", left, right, target,
                                     f"{target}^{PARITY[q]}", f"{left}^{PARITY[p]}", f"{right}^{PARITY[p]}")
                try:
                    reps = {(o, i, j): self.reps[(o, p, i, j)] for o in (left, right) for i in range(2)
                            for j in range(2)}
                    conclusion = {(target, i, j): self.reps[(target, q, i, j)] for i in range(2) for j in range(2)}
                except KeyError as e:
                    ok = self.unverified(Stage.INDUCTION, step.name, UnsupportedPattern(f"no representation {e}"))
                    continue
                names = [series_name(o, p, i, j) for o in (left, right) for i in range(2) for j in range(2)]
                slices = {n: self.slices[n] for n in names if n in self.slices}
                prefixes, finite = {}, {}
                for n in names:
                    eq = self.equations[n]
                    if eq.finite is not None:
                        prefixes[n] = eq.finite.coeffs
                        finite[n] = len(eq.finite.coeffs)
                    else:
                        prefixes[n] = self._coeffs(n, 3)
                rels = list(reps.values()) + list(conclusion.values()) + list(slices.values())
                period = 1
                for r in rels:
                    period = period * r.coef_period() // gcd(period, r.coef_period())
                start = max([r.param.start for r in rels] + [0])
                param = self.spec.param(p)
                count = 2 * period // gcd(2, period) // 2
                reps_N = param.values(max(count, 1), first=start)
                check = verify_symbolic_induction(step, fld, reps, conclusion, slices, prefixes, reps_N, finite)
                status, clause = check.status, check.clause
                twisted = any(t.coef.twisted for r in rels for t in r.terms) or \
                    any(k.coef.twisted for r in rels for k in r.constants)
                if status is Status.PASSED and not self.finite_field and twisted:
                    status, clause = Status.UNVERIFIED, f"checked at N = {', '.join(map(str, reps_N))}"
                bounds[(target, p)] = max(check.valid_from, start)
                ok = ok and status is Status.PASSED
                self.add(Stage.INDUCTION, step.name, status, clause, check=check.to_dict())
        return self._base_cases(bounds) and ok

    def _base_cases(self, bounds: Dict[tuple, int]) -> bool:
        """The representations checked directly below the range of the symbolic steps."""
        top = max(bounds.values(), default=0) + self.cfg['base_margin']
        ok = True
        for key, rel in sorted(self.reps.items()):
            obj, parity, i, j = key
            name = series_name(obj, parity, i, j)
            checked = []
            bad = None
            for N in range(rel.param.start, top + 1, rel.param.step):
                order = max([t.hi.at(N) for t in rel.terms] + [1])
                if not rel.holds_at(N, self._coeffs(name, order), self._finite_coeffs(obj, N, i, j)):
                    bad = N
                    break
                checked.append(N)
            ok = ok and bad is None
            self.add(Stage.INDUCTION, f"{obj}_n[{i},{j}] ({PARITY[parity]}) base cases",
                     Status.FAILED if bad is not None else Status.PASSED,
                     None if bad is None else f"representation fails at N = {bad}",
                     representation=rel.text(), checked=checked)
        return ok

    # final polynomial

    def final_labels(self):
        X, Y = self.spec.names
        if self.spec.flavor == 'stieltjes':
            return [('S', X)]
        if self.spec.kind == 'tm':
            return [('CF(t)', X), ('CF(t-bar)', Y)]
        return [('CF(p)', X)]

    def _ratio(self, obj: str, order: int) -> TruncSeries:
        num = self.store.get(series_name(obj, 0, 0, 1), order + 1)
        den = self.store.get(series_name(obj, 0, 0, 0), order + 1)
        if self.spec.flavor == 'stieltjes':
            return (num.shift(-1) / den.truncate(order)).truncate(order)
        return (num / den).truncate(order)

    def _ratio_annihilator(self, obj: str) -> BiPoly:
        key = ('quotient', obj)
        if key in self._resultants:
            return self._resultants[key]
        P = annihilator_quotient(self.equations[series_name(obj, 0, 0, 1)].phi,
                                 self.equations[series_name(obj, 0, 0, 0)].phi)
        if self.spec.flavor == 'stieltjes':
            # g/x is a root of P(x, x y)
            P = BiPoly(self.field, [c.shift(i) for i, c in enumerate(P.coeffs)]).normalize()
        self._resultants[key] = P
        return P

    def guess_final(self) -> bool:
        ok = True
        for label, obj in self.final_labels():
            try:
                Q = guess_factor(lambda order: self._ratio(obj, order), self._ratio_annihilator(obj),
                                 [(self.cfg['final_ladder'], self.cfg['final_degrees'])],
                                 self.cfg['retries'], self.cfg['margin'])
            except (GuessFailure, PrecisionError, ResultantError) as e:
                ok = self.unverified(Stage.FINAL, label, e)
                continue
            self.final_polys[label] = {'object': obj, 'Q': Q}
        return ok

    def prove_final(self) -> bool:
        ok = True
        order = self.cfg['final_order']
        for label, entry in self.final_polys.items():
            Q = entry['Q']
            try:
                P = self._ratio_annihilator(entry['object'])
                cert = self._certify(Q, P, lambda k: self._ratio(entry['object'], k), order, 'quotient resultant')
            except (PrecisionError, ResultantError) as e:
                ok = self.unverified(Stage.FINAL, label, e)
                continue
            ok = ok and cert.ok
            self.add(Stage.FINAL, label, cert.status, cert.clause, certificate=cert.to_dict(), ydeg=Q.ydeg)
        return ok

    # artifacts

    def to_artifacts(self) -> dict:
        fmt = self.field.format
        return {
            'field': field_to_dict(self.field),
            'letters': [letter_text(self.a), letter_text(self.b)],
            'equations': {n: e.to_dict() for n, e in self.equations.items()},
            'products': {n: [{'left': p['left'], 'right': p['right'],
                              'annihilator': None if p['annihilator'] is None else p['annihilator'].to_text()}
                             for p in parts] for n, parts in self.products.items()},
            'automata': {n: json.loads(dump_structured(d, fmt)) for n, d in self.automata.items()},
            'slices': {n: r.to_dict() for n, r in self.slices.items()},
            'representations': {series_name(*k): r.to_dict() for k, r in self.reps.items()},
            'final': {label: {'object': e['object'], 'Q': e['Q'].to_text()} for label, e in self.final_polys.items()},
        }

    def load_artifacts(self, art: dict):
        fld = self.field
        for name, data in art.get('equations', {}).items():
            self.equations[name] = Equation.from_dict(name, data, fld)
        for name, parts in art.get('products', {}).items():
            self.products[name] = [{'left': p['left'], 'right': p['right'],
                                    'annihilator': None if p['annihilator'] is None
                                    else BiPoly.parse(p['annihilator'], fld)} for p in parts]
        for name, data in art.get('automata', {}).items():
            self.automata[name] = load_structured(json.dumps(data), lambda s: fld.parse(s).value)
        for name, data in art.get('slices', {}).items():
            self.slices[name] = SliceRelation.from_dict(data, fld)
        for name, data in art.get('representations', {}).items():
            obj, rest = name.split('^')
            parity = PARITY.index(rest[0])
            i, j = int(rest[2]), int(rest[4])
            self.reps[(obj, parity, i, j)] = SliceRelation.from_dict(data, fld)
        for label, data in art.get('final', {}).items():
            self.final_polys[label] = {'object': data['object'], 'Q': BiPoly.parse(data['Q'], fld)}

    # driving

    def run(self) -> bool:
        """Guess and prove stage by stage; stop at the first stage left unverified."""
        if not self.prove_matrices():
            return False
        if not (self.guess_equations() and self.prove_equations()):
            return False
        if self.cfg['relations'] and not (self.guess_products() and self.prove_products()):
            return False
        if self.finite_field and not (self.build_automata() and self.prove_automata()):
            return False
        slices_ok = self.guess_slices() and self.prove_slices()
        if self.finite_field and not slices_ok:
            return False
        if not self.guess_representations():
            return False
        self.prove_induction()
        return self.guess_final() and self.prove_final()

    def replay(self) -> bool:
        """Every proof half on the loaded artifacts, nothing guessed."""
        results = [self.prove_matrices(), self.prove_equations()]
        if self.products:
            results.append(self.prove_products())
        if self.automata:
            results.append(self.prove_automata(fresh=True))
        if self.slices:
            results.append(self.prove_slices())
        if self.reps:
            results.append(self.prove_induction())
        if self.final_polys:
            results.append(self.prove_final())
        return all(results)


# final forms

def z_form(Q: BiPoly) -> BiPoly:
    """z^d Q(1/z, y) with d the x-degree of Q."""
    return Q.reverse_x()


def final_entry(Q: BiPoly) -> dict:
    Z = z_form(Q)
    return {
        'x_form': Q.to_text('x', 'y'),
        'z_form': Z.to_text('z', 'y'),
        'unknown_z': Q.to_text('x', 'z'),
        'ydeg': Q.ydeg,
        'xdeg': Q.xdeg,
        'coefficients': {str(i): c.to_text('z') for i, c in enumerate(Z.coeffs) if c},
        'x_coefficients': {str(i): c.to_text('x') for i, c in enumerate(Q.coeffs) if c},
    }


def rescale_annihilator(Q: BiPoly, b) -> BiPoly:
    """Q(b x, y / b) up to a unit: annihilates b f(b x) when Q annihilates f."""
    fld = Q.field
    b = b.value if isinstance(b, FieldElem) else b
    binv = fld.inv(b)
    out = []
    for i, c in enumerate(Q.coeffs):
        scaled = [fld.mul(ck, fld.pow(b, k)) for k, ck in enumerate(c.coeffs)]
        out.append(UniPoly(fld, scaled).scale(fld.pow(binv, i)))
    return BiPoly(fld, out).normalize()


def closed_form_polynomial(fld, a, b=None) -> BiPoly:
    """p_0 + p_1 y + p_2 y^2 + p_4 y^4 for the Stieltjes continued fraction of the (a, b)-Thue-Morse sequence."""
    one = FieldElem(fld, fld.one)
    b = one if b is None else b
    zero = fld.zero
    a4, a5, a6 = a ** 4, a ** 5, a ** 6
    p0 = UniPoly(fld, [(b ** 5 / (a5 + a4 * b)).value, zero, ((a * a * b ** 4 + b ** 6) / a4).value])
    p1 = UniPoly(fld, [(b ** 4 / a5).value, ((a * b ** 4 + b ** 5) / a5).value])
    p2 = UniPoly(fld, [(b ** 4 / (a6 + a5 * b)).value, (b ** 4 / a5).value])
    p4 = UniPoly(fld, [zero, zero, (b ** 4 / (a6 + a5 * b)).value])
    return BiPoly(fld, (p0, p1, p2, UniPoly.zero(fld), p4)).normalize()


# pipelines

def _check_letters(a, b, flavor: str):
    if a == b:
        raise LetterError("the two letters must differ")
    for t in (a, b):
        if flavor == 'ncf' and (not isinstance(t, UniPoly) or t.deg < 1):
            raise LetterError(f"letter {t} must be a polynomial of positive degree")
        if flavor == 'stieltjes' and not t:
            raise LetterError("Stieltjes letters must be nonzero")


def _new_report(pipeline: str, inputs: dict, cfg: dict) -> ProofReport:
    return ProofReport(pipeline, inputs, dict(cfg))


def _ncf_pipeline(name: str, spec: FamilySpec, a: UniPoly, b: UniPoly, cfg: dict, jobs: int) -> ProofReport:
    _check_letters(a, b, 'ncf')
    fld = a.field
    report = _new_report(name, {'a': letter_text(a), 'b': letter_text(b), 'field': field_to_dict(fld)}, cfg)
    log.info(f"{name}: letters ({letter_text(a)}, {letter_text(b)}), profile {cfg.get('name')}")
    prover = Prover(spec, a, b, fld, cfg, report, jobs)
    prover.run()
    _finish_ncf(prover, report)
    return report


def _finish_ncf(prover: Prover, report: ProofReport):
    report.artifacts = prover.to_artifacts()
    for label, entry in prover.final_polys.items():
        report.final[label] = final_entry(entry['Q'])
    log.info(f"{report.pipeline}: {report.status.label}")


def pipeline_tm_ncf(a: UniPoly, b: UniPoly, cfg: dict, jobs: int = 1) -> ProofReport:
    """Minimal polynomials of CF(t) and CF(t-bar) for the (a, b)-Thue-Morse sequence over F_2[z]."""
    return _ncf_pipeline('tm-ncf', TM_NCF, a, b, cfg, jobs)


def pipeline_pd_ncf(a: UniPoly, b: UniPoly, cfg: dict, jobs: int = 1) -> ProofReport:
    """Minimal polynomial of CF(p) for the (a, b)-period-doubling sequence over F_2[z]."""
    return _ncf_pipeline('pd-ncf', PD_NCF, a, b, cfg, jobs)


def stieltjes_reduction(a: FieldElem, b: FieldElem = None):
    """(r, j, b): S(x; (a, b)) is b S(b x; (a/b, 1)) and a/b = frob^j(r) for the orbit representative r."""
    fld = a.field
    one = FieldElem(fld, fld.one)
    b = one if b is None else b
    c = a / b
    if fld.m is None:
        return c, 0, b
    orbit = [c.frob(k) for k in range(fld.m)]
    r = min(orbit, key=lambda e: e.value)
    j = next(k for k in range(fld.m) if r.frob(k) == c)
    return r, j, b


def pipeline_tm_stieltjes(a: FieldElem, cfg: dict, b: FieldElem = None, jobs: int = 1) -> ProofReport:
    """Minimal polynomial of the Stieltjes continued fraction of the (a, b)-Thue-Morse sequence.

    Over a finite field the run uses the Frobenius-orbit representative of
    a/b and maps the result back; over F_2(a) the symbol itself is the letter.
    """
    fld = a.field
    one = FieldElem(fld, fld.one)
    b = one if b is None else b
    _check_letters(a, b, 'stieltjes')
    r, j, scale = stieltjes_reduction(a, b)
    if r == one:
        raise LetterError("a/b must differ from 1")
    mode = 'symbolic' if fld.m is None else 'finite'
    inputs = {'a': letter_text(a), 'b': letter_text(b), 'field': field_to_dict(fld), 'mode': mode,
              'representative': letter_text(r), 'frobenius': j}
    report = _new_report('tm-stieltjes', inputs, cfg)
    log.info(f"tm-stieltjes over {fld!r}: a = {letter_text(a)}, b = {letter_text(b)}, "
             f"run on ({letter_text(r)}, 1)")
    prover = Prover(TM_STIELTJES, r, one, fld, cfg, report, jobs)
    prover.run()
    report.artifacts = prover.to_artifacts()
    _finish_stieltjes(prover, report, a, b, j)
    return report


def _finish_stieltjes(prover: Prover, report: ProofReport, a, b, j: int):
    entry = prover.final_polys.get('S')
    if entry is None:
        return
    Q = entry['Q'].frob(j) if j else entry['Q']
    if b != FieldElem(b.field, b.field.one):
        Q = rescale_annihilator(Q, b)
    report.final['S'] = {'x_form': Q.to_text(), 'ydeg': Q.ydeg, 'xdeg': Q.xdeg,
                         'coefficients': {str(i): c.to_text('x') for i, c in enumerate(Q.coeffs) if c}}
    closed = closed_form_polynomial(a.field, a, b)
    series = _stieltjes_series(prover, b, j, prover.cfg['residual_order'])
    res = residual_valuation(closed, series)
    same = closed == Q
    status = Status.PASSED if same and res.vanishes else Status.FAILED
    clause = None
    if not res.vanishes:
        clause = f"closed form leaves a residual of valuation {res.valuation}"
    elif not same:
        clause = "closed form differs from the certified polynomial"
    report.add(ProofStep(Stage.COMPARISON, 'closed form', status, clause,
                         {'closed_form': closed.to_text(), 'residual': str(res), 'ydeg': closed.ydeg}))
    log.info(f"tm-stieltjes: {report.status.label}")


def _stieltjes_series(prover: Prover, b: FieldElem, j: int, order: int) -> TruncSeries:
    """S(x; (a, b)) = b S(b x; (a/b, 1)), with S(x; (a/b, 1)) the Frobenius image of the run's ratio."""
    g = prover._ratio(prover.spec.names[0], order)
    if j:
        g = g.frob(j)
    if b != FieldElem(b.field, b.field.one):
        g = g.scale_x(b.value) * b
    return g


def replay(data: dict, jobs: int = 1) -> ProofReport:
    """Recompute every certificate of a serialized report."""
    old = ProofReport.from_dict(data)
    art = old.artifacts
    fld = field_from_dict(art['field'])
    spec = SPECS[old.pipeline]
    a, b = (parse_letter(t, fld, spec.flavor) for t in art['letters'])
    report = _new_report(old.pipeline, old.inputs, old.profile)
    report.inputs = dict(old.inputs, replay=True)
    prover = Prover(spec, a, b, fld, old.profile, report, jobs)
    prover.load_artifacts(art)
    prover.replay()
    if old.pipeline == 'tm-stieltjes':
        oa = parse_letter(old.inputs['a'], fld, 'stieltjes')
        ob = parse_letter(old.inputs['b'], fld, 'stieltjes')
        _finish_stieltjes(prover, report, oa, ob, int(old.inputs.get('frobenius', 0)))
    else:
        _finish_ncf(prover, report)
    report.artifacts = art
    return report


def stieltjes_representatives(fld: FqField) -> List[FieldElem]:
    """The letters a/b to run over F_(2^m): one per Frobenius orbit of size m."""
    return frobenius_orbits(fld).representatives


def letter_pairs(max_degree: int, fld=None):
    """Pairs (a, b) of distinct nonconstant F_2[z] polynomials with deg a + deg b <= max_degree."""
    fld = fld or field_make(2, 1)
    polys = []
    for d in range(1, max_degree):
        for bits in range(1 << d, 1 << (d + 1)):
            polys.append(UniPoly.from_bits(fld, bits))
    for a in polys:
        for b in polys:
            if a != b and a.deg + b.deg <= max_degree:
                yield a, b


def sweep_tm_ncf(max_degree: int, cfg: dict, jobs: int = 1, full: bool = False) -> List[dict]:
    """Degree of the certified minimal polynomial of CF(t) over letter pairs; the full proof when `full`."""
    rows = []
    for a, b in letter_pairs(max_degree):
        if full:
            report = pipeline_tm_ncf(a, b, cfg, jobs)
            entry = report.final.get('CF(t)', {})
            rows.append({'a': letter_text(a), 'b': letter_text(b), 'status': report.status.label,
                         'ydeg': entry.get('ydeg'), 'stage': report.failing_stage.value
                         if report.failing_stage else None})
            continue
        rows.append(_sweep_final(a, b, cfg))
    return rows


def _sweep_final(a: UniPoly, b: UniPoly, cfg: dict) -> dict:
    """Only the two equations the quotient needs, then the final certificate."""
    row = {'a': letter_text(a), 'b': letter_text(b)}
    report = _new_report('tm-ncf', {'a': row['a'], 'b': row['b']}, cfg)
    prover = Prover(TM_NCF, a, b, a.field, cfg, report)
    try:
        for j in (0, 1):
            eq = guess_equation(prover.source, 'M', 0, 0, j, cfg)
            prover.equations[eq.name] = eq
        prover.prove_equations()
        prover.final_polys.clear()
        if prover.guess_final():
            prover.prove_final()
    except (GuessFailure, PrecisionError, ResultantError) as e:
        row.update(status=Status.UNVERIFIED.label, ydeg=None, stage=Stage.FINAL.value, clause=str(e))
        return row
    entry = prover.final_polys.get('CF(t)')
    row.update(status=report.status.label, ydeg=entry['Q'].ydeg if entry else None,
               stage=report.failing_stage.value if report.failing_stage else None)
    return row
