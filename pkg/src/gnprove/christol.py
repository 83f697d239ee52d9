"""From an annihilating polynomial to a p-automaton (Christol's construction).

Three steps:

1. normalize_equation rewrites P(x, T) = 0 as
       T = c + sum_{j >= 1} e_j T^(p^j)
   with rational coefficients, c = 0 unless the affine form is requested;
2. kernel_closure applies the Cartier operators to representations
       S = c + sum_{j >= 0} c_j phi^k(T)^(p^j)
   until no new representation appears;
3. christol_automaton reads the constant term of every representation.

Term indices follow the printed encoding: j is the exponent of p, so T itself
is ({0: 1}, 0).
"""
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from . import GnProveError
from .autoseq import Dfao, dfao_from_kernel, dfao_minimize
from .bipoly import BiPoly
from .poly import RatFunc, UniPoly
from .series import TruncSeries, solve_unique_series

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 20000


class NormalizationError(GnProveError):
    pass


class KernelOverflow(GnProveError):
    pass


@dataclass(frozen=True)
class NormalizedEq:
    """T = affine + sum_j coeffs[j] T^(p^j), j >= 1."""

    coeffs: Tuple[Tuple[int, RatFunc], ...]
    affine: RatFunc
    p: int
    field: object

    @property
    def terms(self) -> Dict[int, RatFunc]:
        return dict(self.coeffs)

    @property
    def m(self) -> int:
        """Number of distinct twists: phi^m is the identity on the coefficients."""
        return self.field.m or 1

    def twisted(self, k: int) -> Tuple[Dict[int, RatFunc], RatFunc]:
        """The equation of phi^k(T)."""
        return {j: c.frob(k) for j, c in self.coeffs}, self.affine.frob(k)

    def to_text(self, name: str = 'T') -> str:
        parts = [] if not self.affine else [_paren(self.affine.to_text())]
        for j, c in self.coeffs:
            power = name if j == 0 else f"{name}^{self.p ** j}"
            parts.append(power if c == RatFunc.one(self.field) else f"{_paren(c.to_text())}*{power}")
        return f"{name} = " + ' + '.join(parts)


def _paren(text: str) -> str:
    return f"({text})" if ' ' in text else text


@dataclass(frozen=True)
class KernelRep:
    """affine + sum_j c_j phi^twist(T)^(p^j); canonical, so equality is structural."""

    terms: Tuple[Tuple[int, RatFunc], ...]
    twist: int
    affine: RatFunc

    @classmethod
    def make(cls, terms: Dict[int, RatFunc], twist: int, affine: RatFunc) -> 'KernelRep':
        return cls(tuple(sorted((j, c) for j, c in terms.items() if c)), twist, affine)

    def to_text(self) -> str:
        body = ', '.join(f"{j}: {c.to_text()}" for j, c in self.terms)
        if self.affine:
            body = f"{body}; {self.affine.to_text()}" if body else f"; {self.affine.to_text()}"
        return f"({{{body}}}, {self.twist})"

    def __str__(self):
        return self.to_text()


# step one

class _Quotient:
    """Arithmetic in F_q(x)[y] / (P) on coordinate vectors over 1, y, ..., y^(d-1)."""

    def __init__(self, P: BiPoly):
        self.field = P.field
        self.d = P.ydeg
        lc = RatFunc(P.lc)
        # y^d = sum_i red[i] y^i
        self.red = [RatFunc(P.coeff(i)) / lc for i in range(self.d)]
        self._powers = [self.unit(i) for i in range(self.d)]

    def zero(self):
        return [RatFunc.zero(self.field)] * self.d

    def unit(self, i: int):
        v = self.zero()
        v[i] = RatFunc.one(self.field)
        return v

    def times_y(self, v):
        top = v[-1]
        out = [RatFunc.zero(self.field)] + v[:-1]
        if top:
            out = [a + top * r for a, r in zip(out, self.red)]
        return out

    def y_power(self, n: int):
        while len(self._powers) <= n:
            self._powers.append(self.times_y(self._powers[-1]))
        return self._powers[n]

    def frobenius(self, v, p: int):
        """v^p for v = sum v_i y^i: sum v_i^p y^(p i) in characteristic p."""
        out = self.zero()
        for i, c in enumerate(v):
            if not c:
                continue
            cp = c ** p
            out = [a + cp * b for a, b in zip(out, self.y_power(p * i))]
        return out


def _solve(columns, target):
    """Coefficients l with sum l_i columns[i] = target, or None; columns independent."""
    n = len(columns)
    rows = len(target)
    # augmented matrix, one row per coordinate
    mat = [[columns[c][r] for c in range(n)] + [target[r]] for r in range(rows)]
    pivots = []
    row = 0
    for col in range(n):
        pr = next((r for r in range(row, rows) if mat[r][col]), None)
        if pr is None:
            continue
        mat[row], mat[pr] = mat[pr], mat[row]
        inv = RatFunc.one(mat[row][col].field) / mat[row][col]
        mat[row] = [v * inv for v in mat[row]]
        for r in range(rows):
            if r != row and mat[r][col]:
                f = mat[r][col]
                mat[r] = [a + f * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    if any(mat[r][n] for r in range(row, rows)):
        return None
    sol = [RatFunc.zero(target[0].field)] * n
    for r, col in enumerate(pivots):
        sol[col] = mat[r][n]
    return sol


def normalize_equation(P: BiPoly, p: int = 2, affine: bool = False, max_power: int = None) -> NormalizedEq:
    """T = sum_{j >= 1} e_j T^(p^j) (plus a constant when affine) for a root T of P.

    Powers T^(p^j) are reduced modulo P; j grows until the family becomes
    dependent. P should be the certified minimal polynomial.
    """
    if P.ydeg < 2:
        raise NormalizationError(f"y-degree {P.ydeg}: the root is rational, nothing to normalize")
    q = _Quotient(P)
    field = P.field
    one = q.unit(0)
    family = [one, q.unit(1)] if affine else [q.unit(1)]
    max_power = max_power or q.d + 1
    v = q.unit(1)
    for j in range(1, max_power + 1):
        v = q.frobenius(v, p)
        lam = _solve(family, v)
        if lam is None:
            family.append(v)
            continue
        # T^(p^j) + sum lam_i family_i = 0 in characteristic 2; solve for T
        offset = 1 if affine else 0
        lt = lam[offset]
        if not lt:
            raise NormalizationError("inseparable normalization: the dependence has no term in T")
        inv = RatFunc.one(field) / lt
        coeffs = {j: inv}
        for i in range(offset + 1, len(lam)):
            if lam[i]:
                coeffs[i - offset] = lam[i] * inv
        aff = lam[0] * inv if affine else RatFunc.zero(field)
        eq = NormalizedEq(tuple(sorted(coeffs.items())), aff, p, field)
        log.debug(f"normalized equation with top power p^{j}: {eq.to_text()}")
        return eq
    raise NormalizationError(f"no dependence among T^(p^j), j <= {max_power}")


# step two

def _cartier_poly(a: UniPoly, r: int, p: int) -> UniPoly:
    return UniPoly(a.field, a.coeffs[r::p])


def cartier_rational(c: RatFunc, r: int, p: int = 2) -> RatFunc:
    """Lambda_r(a/b f^p) = Lambda_r(a b^(p-1)) phi(f) / phi(b); returns the factor before phi(f)."""
    a, b = c.num, c.den
    return RatFunc(_cartier_poly(a * b ** (p - 1), r, p), b.frob(1))


def _expand_bare(rep: KernelRep, eq: NormalizedEq):
    """Rewrite the j = 0 term through the twisted equation; returns ({j >= 1: c}, affine)."""
    terms = dict(rep.terms)
    affine = rep.affine
    c0 = terms.pop(0, None)
    if c0:
        twisted, aff = eq.twisted(rep.twist)
        affine = affine + c0 * aff
        for j, e in twisted.items():
            terms[j] = terms.get(j, RatFunc.zero(eq.field)) + c0 * e
    return terms, affine


def cartier_apply(rep: KernelRep, digit: int, eq: NormalizedEq) -> KernelRep:
    """Lambda_digit of the series a representation stands for."""
    p = eq.p
    if not 0 <= digit < p:
        raise ValueError(f"digit {digit} outside 0..{p - 1}")
    terms, affine = _expand_bare(rep, eq)
    out = {}
    for j, c in terms.items():
        if c:
            out[j - 1] = cartier_rational(c, digit, p)
    new_aff = cartier_rational(affine, digit, p) if affine else affine
    return KernelRep.make(out, (rep.twist + 1) % eq.m, new_aff)


def initial_rep(eq: NormalizedEq) -> KernelRep:
    return KernelRep.make({0: RatFunc.one(eq.field)}, 0, RatFunc.zero(eq.field))


@dataclass
class KernelClosure:
    eq: NormalizedEq
    states: List[KernelRep]
    transitions: Dict[Tuple[KernelRep, int], KernelRep]
    initial: KernelRep

    def trace_lines(self) -> List[str]:
        index = {s: i for i, s in enumerate(self.states)}
        lines = []
        for i, s in enumerate(self.states):
            succ = [index[self.transitions[(s, j)]] for j in range(self.eq.p)]
            lines.append(f"{i}: {s.to_text()} -> {succ}")
        return lines


def kernel_closure(eq: NormalizedEq, max_states: int = DEFAULT_MAX_STATES) -> KernelClosure:
    """Breadth-first closure of T under Lambda_0 .. Lambda_(p-1)."""
    start = initial_rep(eq)
    seen = {start}
    states = [start]
    transitions = {}
    i = 0
    while i < len(states):
        s = states[i]
        i += 1
        for r in range(eq.p):
            t = cartier_apply(s, r, eq)
            transitions[(s, r)] = t
            if t not in seen:
                if len(states) >= max_states:
                    raise KernelOverflow(f"kernel exceeds {max_states} representations; "
                                         f"last: {t.to_text()}")
                seen.add(t)
                states.append(t)
    log.info(f"kernel closure: {len(states)} representations")
    return KernelClosure(eq, states, transitions, start)


# step three

def _pole_order(c: RatFunc) -> int:
    if not c:
        return 0
    return max(0, c.den.valuation() - c.num.valuation())


def output_depth(rep: KernelRep) -> int:
    """D: the largest pole order at 0 among the coefficients."""
    return max([_pole_order(c) for _, c in rep.terms] + [_pole_order(rep.affine)])


def _laurent_times(c: RatFunc, w: TruncSeries, shift: int) -> TruncSeries:
    """x^shift c w with x^shift c regular at 0."""
    v = c.den.valuation()
    den = c.den.shift(-v)
    # negative shifts only drop vanishing terms
    num = c.num.shift(shift - v)
    order = w.order
    return w * TruncSeries.from_poly(num, order) / TruncSeries.from_poly(den, order)


def rep_series(rep: KernelRep, T: TruncSeries, order: int, p: int = 2) -> TruncSeries:
    """The series a representation stands for, to `order` (T must be known far enough)."""
    D = output_depth(rep)
    n = order + D
    U = T.frob(rep.twist).truncate(min(T.order, n))
    total = TruncSeries.zero(T.field, n)
    if rep.affine:
        total = total + _laurent_times(rep.affine, TruncSeries.one(T.field, n), D).truncate(n)
    for j, c in rep.terms:
        e = p ** j
        W = U.frob(j).compose_monomial(e) if j else U
        total = total + _laurent_times(c, W.truncate(min(W.order, n)), D)
    return total.shift(-D).truncate(order)


def rep_constant(rep: KernelRep, T: TruncSeries, p: int = 2):
    return rep_series(rep, T, 1, p).coeffs[0]


@dataclass
class ChristolResult:
    closure: KernelClosure
    automaton: Dfao
    minimal: Dfao
    series: TruncSeries
    notes: List[str] = dc_field(default_factory=list)


def christol_run(P: BiPoly, init, p: int = 2, affine: bool = False,
                 max_states: int = DEFAULT_MAX_STATES, eq: Optional[NormalizedEq] = None) -> ChristolResult:
    eq = eq or normalize_equation(P, p, affine)
    closure = kernel_closure(eq, max_states)
    depth = max(output_depth(s) for s in closure.states)
    order = max(depth + 1, len(init))
    T = solve_unique_series(P, init, order)
    outputs = {s: rep_constant(s, T, p) for s in closure.states}
    d = dfao_from_kernel(closure.states, closure.transitions, outputs, closure.initial, p)
    minimal = dfao_minimize(d)
    log.info(f"christol automaton: {d.size} kernel states, {minimal.size} after minimization")
    return ChristolResult(closure, d, minimal, T)


def christol_automaton(P: BiPoly, init, p: int = 2, affine: bool = False,
                       max_states: int = DEFAULT_MAX_STATES) -> Dfao:
    """Minimal p-DFAO of the unique root of P extending init."""
    return christol_run(P, init, p, affine, max_states).minimal
