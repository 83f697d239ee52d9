"""Guessing annihilating polynomials and certifying minimal polynomials.

Guessing is Hermite-Pade approximation on (1, f^e1, ..., f^er). Annihilators
of sums, products and quotients of roots come from resultants; a candidate Q
is the minimal polynomial of f once Q divides such an annihilator P, Q is
irreducible and the cofactor P / Q^m does not annihilate f.
"""
import logging
from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

from . import GnProveError
from .bipoly import BiPoly, bipoly_factor_cert, bipoly_gcd
from .messages import Status
from .poly import UniPoly
from .resultant import (ResultantError, resultant_z, reversed_scaled_coeffs, scaled_coeffs,
                        shifted_coeffs)
from .series import PrecisionError, Residual, TruncSeries, residual_valuation

log = logging.getLogger(__name__)


class GuessFailure(GnProveError):
    pass


@dataclass(frozen=True)
class PHProblem:
    series: Sequence[TruncSeries]
    degrees: Sequence[int]

    @property
    def sigma(self) -> int:
        """Order reached by an approximant of this type."""
        return sum(d + 1 for d in self.degrees) - 1

    def check(self):
        if len(self.series) != len(self.degrees):
            raise ValueError("one degree bound per series")
        if any(d < 0 for d in self.degrees):
            raise ValueError("degree bounds must be nonnegative")
        for f in self.series:
            if f.order < self.sigma:
                raise PrecisionError(f"series known to order {f.order}, type needs {self.sigma}")


def pade_hermite(prob: PHProblem) -> List[UniPoly]:
    """(p_0, ..., p_r), not all zero, deg p_i <= d_i, val(sum p_i f_i) >= sigma.

    Order-basis iteration: one order per step, the basis vector of smallest
    shifted degree with a nonzero residual is the pivot.
    """
    prob.check()
    fld = prob.series[0].field
    add, mul, inv, zero = fld.add, fld.mul, fld.inv, fld.zero
    r1 = len(prob.series)
    sigma = prob.sigma
    fs = [list(f.coeffs[:sigma]) for f in prob.series]
    # basis[i][j] coefficient list of the j-th entry; resid[i] = sum_j basis[i][j] f_j mod x^sigma
    basis = [[[fld.one] if j == i else [] for j in range(r1)] for i in range(r1)]
    resid = [list(fs[i]) for i in range(r1)]
    sdeg = [-d for d in prob.degrees]
    for k in range(sigma):
        live = [i for i in range(r1) if resid[i][k] != zero]
        if not live:
            continue
        piv = min(live, key=lambda i: (sdeg[i], i))
        cinv = inv(resid[piv][k])
        for i in live:
            if i == piv:
                continue
            c = mul(resid[i][k], cinv)
            ri, rp = resid[i], resid[piv]
            for t in range(k, sigma):
                if rp[t] != zero:
                    ri[t] = add(ri[t], mul(c, rp[t]))
            for j in range(r1):
                bp = basis[piv][j]
                if not bp:
                    continue
                bi = basis[i][j]
                if len(bi) < len(bp):
                    bi.extend([zero] * (len(bp) - len(bi)))
                for t, v in enumerate(bp):
                    if v != zero:
                        bi[t] = add(bi[t], mul(c, v))
        basis[piv] = [[zero] + b if b else b for b in basis[piv]]
        resid[piv] = [zero] + resid[piv][:sigma - 1]
        sdeg[piv] += 1
    best = min(range(r1), key=lambda i: (sdeg[i], i))
    out = [UniPoly(fld, b) for b in basis[best]]
    _check_contract(prob, out)
    return out


def _check_contract(prob: PHProblem, out: List[UniPoly]):
    assert any(out), "approximant vector is zero"
    for p, d in zip(out, prob.degrees):
        assert p.deg <= d, f"approximant degree {p.deg} above bound {d}"
    sigma = prob.sigma
    total = TruncSeries.zero(prob.series[0].field, sigma)
    for p, f in zip(out, prob.series):
        total = total + (f.truncate(sigma) * p).truncate(sigma)
    assert total.valuation() >= sigma, f"approximant residual has valuation {total.valuation()} < {sigma}"


def ladder_powers(f: TruncSeries, ladder: Sequence[int]) -> List[TruncSeries]:
    out = []
    for e in ladder:
        p = TruncSeries.one(f.field, f.order) if e == 0 else f ** e
        out.append(p.truncate(f.order))
    return out


def guess_min_poly(f: TruncSeries, ladder: Sequence[int], degrees: Sequence[int]) -> BiPoly:
    """Candidate sum p_i y^(e_i) with sum p_i f^(e_i) = 0 on every known coefficient."""
    if len(ladder) != len(degrees):
        raise ValueError("one degree bound per ladder exponent")
    prob = PHProblem(ladder_powers(f, ladder), tuple(degrees))
    log.debug(f"Hermite-Pade of type {tuple(degrees)} on ladder {tuple(ladder)}, order {prob.sigma}")
    ps = pade_hermite(prob)
    cand = BiPoly.from_terms(f.field, {e: p for e, p in zip(ladder, ps) if p})
    if cand.ydeg < 1:
        raise GuessFailure(f"no candidate at type {tuple(degrees)}: relation free of y")
    check = residual_valuation(cand, f)
    if not check.vanishes:
        raise GuessFailure(f"no candidate at type {tuple(degrees)}: "
                           f"relation fails at x^{check.valuation} of {f.order} known terms")
    return cand.normalize()


def guess_escalating(source, ladder: Sequence[int], degrees: Sequence[int], retries: int = 2,
                     margin: int = 16, accept: Callable[[BiPoly], bool] = None) -> BiPoly:
    """Guess with `source(order)` supplying the series; double the type on failure.

    `accept` sees every candidate that survives the margin; a rejected
    candidate counts as a failed attempt.
    """
    degrees = list(degrees)
    for attempt in range(retries + 1):
        need = sum(d + 1 for d in degrees) - 1 + margin
        try:
            cand = guess_min_poly(source(need), ladder, degrees)
            if accept is not None and not accept(cand):
                raise GuessFailure(f"candidate of type {tuple(degrees)} rejected on longer data")
            return cand
        except GuessFailure as e:
            log.info(f"guess attempt {attempt + 1} failed: {e}")
            degrees = [2 * d + 1 for d in degrees]
    raise GuessFailure(f"no candidate after {retries + 1} attempts on ladder {tuple(ladder)}")


def common_root_order(Q: BiPoly, P: BiPoly) -> int:
    """Past this order, Q(x, f) = 0 mod x^k and P(x, f) = 0 force the minimal polynomial of f to divide Q.

    Res_y(Q, P) = A Q + B P has x-degree at most deg_y Q deg_x P + deg_y P deg_x Q,
    and its valuation at y = f is at least that of Q(x, f).
    """
    return Q.ydeg * P.xdeg + P.ydeg * Q.xdeg + 1


def shares_root(Q: BiPoly, P: BiPoly, source) -> bool:
    """Q vanishes at the root of P that `source(order)` expands, checked to the common-root order."""
    if Q.ydeg < 1:
        return False
    k = common_root_order(Q, P)
    return residual_valuation(Q, source(k), bound=k).vanishes


def guess_factor(source, P: BiPoly, attempts: Sequence[Tuple[Sequence[int], Sequence[int]]],
                 retries: int = 2, margin: int = 16) -> BiPoly:
    """A factor of the annihilator P vanishing at the series `source` expands.

    Each (ladder, degrees) attempt runs with its short prefixes first; the
    last resort is the support of P itself at the x-degree of P, and P when
    that fails too. The result is the gcd of the accepted candidate with P.
    """
    def accept(cand):
        return shares_root(cand, P, source)

    support = [e for e, c in enumerate(P.coeffs) if c]
    tries = [(ladder[:size], degs[:size], retries) for ladder, degs in attempts
             for size in range(2, len(ladder) + 1)]
    tries.append((support, [P.xdeg] * len(support), 0))
    for ladder, degs, n in tries:
        try:
            cand = guess_escalating(source, ladder, degs, n, margin, accept)
        except (GuessFailure, PrecisionError) as e:
            log.debug(f"factor guess on ladder {tuple(ladder)}: {e}")
            continue
        g = bipoly_gcd(P, cand)
        if g.ydeg >= 1:
            log.debug(f"factor of y-degree {g.ydeg} from ladder {tuple(ladder)}")
            return g
    log.info(f"no smaller factor found, keeping the annihilator of y-degree {P.ydeg}")
    return P.normalize()


# annihilators from resultants

def _ladder_gcd(*polys: BiPoly) -> int:
    g = 0
    for p in polys:
        g = gcd(g, p.y_exponent_gcd())
    return max(g, 1)


def _finish(r: BiPoly, g: int, what: str) -> BiPoly:
    if not r:
        raise ResultantError(f"identically zero resultant for the {what}; pass squarefree annihilators")
    if g > 1:
        r = r.inflate(g)
    return r.normalize()


def annihilator_product(phi0: BiPoly, phi1: BiPoly, method: str = 'auto') -> BiPoly:
    """Res_z(phi0(x, z), z^d phi1(x, y/z)) annihilates f0 f1."""
    g = _ladder_gcd(phi0, phi1)
    a, b = (phi0.deflate(g), phi1.deflate(g)) if g > 1 else (phi0, phi1)
    log.debug(f"product annihilator: y-degrees {a.ydeg}, {b.ydeg}, ladder step {g}")
    return _finish(resultant_z(list(a.coeffs), scaled_coeffs(b), method), g, 'product')


def annihilator_sum(phi0: BiPoly, phi1: BiPoly, method: str = 'auto') -> BiPoly:
    """Res_z(phi0(x, z), phi1(x, y + z)) annihilates f0 + f1."""
    log.debug(f"sum annihilator: y-degrees {phi0.ydeg}, {phi1.ydeg}")
    return _finish(resultant_z(list(phi0.coeffs), shifted_coeffs(phi1), method), 1, 'sum')


def annihilator_quotient(phi_num: BiPoly, phi_den: BiPoly, method: str = 'auto') -> BiPoly:
    """Res_t(phi_N(x, t), y^d phi_D(x, t/y)) annihilates f_N / f_D."""
    g = _ladder_gcd(phi_num, phi_den)
    a, b = (phi_num.deflate(g), phi_den.deflate(g)) if g > 1 else (phi_num, phi_den)
    log.debug(f"quotient annihilator: y-degrees {a.ydeg}, {b.ydeg}, ladder step {g}")
    return _finish(resultant_z(list(a.coeffs), reversed_scaled_coeffs(b), method), g, 'quotient')


# certificates

@dataclass
class MinPolyCertificate:
    candidate: BiPoly
    annihilator: BiPoly
    provenance: str
    order: int
    multiplicity: int = 0
    irreducible: Optional[bool] = None
    cofactor_residual: Optional[Residual] = None
    candidate_residual: Optional[Residual] = None
    status: Status = Status.UNVERIFIED
    clause: Optional[str] = None
    notes: List[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status is Status.PASSED

    def to_dict(self) -> dict:
        return {
            'candidate': self.candidate.to_text(),
            'annihilator': self.annihilator.to_text(),
            'provenance': self.provenance,
            'order': self.order,
            'multiplicity': self.multiplicity,
            'irreducible': self.irreducible,
            'cofactor_residual': None if self.cofactor_residual is None else str(self.cofactor_residual),
            'candidate_residual': None if self.candidate_residual is None else str(self.candidate_residual),
            'status': self.status.label,
            'clause': self.clause,
            'notes': list(self.notes),
        }


def certify_min_poly(Q: BiPoly, P: BiPoly, f: TruncSeries, order: int,
                     provenance: str = 'resultant') -> MinPolyCertificate:
    """Check that Q is the minimal polynomial of f given an annihilator P of f."""
    if f.order < order:
        raise PrecisionError(f"series known to order {f.order}, certificate needs {order}")
    f = f.truncate(order)
    cert = MinPolyCertificate(Q, P, provenance, order)
    fc = bipoly_factor_cert(P, Q)
    cert.multiplicity = fc.multiplicity
    cert.irreducible = fc.irreducible
    if fc.multiplicity < 1:
        return _fail(cert, "candidate does not divide the annihilator")
    if fc.irreducible is False:
        return _fail(cert, "candidate is reducible")
    cert.cofactor_residual = residual_valuation(fc.cofactor, f)
    cert.candidate_residual = residual_valuation(Q, f)
    if cert.cofactor_residual.vanishes:
        return _fail(cert, f"cofactor vanishes at the series to order {order}")
    if not cert.candidate_residual.vanishes:
        return _fail(cert, f"candidate leaves a residual of valuation {cert.candidate_residual.valuation}")
    if fc.irreducible is None:
        cert.status = Status.UNDECIDED
        cert.clause = "irreducibility undecided"
        return cert
    cert.status = Status.PASSED
    log.debug(f"certified minimal polynomial of y-degree {Q.ydeg} (m = {fc.multiplicity}, "
              f"cofactor residual {cert.cofactor_residual})")
    return cert


def certify_common_root(Q: BiPoly, P: BiPoly, f: TruncSeries,
                        provenance: str = 'resultant') -> MinPolyCertificate:
    """Check that Q annihilates the root f of P; minimality is not claimed."""
    if Q and Q.normalize() == P.normalize():
        cert = MinPolyCertificate(Q, P, provenance, 0, status=Status.PASSED)
        cert.notes.append("the annihilator itself")
        return cert
    order = common_root_order(Q, P)
    if f.order < order:
        raise PrecisionError(f"series known to order {f.order}, common-root check needs {order}")
    cert = MinPolyCertificate(Q, P, provenance, order)
    if Q.ydeg < 1:
        return _fail(cert, "candidate is free of y")
    cert.candidate_residual = residual_valuation(Q, f.truncate(order))
    if not cert.candidate_residual.vanishes:
        return _fail(cert, f"candidate leaves a residual of valuation {cert.candidate_residual.valuation}")
    cert.status = Status.PASSED
    cert.notes.append("annihilator, not certified minimal")
    return cert


def _fail(cert: MinPolyCertificate, clause: str) -> MinPolyCertificate:
    cert.status = Status.FAILED
    cert.clause = clause
    log.info(f"certificate failed: {clause}")
    return cert
