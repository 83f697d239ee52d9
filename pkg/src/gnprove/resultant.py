"""Resultants in z of polynomials with polynomial coefficients.

Two routes compute the same value. The reference is fraction-free (Bareiss)
elimination on the Sylvester matrix over any exact ring (UniPoly, BiPoly,
RatFunc). The modular route evaluates the x and y coefficients on a grid of
points of a large extension L of the coefficient field, runs the Euclidean
algorithm on all grid points at once with numpy, then interpolates in y and
in x and maps the coefficients back into the base field.

Signs never matter: everything here has characteristic 2.
"""
import logging

import numpy as np

from . import GnProveError
from .bipoly import BiPoly
from .fields import FieldElem, FqField, embedding, field_make
from .poly import UniPoly

log = logging.getLogger(__name__)

# extension degree cap for the residue field L of the modular route
MAX_RESIDUE_DEGREE = 16


class ResultantError(GnProveError):
    pass


def _ring_zero(c):
    if isinstance(c, FieldElem):
        return FieldElem(c.field, c.field.zero)
    return type(c).zero(c.field)


def _ring_one(c):
    if isinstance(c, FieldElem):
        return FieldElem(c.field, c.field.one)
    return type(c).one(c.field)


def _exact(a, b):
    if isinstance(a, UniPoly):
        return a.exact_div(b)
    return a / b


def _trim(coeffs):
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return c


def sylvester_matrix(f, g):
    """Sylvester matrix of two coefficient lists (lowest degree first)."""
    k, n = len(f) - 1, len(g) - 1
    zero = _ring_zero(f[0])
    size = k + n
    rows = []
    for r in range(n):
        row = [zero] * size
        for i, c in enumerate(reversed(f)):
            row[r + i] = c
        rows.append(row)
    for r in range(k):
        row = [zero] * size
        for i, c in enumerate(reversed(g)):
            row[r + i] = c
        rows.append(row)
    return rows


def bareiss_det(rows):
    """Determinant by fraction-free elimination; every division is exact."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        raise ResultantError("determinant of an empty matrix")
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    break
            else:
                return _ring_zero(m[0][0])
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                v = m[i][j] * pivot
                if mik and m[k][j]:
                    v = v - mik * m[k][j]
                m[i][j] = v if prev is None else _exact(v, prev)
        prev = pivot
    return m[n - 1][n - 1]


def resultant_elim(f, g):
    """Res_z(f, g) for coefficient lists (or BiPolys read as polynomials in their y)."""
    if isinstance(f, BiPoly):
        f = f.coeffs
    if isinstance(g, BiPoly):
        g = g.coeffs
    f, g = _trim(f), _trim(g)
    if not f or not g:
        raise ResultantError("resultant with a zero polynomial")
    k, n = len(f) - 1, len(g) - 1
    if k == 0 and n == 0:
        raise ResultantError("both polynomials are constant in z")
    if k == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** k
    return bareiss_det(sylvester_matrix(f, g))


# scalar Euclid over a finite field with formal degrees

def res_formal(field, a, b):
    """Res of raw-value coefficient lists a, b taken with formal degrees len - 1."""
    k, n = len(a) - 1, len(b) - 1
    if k == 0:
        return field.pow(a[0], n)
    if n == 0:
        return field.pow(b[0], k)
    a = list(a)
    b = list(b)
    ka = _actual_degree(a)
    kb = _actual_degree(b)
    if ka < k and kb < n:
        return 0
    if ka < 0 or kb < 0:
        return 0
    if ka < k:
        # drop of the first degree: Res_{k,n} = lc(b)^(k - ka) Res_{ka,n}
        return field.mul(field.pow(b[n], k - ka), res_formal(field, a[:ka + 1], b))
    if kb < n:
        return field.mul(field.pow(a[k], n - kb), res_formal(field, a, b[:kb + 1]))
    return _res_euclid(field, a, b)


def _actual_degree(c) -> int:
    d = len(c) - 1
    while d >= 0 and c[d] == 0:
        d -= 1
    return d


def _res_euclid(field, f, g):
    res = 1
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return field.mul(res, field.pow(g[0], df))
        if df == 0:
            return field.mul(res, field.pow(f[0], dg))
        if df < dg:
            f, g = g, f
            continue
        r = list(f)
        inv = field.inv(g[-1])
        for i in range(df, dg - 1, -1):
            q = field.mul(r[i], inv)
            if q:
                for j in range(dg + 1):
                    r[i - dg + j] ^= field.mul(q, g[j])
        r = r[:dg]
        dr = _actual_degree(r)
        if dr < 0:
            return 0
        res = field.mul(res, field.pow(g[-1], df - dr))
        f, g = g, r[:dr + 1]


# modular route

def _residue_field(base: FqField, points: int):
    """Extension L of base with more than `points` nonzero elements, or None."""
    k = (MAX_RESIDUE_DEGREE // base.m) * base.m
    if k == 0:
        return None
    big = field_make(2, k)
    if big.order - 1 < points:
        return None
    return big


def _horner(field, coeffs, xs):
    r = np.zeros_like(xs)
    for c in reversed(coeffs):
        r = field.vmul(r, xs) ^ c
    return r


def _euclid_vec(field, F, G):
    """Resultants of the rows of F and G; also the mask of rows needing the scalar path."""
    P = F.shape[0]
    res = np.ones(P, dtype=np.int64)
    df, dg = F.shape[1] - 1, G.shape[1] - 1
    bad = (F[:, df] == 0) | (G[:, dg] == 0)
    if df < dg:
        F, G, df, dg = G, F, dg, df
    while True:
        if dg == 0:
            return field.vmul(res, field.vpow(G[:, 0], df)), bad
        lcg = G[:, dg]
        inv = field.vinv(lcg)
        R = F.copy()
        for i in range(df, dg - 1, -1):
            q = field.vmul(R[:, i], inv)
            R[:, i - dg:i + 1] ^= field.vmul(q[:, None], G)
        R = R[:, :dg]
        bad = bad | (R[:, dg - 1] == 0)
        res = field.vmul(res, field.vpow(lcg, df - dg + 1))
        F, G, df, dg = G, R, dg, dg - 1


def _newton_interpolate(field, xs, values):
    """Coefficients (lowest first, along axis 0) of the polynomials through (xs, values[:, c])."""
    n = len(xs)
    c = values.copy()
    for k in range(1, n):
        diff = xs[k:] ^ xs[:-k]
        c[k:] = field.vmul(c[k:] ^ c[k - 1:-1], field.vinv(diff)[:, None])
    p = np.zeros_like(c)
    p[0] = c[n - 1]
    for k in range(n - 2, -1, -1):
        shifted = np.zeros_like(p)
        shifted[1:] = p[:-1]
        p = shifted ^ field.vmul(p, xs[k])
        p[0] ^= c[k]
    return p


def modular_resultant(a_coeffs, b_coeffs, base: FqField):
    """Res_z(A, B) for A with UniPoly z-coefficients and B with BiPoly z-coefficients.

    Returns None when no residue field is large enough for the degree bounds.
    """
    k, n = len(a_coeffs) - 1, len(b_coeffs) - 1
    ax = max((c.deg for c in a_coeffs), default=0)
    bx = max((c.xdeg for c in b_coeffs), default=0)
    by = max((c.ydeg for c in b_coeffs), default=0)
    nx = n * max(ax, 0) + k * max(bx, 0) + 1
    ny = k * max(by, 0) + 1
    big = _residue_field(base, max(nx, ny))
    if big is None:
        log.debug(f"no residue field for {nx} x {ny} points over {base!r}")
        return None
    log.debug(f"modular resultant over {big!r}: {nx} x {ny} points, z-degrees {k}, {n}")
    images = np.array(embedding(base, big), dtype=np.int64)
    g = big._primitive_element()
    powers = [1]
    for _ in range(max(nx, ny)):
        powers.append(big.mul(powers[-1], g))
    xs = np.array(powers[:nx], dtype=np.int64)
    ys = np.array(powers[:ny], dtype=np.int64)

    def at_x(p: UniPoly):
        return _horner(big, [int(images[c]) for c in p.coeffs], xs)

    P = nx * ny
    A = np.zeros((P, k + 1), dtype=np.int64)
    for s, c in enumerate(a_coeffs):
        A[:, s] = np.repeat(at_x(c), ny)
    B = np.zeros((P, n + 1), dtype=np.int64)
    ypow = [np.ones(ny, dtype=np.int64)]
    for _ in range(by):
        ypow.append(big.vmul(ypow[-1], ys))
    for s, c in enumerate(b_coeffs):
        col = np.zeros(P, dtype=np.int64)
        for t, u in enumerate(c.coeffs):
            if u:
                col ^= big.vmul(np.repeat(at_x(u), ny), np.tile(ypow[t], nx))
        B[:, s] = col
    res, bad = _euclid_vec(big, A, B)
    idx = np.nonzero(bad)[0]
    if len(idx):
        log.debug(f"{len(idx)} degenerate points recomputed")
    for p in idx:
        res[p] = res_formal(big, A[p].tolist(), B[p].tolist())
    grid = res.reshape(nx, ny)
    in_y = _newton_interpolate(big, ys, grid.T)       # (ny coefficients, nx points)
    coeffs = _newton_interpolate(big, xs, in_y.T)     # (nx coefficients, ny coefficients)
    back = np.full(big.order, -1, dtype=np.int64)
    back[images] = np.arange(base.order)
    mapped = back[coeffs]
    if (mapped < 0).any():
        raise ResultantError("interpolated coefficients outside the base field")
    return BiPoly(base, [UniPoly(base, mapped[:, j].tolist()) for j in range(ny)])


def resultant_z(a_coeffs, b_coeffs, method: str = 'auto') -> BiPoly:
    """Res_z(A, B) with A free of y; the coefficient lists are lowest z-degree first."""
    a_coeffs = _trim(a_coeffs)
    b_coeffs = _trim(b_coeffs)
    if not a_coeffs or not b_coeffs:
        raise ResultantError("resultant with a zero polynomial")
    field = a_coeffs[0].field
    if len(a_coeffs) == 1 and len(b_coeffs) == 1:
        raise ResultantError("both polynomials are constant in z")
    if method in ('auto', 'modular') and isinstance(field, FqField):
        out = modular_resultant(a_coeffs, b_coeffs, field)
        if out is not None:
            return out
        if method == 'modular':
            raise ResultantError("no residue field large enough for a modular resultant")
    lifted = [BiPoly(field, (c,)) for c in a_coeffs]
    return resultant_elim(lifted, b_coeffs)


# z-coefficients of the second polynomial for each annihilator kind

def scaled_coeffs(phi: BiPoly):
    """z^d phi(x, y/z): coefficient of z^(d - i) is c_i(x) y^i."""
    d = phi.ydeg
    out = [BiPoly.zero(phi.field)] * (d + 1)
    for i, c in enumerate(phi.coeffs):
        if c:
            out[d - i] = BiPoly.from_terms(phi.field, {i: c})
    return out


def reversed_scaled_coeffs(phi: BiPoly):
    """y^d phi(x, t/y): coefficient of t^i is c_i(x) y^(d - i)."""
    d = phi.ydeg
    return [BiPoly.from_terms(phi.field, {d - i: c}) if c else BiPoly.zero(phi.field)
            for i, c in enumerate(phi.coeffs)]


def shifted_coeffs(phi: BiPoly):
    """phi(x, y + z) as z-coefficients; binomials mod 2 by Lucas: C(i, s) odd iff s & i == s."""
    d = phi.ydeg
    out = []
    for s in range(d + 1):
        terms = {}
        for i in range(s, d + 1):
            c = phi.coeff(i)
            if c and (i & s) == s:
                terms[i - s] = c
        out.append(BiPoly.from_terms(phi.field, terms))
    return out
