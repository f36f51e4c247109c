"""Exact and certified arithmetic for the number field Q[alpha].

Field elements are rational coordinate vectors in the power basis
1, alpha, ..., alpha^(d-1).  Traces, norms, and the integer trace recurrence
run exactly over the rationals (multiplication matrices, never floating
conjugates).  Complex embeddings come from certified roots: simultaneous
iteration at extended precision with Weierstrass a-posteriori inclusion
disks, so the PV verdict carries an explicit margin instead of a guess.

A PV (Pisot-Vijayaraghavan) number here: a real algebraic integer of degree
>= 2 with |alpha| > 1 whose remaining conjugates lie strictly inside the
unit circle.
"""

import itertools
import math
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath as mp

from .errors import (
    DegenerateError,
    NotPisotError,
    PrecisionError,
    ReducibleError,
)

# verdict margin: conjugate moduli must clear the unit circle by this much
PV_MARGIN = 1e-9

# radii below this are reported as the floor itself (still a valid bound)
_RADIUS_FLOOR = 1e-290

_MAX_DEGREE = 8  # factor search is exhaustive; keeps it desk-scale


def precision_bits() -> int:
    """Working mantissa bits for extended-precision steps (env override)."""
    return int(os.environ.get("PISOT_PRECISION_BITS", "128"))


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class NumberField:
    """Monic integer polynomial with certified roots and PV status.

    coeffs = (c_0, ..., c_{d-1}) encodes P(X) = X^d + c_{d-1} X^{d-1} + ... + c_0.
    roots are sorted by descending modulus (ties broken by real then imaginary
    part, descending); roots[0] is the dilation alpha.  radii[i] is a certified
    inclusion radius: the true root lies within radii[i] of roots_mp[i].
    """

    coeffs: tuple
    degree: int
    roots: tuple          # complex, double precision, modulus-descending
    radii: tuple          # per-root certified inclusion radii
    pv_status: str        # "PV" | "not-PV" | "indeterminate"
    real_count: int       # real conjugates among roots[1:]
    complex_pair_count: int
    B_alpha: int = 1
    roots_mp: tuple = dc_field(default=(), repr=False, compare=False)

    @property
    def alpha(self) -> float:
        return self.roots[0].real


@dataclass(frozen=True)
class FieldElement:
    """Element of Q[alpha] as Fraction coordinates in the power basis."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(q) for q in self.coords))

    @property
    def denominator_lcm(self) -> int:
        """lcm of coordinate denominators (1 iff the element lies in Z[alpha])."""
        out = 1
        for q in self.coords:
            out = out * q.denominator // math.gcd(out, q.denominator)
        return out

    def is_zero(self) -> bool:
        return all(q == 0 for q in self.coords)


@dataclass(frozen=True)
class LaurentTranslate:
    """Finitely supported integer map j -> coefficient, encoding sum_j c_j alpha^j."""

    items: tuple  # sorted ((j, c), ...) with c != 0

    @property
    def support(self) -> dict:
        return dict(self.items)


@dataclass(frozen=True)
class FieldMatrices:
    """Vandermonde V, its inverse, companion C, and diagonal D for one field.

    Row k of V_inv holds the coefficients of the Lagrange polynomial
    Q_k(X) = P(X) / ((X - alpha_k) P'(alpha_k)).
    """

    V: object
    V_inv: object
    C: object
    D: object
    det_V_abs: float
    disc: int


# ---------------------------------------------------------------------------
# constructors


def laurent(support) -> LaurentTranslate:
    """Build a LaurentTranslate from a {power: coefficient} map."""
    items = tuple(sorted((int(j), int(c)) for j, c in dict(support).items() if int(c) != 0))
    return LaurentTranslate(items)


def laurent_int(n: int) -> LaurentTranslate:
    """Integer translate n = n * alpha^0."""
    return laurent({0: n})


def laurent_add(t1: LaurentTranslate, t2: LaurentTranslate) -> LaurentTranslate:
    acc = dict(t1.items)
    for j, c in t2.items:
        acc[j] = acc.get(j, 0) + c
    return laurent(acc)


def fe(field: NumberField, coords) -> FieldElement:
    v = tuple(Fraction(q) for q in coords)
    if len(v) != field.degree:
        raise ValueError("coordinate length %d != field degree %d" % (len(v), field.degree))
    return FieldElement(v)


def fe_rational(field: NumberField, q) -> FieldElement:
    return fe(field, (Fraction(q),) + (Fraction(0),) * (field.degree - 1))


def fe_alpha(field: NumberField) -> FieldElement:
    """The generator alpha as a field element."""
    if field.degree == 1:
        return FieldElement((Fraction(-field.coeffs[0]),))  # P = X - n
    return fe(field, (0, 1) + (0,) * (field.degree - 2))


# ---------------------------------------------------------------------------
# exact rational linear algebra helpers


def _fraction_det(rows):
    """Determinant by fraction-exact Gaussian elimination (destructive on a copy)."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _fraction_solve(rows, rhs):
    """Solve M x = rhs exactly; raises ZeroDivisionError when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = Fraction(1) / m[col][col]
        for c in range(col, n + 1):
            m[col][c] *= inv
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[r][n] for r in range(n)]


def _poly_mod_reduce(field: NumberField, coeffs):
    """Reduce a Fraction coefficient list modulo P to length d."""
    d = field.degree
    c = list(coeffs)
    for i in range(len(c) - 1, d - 1, -1):
        top = c[i]
        if top == 0:
            continue
        c[i] = Fraction(0)
        # X^i = X^(i-d) * X^d = -X^(i-d) * (c_{d-1} X^{d-1} + ... + c_0)
        for j in range(d):
            c[i - d + j] -= top * field.coeffs[j]
    c = c[:d] + [Fraction(0)] * (d - len(c))
    return c[:d]


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(tuple(x + y for x, y in zip(a.coords, b.coords)))


def fe_neg(a: FieldElement) -> FieldElement:
    return FieldElement(tuple(-x for x in a.coords))


def fe_scale(a: FieldElement, q) -> FieldElement:
    q = Fraction(q)
    return FieldElement(tuple(q * x for x in a.coords))


def fe_mul(field: NumberField, a: FieldElement, b: FieldElement) -> FieldElement:
    raw = [Fraction(0)] * (2 * field.degree - 1)
    for i, x in enumerate(a.coords):
        if x == 0:
            continue
        for j, y in enumerate(b.coords):
            if y != 0:
                raw[i + j] += x * y
    return FieldElement(tuple(_poly_mod_reduce(field, raw)))


def fe_pow(field: NumberField, a: FieldElement, n: int) -> FieldElement:
    if n < 0:
        return fe_pow(field, fe_inv(field, a), -n)
    out = fe_rational(field, 1)
    base = a
    while n:
        if n & 1:
            out = fe_mul(field, out, base)
        base = fe_mul(field, base, base)
        n >>= 1
    return out


def multiplication_matrix(field: NumberField, a: FieldElement):
    """Matrix of x -> a*x in the power basis; column j = coords of a*alpha^j."""
    d = field.degree
    cols = []
    cur = a
    for _ in range(d):
        cols.append(cur.coords)
        cur = fe_mul(field, cur, fe_alpha(field))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def fe_inv(field: NumberField, a: FieldElement) -> FieldElement:
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero field element")
    m = multiplication_matrix(field, a)
    e0 = [Fraction(1)] + [Fraction(0)] * (field.degree - 1)
    return FieldElement(tuple(_fraction_solve(m, e0)))


def fe_embed(field: NumberField, a: FieldElement, k: int = 0, prec: int = None):
    """Complex embedding sigma_k(a) = sum q_i alpha_k^i at extended precision."""
    if prec is None:
        prec = precision_bits()
    with mp.workprec(prec):
        z = field.roots_mp[k]
        acc = mp.mpc(0)
        for q in reversed(a.coords):
            acc = acc * z + mp.mpf(q.numerator) / q.denominator
        return acc


def fe_embed_float(field: NumberField, a: FieldElement, k: int = 0) -> complex:
    return complex(fe_embed(field, a, k))


# ---------------------------------------------------------------------------
# exact polynomial utilities (integer / rational coefficient lists, ascending)


def _poly_derivative(p):
    return [i * p[i] for i in range(1, len(p))]


def _poly_divmod(num, den):
    """Rational polynomial division: returns (quotient, remainder)."""
    num = [Fraction(x) for x in num]
    den = [Fraction(x) for x in den]
    while den and den[-1] == 0:
        den.pop()
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    r = list(num)
    dlead = den[-1]
    dd = len(den) - 1
    while len(r) - 1 >= dd and any(x != 0 for x in r):
        shift = len(r) - 1 - dd
        f = r[-1] / dlead
        if f != 0:
            q[shift] += f
            for i, dc in enumerate(den):
                r[shift + i] -= f * dc
        r.pop()
    return q, r


def _poly_gcd_degree(p1, p2) -> int:
    """Degree of gcd over Q (Euclid with Fractions)."""
    a = [Fraction(x) for x in p1]
    b = [Fraction(x) for x in p2]
    while any(x != 0 for x in b):
        _, r = _poly_divmod(a, b)
        while r and r[-1] == 0:
            r.pop()
        a, b = b, r
    while a and a[-1] == 0:
        a.pop()
    return len(a) - 1


def _monic_poly(field_coeffs):
    """(c_0..c_{d-1}) -> ascending list [c_0, ..., c_{d-1}, 1]."""
    return list(field_coeffs) + [1]


def discriminant(coeffs) -> int:
    """disc(P) via the Sylvester resultant of P and P', exact integer."""
    p = _monic_poly(coeffs)
    dp = _poly_derivative(p)
    n, m = len(p) - 1, len(dp) - 1
    size = n + m
    rows = []
    for i in range(m):  # shifted copies of P
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = Fraction(c)
        rows.append(row)
    for i in range(n):  # shifted copies of P'
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(dp)):
            row[i + j] = Fraction(c)
        rows.append(row)
    res = _fraction_det(rows)
    disc = (-1) ** (n * (n - 1) // 2) * res  # leading coefficient is 1
    assert disc.denominator == 1
    return int(disc)


def _int_poly_divides(field_coeffs, factor_coeffs) -> bool:
    """Does monic integer factor (b_0..b_{e-1}, 1 implicit) divide P exactly?"""
    p = _monic_poly(field_coeffs)
    g = list(factor_coeffs) + [1]
    q, r = _poly_divmod(p, g)
    if any(x != 0 for x in r):
        return False
    return all(x.denominator == 1 for x in q)


# ---------------------------------------------------------------------------
# root certification


def _certified_roots(coeffs, prec):
    """Simultaneous-iteration roots plus Weierstrass inclusion radii.

    The union of disks |z - z_i| <= d * |P(z_i)| / prod_{j != i} |z_i - z_j|
    contains every root; pairwise disjoint disks certify one root each.
    """
    d = len(coeffs)
    with mp.workprec(prec):
        desc = [mp.mpf(1)] + [mp.mpf(c) for c in reversed(coeffs)]
        roots = mp.polyroots(desc, maxsteps=200, extraprec=prec // 2, cleanup=True)
        roots = [mp.mpc(z) for z in roots]
        radii = []
        for i, z in enumerate(roots):
            gap = mp.mpf(1)
            for j, u in enumerate(roots):
                if j != i:
                    gap *= abs(z - u)
            radii.append(d * abs(mp.polyval(desc, z)) / gap)
        # disjointness of the inclusion disks
        ok = all(
            abs(roots[i] - roots[j]) > radii[i] + radii[j]
            for i in range(d)
            for j in range(i + 1, d)
        )
        return roots, radii, ok


def _sort_roots(roots, radii):
    order = sorted(
        range(len(roots)),
        key=lambda i: (-abs(roots[i]), -mp.re(roots[i]), -mp.im(roots[i])),
    )
    return [roots[i] for i in order], [radii[i] for i in order]


def _classify(roots, radii, degree):
    """PV / not-PV / indeterminate with margin PV_MARGIN, from certified disks."""
    if degree < 2:
        return "not-PV"
    z1, r1 = roots[0], radii[0]
    # conjugates first: a single certified escape from the closed unit disk settles it
    boundary = False
    for z, r in zip(roots[1:], radii[1:]):
        lo, hi = abs(z) - r, abs(z) + r
        if lo > 1 + PV_MARGIN:
            return "not-PV"
        if hi >= 1 - PV_MARGIN:
            boundary = True
    if boundary:
        return "indeterminate"
    if abs(mp.im(z1)) > r1:
        return "not-PV"  # dominant root not real
    if abs(z1) - r1 <= 1 + PV_MARGIN:
        return "indeterminate" if abs(z1) + r1 >= 1 - PV_MARGIN else "not-PV"
    return "PV"


def _build_field(coeffs, B_alpha=1, require_degree_2=True):
    coeffs = tuple(int(c) for c in coeffs)
    d = len(coeffs)
    if d == 0:
        raise ValueError("empty coefficient list")
    if require_degree_2 and d < 2:
        raise ValueError("degree must be >= 2 (got %d)" % d)
    if d > _MAX_DEGREE:
        raise ValueError("degree %d beyond supported bound %d" % (d, _MAX_DEGREE))
    if coeffs[0] == 0:
        raise ValueError("c_0 must be nonzero (alpha must be invertible)")

    p = _monic_poly(coeffs)
    if _poly_gcd_degree(p, _poly_derivative(p)) > 0:
        raise DegenerateError("polynomial is not squarefree: %s" % (coeffs,))

    prec = 4 * precision_bits()
    for _ in range(4):
        roots, radii, disjoint = _certified_roots(coeffs, prec)
        if disjoint and all(r < 1e-9 for r in radii):
            break
        prec *= 2
    else:
        raise PrecisionError("root radii could not be certified below 1e-9")

    with mp.workprec(prec):
        roots, radii = _sort_roots(roots, radii)
        # exact: every monic integer factor is a product over a subset of roots
        if d >= 2:
            for e in range(1, d // 2 + 1):
                for sub in itertools.combinations(range(d), e):
                    # expand prod_{i in sub} (X - roots[i]), ascending coefficients
                    cand = [mp.mpc(1)]
                    for i in sub:
                        nxt = [mp.mpc(0)] * (len(cand) + 1)
                        for t, c in enumerate(cand):
                            nxt[t + 1] += c
                            nxt[t] -= roots[i] * c
                        cand = nxt
                    ints = []
                    good = True
                    for c in cand[:-1]:  # drop the monic leading 1
                        if abs(mp.im(c)) > 0.25:
                            good = False
                            break
                        near = mp.nint(mp.re(c))
                        if abs(mp.re(c) - near) > 0.25:
                            good = False
                            break
                        ints.append(int(near))
                    if good and _int_poly_divides(coeffs, ints):
                        raise ReducibleError(
                            "monic factor with ascending coefficients %s divides %s"
                            % (tuple(ints) + (1,), coeffs)
                        )
        pv = _classify(roots, radii, d)
        # snap certified-real roots (conjugate pairs keep their imaginary parts)
        cleaned = []
        for z, r in zip(roots, radii):
            cleaned.append(mp.mpc(mp.re(z)) if abs(mp.im(z)) <= r else z)
        a = sum(1 for z in cleaned[1:] if mp.im(z) == 0)
        b = (d - 1 - a) // 2

    return NumberField(
        coeffs=coeffs,
        degree=d,
        roots=tuple(complex(z) for z in cleaned),
        radii=tuple(float(max(r, _RADIUS_FLOOR)) for r in radii),
        pv_status=pv,
        real_count=a,
        complex_pair_count=b,
        B_alpha=int(B_alpha),
        roots_mp=tuple(cleaned),
    )


def make_field(coeffs, B_alpha: int = 1) -> NumberField:
    """Certify a monic integer polynomial (c_0, ..., c_{d-1}), d >= 2.

    Raises ReducibleError / DegenerateError / PrecisionError as applicable;
    pv_status is decided with margin PV_MARGIN or reported indeterminate.
    """
    return _build_field(coeffs, B_alpha=B_alpha, require_degree_2=True)


def integer_dilation_field(n: int) -> NumberField:
    """Degree-1 field for an integer dilation |n| >= 2 (never PV by definition)."""
    n = int(n)
    if abs(n) < 2:
        raise ValueError("integer dilation must satisfy |n| >= 2")
    return _build_field((-n,), require_degree_2=False)


def parse_poly(text: str):
    """Parse 'c0,c1,...' into an integer coefficient tuple (monic leading 1 implicit)."""
    parts = [p.strip() for p in str(text).split(",") if p.strip() != ""]
    if not parts:
        raise ValueError("empty polynomial spec")
    return tuple(int(p) for p in parts)


# ---------------------------------------------------------------------------
# spec operations


def is_pisot(field: NumberField) -> str:
    """Return the certified verdict: 'PV', 'not-PV', or 'indeterminate'."""
    return field.pv_status


def trace(elem: FieldElement, field: NumberField) -> Fraction:
    """T(elem) = sum of conjugates, exactly (trace of the multiplication matrix)."""
    m = multiplication_matrix(field, elem)
    return sum(m[i][i] for i in range(field.degree))


def norm(elem: FieldElement, field: NumberField) -> Fraction:
    """N(elem) = product of conjugates, exactly (determinant of the multiplication matrix)."""
    return _fraction_det(multiplication_matrix(field, elem))


def trace_power_sequence(field: NumberField, mu: FieldElement, j_max: int):
    """s(j) = T(mu * alpha^j) for j = 0..j_max, exact.

    First d values from explicit traces, then the integer-coefficient
    recurrence s(j) = -c_{d-1} s(j-1) - ... - c_0 s(j-d).
    """
    d = field.degree
    if j_max < d - 1:
        raise ValueError("j_max must be >= degree-1")
    al = fe_alpha(field)
    seq = []
    cur = mu
    for _ in range(d):
        seq.append(trace(cur, field))
        cur = fe_mul(field, cur, al)
    for j in range(d, j_max + 1):
        s = Fraction(0)
        for i in range(d):
            s -= field.coeffs[i] * seq[j - d + i]
        seq.append(s)
    return seq


def pisot_set_test(field: NumberField, mu: FieldElement) -> bool:
    """Integer-trace test: T(mu alpha^j) in Z for j = 0..d-1.

    Characterizes membership of mu in the Pisot set of alpha up to powers of
    alpha; requires a certified PV field.
    """
    if field.pv_status != "PV":
        raise NotPisotError("field is %s, need certified PV" % field.pv_status)
    if mu.is_zero():
        raise ValueError("mu must be nonzero")
    al = fe_alpha(field)
    cur = mu
    for _ in range(field.degree):
        if trace(cur, field).denominator != 1:
            return False
        cur = fe_mul(field, cur, al)
    return True


def dist_to_int(x):
    """Distance from x to the nearest integer, in [0, 1/2]."""
    if isinstance(x, mp.mpf):
        f = x - mp.floor(x)
        return min(f, 1 - f)
    f = x - math.floor(x)
    return min(f, 1 - f)


def homoclinic_profile(field: NumberField, lam: FieldElement, j_range):
    """Tabulate ||lam * alpha^j|| with the exact-trace residue trick.

    lam * alpha^j = s(j) - sum_{k>=2} sigma_k(lam) alpha_k^j with s(j) the exact
    rational trace, so the distance is computed from small residues only; large
    powers never enter floating arithmetic.  Returns (points, fitted_slope)
    where points = [(j, dist), ...] and the slope is the least-squares fit of
    log dist over the last half of the range (zero distances excluded).

    Also verifies the certified bound dist <= sum_{k>=2} |sigma_k(lam)| |alpha_k|^j
    pointwise at every j with integer s(j); a violation raises PrecisionError.
    """
    if field.pv_status != "PV":
        raise NotPisotError("field is %s, need certified PV" % field.pv_status)
    js = sorted(int(j) for j in j_range)
    if not js:
        raise ValueError("empty j_range")
    # membership (up to a power shift): some alpha^m * lam must pass the trace test
    al = fe_alpha(field)
    shifted = lam
    for _ in range(64):
        if pisot_set_test(field, shifted):
            break
        shifted = fe_mul(field, shifted, al)
    else:
        raise ValueError("lam does not reach the Pisot set within 64 power shifts")

    prec = precision_bits()
    seq = trace_power_sequence(field, lam, max(js[-1], field.degree - 1))
    pts = []
    with mp.workprec(prec):
        conj = [fe_embed(field, lam, k, prec) for k in range(1, field.degree)]
        mods = [abs(c) for c in conj]
        rk = [abs(field.roots_mp[k]) for k in range(1, field.degree)]
        for j in js:
            if j >= 0:
                s_j = seq[j]
            else:
                s_j = trace(fe_mul(field, lam, fe_pow(field, al, j)), field)
            res = -sum(c * field.roots_mp[k + 1] ** j for k, c in enumerate(conj))
            frac_part = Fraction(s_j.numerator % s_j.denominator, s_j.denominator)
            x = mp.mpf(frac_part.numerator) / frac_part.denominator + mp.re(res)
            dist = float(dist_to_int(x))
            if s_j.denominator == 1:
                bound = float(sum(m * (r ** j) for m, r in zip(mods, rk)))
                if dist > bound + 1e-12 * (1 + bound):
                    raise PrecisionError("homoclinic bound violated at j=%d" % j)
            pts.append((j, dist))
    tail = [(j, d) for j, d in pts[len(pts) // 2 :] if d > 0]
    slope = float("nan")
    if len(tail) >= 2:
        xs = [j for j, _ in tail]
        ys = [math.log(d) for _, d in tail]
        n = len(xs)
        mx, my = sum(xs) / n, sum(ys) / n
        denom = sum((x - mx) ** 2 for x in xs)
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / denom
    return pts, slope


def first_lagrange_row(field: NumberField):
    """Row 1 of V^{-1} as exact field elements.

    Entry i is the coefficient of X^i in P(X)/((X - alpha) P'(alpha)), an
    element of Q[alpha]; rows k >= 2 are its conjugates.
    """
    d = field.degree
    al = fe_alpha(field)
    # quotient of P by (X - alpha): q_{d-1}=1, q_{i} = c_{i+1} + alpha*q_{i+1}
    q = [None] * d
    q[d - 1] = fe_rational(field, 1)
    for i in range(d - 2, -1, -1):
        q[i] = fe_add(fe_rational(field, field.coeffs[i + 1]), fe_mul(field, al, q[i + 1]))
    # P'(alpha), exactly
    dp = _poly_derivative(_monic_poly(field.coeffs))
    pprime = FieldElement(tuple(_poly_mod_reduce(field, [Fraction(c) for c in dp])))
    inv = fe_inv(field, pprime)
    return tuple(fe_mul(field, qi, inv) for qi in q)


def field_matrices(field: NumberField) -> FieldMatrices:
    """Build V (Vandermonde of roots), V^{-1} (Lagrange rows), companion C, diagonal D."""
    import numpy as np

    d = field.degree
    prec = precision_bits()
    with mp.workprec(prec):
        V = np.array(
            [[complex(field.roots_mp[k] ** i) for k in range(d)] for i in range(d)],
            dtype=complex,
        )
        row1 = first_lagrange_row(field)
        V_inv = np.array(
            [[complex(fe_embed(field, row1[i], k, prec)) for i in range(d)] for k in range(d)],
            dtype=complex,
        )
        det = mp.mpc(1)
        for i in range(d):
            for j in range(i + 1, d):
                det *= field.roots_mp[j] - field.roots_mp[i]
        det_abs = float(abs(det))
    C = np.zeros((d, d), dtype=complex)
    for i in range(d - 1):
        C[i, i + 1] = 1.0
    C[d - 1, :] = [-c for c in field.coeffs]
    D = np.diag(np.array(field.roots, dtype=complex))
    err = np.max(np.abs(C @ V - V @ D))
    if err > 1e-8:
        raise PrecisionError("companion/Vandermonde consistency error %.3e" % err)
    return FieldMatrices(V=V, V_inv=V_inv, C=C, D=D, det_V_abs=det_abs, disc=discriminant(field.coeffs))


def laurent_embed(field: NumberField, t: LaurentTranslate):
    """Exact reduction of sum_j c_j alpha^j to a FieldElement plus its real embedding.

    Negative powers clear through the exact inverse
    alpha^{-1} = -(alpha^{d-1} + c_{d-1} alpha^{d-2} + ... + c_1)/c_0.
    """
    al = fe_alpha(field)
    acc = fe_rational(field, 0)
    for j, c in t.items:
        acc = fe_add(acc, fe_scale(fe_pow(field, al, j), c))
    return acc, float(mp.re(fe_embed(field, acc, 0)))
