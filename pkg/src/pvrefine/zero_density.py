"""Near-zero scanning, zero-set density proxies, vanishing probes, norm forms.

A "zero" of a complex-valued function along the real line is operationalized
as a refined local minimum of |f| below a threshold delta (default 1e-8 for
finite masks, 1e-6 for truncated infinite ones): generic complex functions
have no exact zeros on a line, and the density statements only need a robust
proxy.  Density estimates report min/max of count-per-length over nested
windows as finite-scale stand-ins for the lower/upper asymptotic density.

Norm forms: with e_0..e_{d-1} the exact Lagrange dual basis (rows of V^{-1}
are its conjugate embeddings), the product over all embeddings
N(mu_1) = prod_k (row_k(V^{-1}) . n) is a degree-d integer form in n divided
by a fixed denominator dividing |disc(P)|.  The expansion runs at extended
precision, coefficients are rounded to that exact denominator, and the result
is verified against exact field norms before it is returned.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .algebraic_core import (
    FieldElement,
    NumberField,
    discriminant,
    fe_add,
    fe_embed,
    fe_embed_float,
    fe_rational,
    fe_scale,
    first_lagrange_row,
    norm,
    precision_bits,
)
from .errors import PrecisionError, SizeError
from .refinement import RefinementMask, phihat_orbit

__all__ = [
    "NearZeroSet",
    "NormForm",
    "ProbeRecord",
    "scan_near_zeros",
    "density_estimate",
    "vanishing_probe",
    "norm_form",
    "count_norm_values",
]

_REFINE_XTOL = 1e-10
_GOLDEN = (math.sqrt(5) - 1) / 2


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class NearZeroSet:
    """Refined minima of |f| below threshold on [0, L]."""

    threshold: float
    points: tuple  # sorted ((y, |f(y)|), ...)
    interval: tuple

    def __post_init__(self):
        ys = [y for y, _ in self.points]
        if ys != sorted(ys):
            raise ValueError("points must be sorted by position")
        if any(v >= self.threshold for _, v in self.points):
            raise ValueError("residual at or above threshold")

    def positions(self):
        return [y for y, _ in self.points]


@dataclass(frozen=True)
class NormForm:
    """Homogeneous integer form of degree d in d variables, over a denominator.

    form(n)/denominator equals the exact field norm of mu_1 = sum n_i e_i.
    numerator_form is a sorted tuple of (exponent_tuple, coefficient).
    """

    numerator_form: tuple
    denominator: int

    @property
    def degree(self) -> int:
        return sum(self.numerator_form[0][0])

    def evaluate_numerator(self, n) -> int:
        acc = 0
        for exps, c in self.numerator_form:
            term = c
            for ni, e in zip(n, exps):
                term *= ni**e
            acc += term
        return acc

    def evaluate(self, n) -> Fraction:
        return Fraction(self.evaluate_numerator(n), self.denominator)


@dataclass(frozen=True)
class ProbeRecord:
    """One lambda's dilation-orbit magnitudes and its verdict."""

    lam: FieldElement
    lam_value: float
    values: tuple  # |phihat(lam alpha^J)|, J = 0..J_max
    tail_mean: float
    slope: float
    verdict: str


# ---------------------------------------------------------------------------
# near-zero scanning


def _golden_section_min(f, a, b, xtol=_REFINE_XTOL):
    """Golden-section minimum of f on [a, b] to within xtol."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def scan_near_zeros(f, L: float, grid_step: float, delta: float) -> NearZeroSet:
    """Grid scan of |f| on [0, L] with local refinement of candidate minima.

    Grid local minima below 10*delta are refined by golden-section search to
    resolution 1e-10; refined minima with |f| < delta are kept.  The 10*delta
    prefilter keeps refinement from chasing shallow ripples while never
    dropping a true sub-delta minimum whose grid neighborhood dips below
    10*delta.
    """
    if grid_step <= 0 or delta <= 0:
        raise ValueError("grid_step and delta must be positive")
    ys = np.arange(0.0, L + grid_step / 2, grid_step)
    mags = np.array([abs(f(float(y))) for y in ys])
    n = len(ys)
    found = []
    for i in range(n):
        if mags[i] >= 10 * delta:
            continue
        left_ok = i == 0 or mags[i] <= mags[i - 1]
        right_ok = i == n - 1 or mags[i] <= mags[i + 1]
        if not (left_ok and right_ok):
            continue
        a = ys[max(i - 1, 0)]
        b = ys[min(i + 1, n - 1)]
        y_star, v_star = _golden_section_min(lambda t: abs(f(t)), float(a), float(b))
        if v_star < delta:
            found.append((y_star, v_star))
    found.sort()
    merged = []
    for y, v in found:
        if merged and y - merged[-1][0] <= 10 * _REFINE_XTOL:
            if v < merged[-1][1]:
                merged[-1] = (y, v)
        else:
            merged.append((y, v))
    return NearZeroSet(threshold=delta, points=tuple(merged), interval=(0.0, float(L)))


def density_estimate(z: NearZeroSet):
    """(lower, upper) count-per-length over windows [0, t], t = L/10 .. L."""
    L = z.interval[1]
    if L < 10:
        raise ValueError("interval spans fewer than 10 unit subintervals")
    ys = z.positions()
    dens = []
    for k in range(1, 11):
        t = k * L / 10.0
        count = sum(1 for y in ys if y <= t)
        dens.append(count / t)
    return min(dens), max(dens)


# ---------------------------------------------------------------------------
# vanishing probes


def _reduces_to_laurent_ring(field: NumberField, lam: FieldElement) -> bool:
    """True iff lam lies in Z[alpha, alpha^{-1}]: denominator primes divide c_0."""
    den = lam.denominator_lcm
    c0 = abs(field.coeffs[0])
    if den == 1:
        return True
    if c0 == 1:
        return False
    g = math.gcd(den, c0)
    while g > 1:
        while den % g == 0:
            den //= g
        g = math.gcd(den, c0)
    return den == 1


def vanishing_probe(mask: RefinementMask, lambdas, J_max: int, delta: float = None, tol: float = None):
    """|phihat(lam alpha^J)| along dilation orbits with a tail verdict.

    Verdict rule over the last third of the J range: level at or below delta
    means the orbit has already hit the zero proxy (tends-to-zero); otherwise
    the least-squares slope of log|phihat| decides: |slope| < 1e-3 at a level
    above 10*delta is bounded-away, slope < -0.05 is tends-to-zero, anything
    else is inconclusive.
    """
    if J_max < 2:
        raise ValueError("J_max must be at least 2 so the tail fit has points")
    if delta is None:
        delta = 1e-6 if mask.infinite else 1e-8
    if tol is None:
        tol = 1e-10 if mask.infinite else 1e-12
    records = []
    for lam in lambdas:
        if not _reduces_to_laurent_ring(mask.field, lam):
            raise ValueError("lambda does not reduce to Z[alpha, alpha^{-1}]")
        lam_val = fe_embed_float(mask.field, lam).real
        if lam.is_zero():
            raise ValueError("lambda must be nonzero")
        orbit = phihat_orbit(mask, lam_val, range(0, J_max + 1), tol)
        vals = tuple(float(np.linalg.norm(np.atleast_1d(sv.value))) for _, sv in orbit)
        tail_start = (2 * (J_max + 1)) // 3
        tail = vals[tail_start:]
        level = float(np.mean(tail))
        if all(v <= delta for v in tail):
            records.append(ProbeRecord(lam, lam_val, vals, level, float("-inf"), "tends-to-zero"))
            continue
        xs = np.arange(tail_start, J_max + 1, dtype=float)
        logs = np.log(np.maximum(tail, 1e-300))
        slope = float(np.polyfit(xs, logs, 1)[0])
        if abs(slope) < 1e-3 and level > 10 * delta:
            verdict = "bounded-away"
        elif slope < -0.05:
            verdict = "tends-to-zero"
        else:
            verdict = "inconclusive"
        records.append(ProbeRecord(lam, lam_val, vals, level, slope, verdict))
    return records


# ---------------------------------------------------------------------------
# norm forms


def _expand_norm_product(field: NumberField, prec: int):
    """Monomial dict of prod_k (row_k(V^{-1}) . n) at working precision."""
    d = field.degree
    row = first_lagrange_row(field)
    with mp.workprec(prec):
        emb = [[fe_embed(field, row[i], k, prec) for i in range(d)] for k in range(d)]
        poly = {(0,) * d: mp.mpc(1)}
        for k in range(d):
            nxt = {}
            for exps, c in poly.items():
                for i in range(d):
                    e2 = list(exps)
                    e2[i] += 1
                    e2 = tuple(e2)
                    nxt[e2] = nxt.get(e2, mp.mpc(0)) + c * emb[k][i]
            poly = nxt
    return poly


def norm_form(field: NumberField) -> NormForm:
    """Integer norm form with denominator dividing |disc(P)|, exactly verified.

    Expands N(mu_1) for mu_1 = sum n_i e_i over the Lagrange dual basis,
    rounds each coefficient times |disc| to an integer (residual above 1e-6
    raises PrecisionError), reduces by the common gcd, and checks the result
    against exact field norms on 10^3 random integer vectors.
    """
    d = field.degree
    prec = max(precision_bits(), 128)
    poly = _expand_norm_product(field, prec)
    disc = abs(discriminant(field.coeffs))
    ints = {}
    worst = 0.0
    with mp.workprec(prec):
        for exps, c in poly.items():
            t = c * disc
            nearest = int(mp.nint(mp.re(t)))
            worst = max(worst, float(abs(mp.re(t) - nearest)), float(abs(mp.im(t))))
            if nearest != 0:
                ints[exps] = nearest
    if worst > 1e-6:
        raise PrecisionError("norm-form coefficient residual %.3e; raise PISOT_PRECISION_BITS" % worst)
    g = disc
    for c in ints.values():
        g = math.gcd(g, abs(c))
    nf = NormForm(
        numerator_form=tuple(sorted((e, c // g) for e, c in ints.items())),
        denominator=disc // g,
    )
    row = first_lagrange_row(field)
    rng = np.random.default_rng(17)
    for n in rng.integers(-50, 51, size=(10**3, d)):
        mu = fe_rational(field, 0)
        for ni, ei in zip(n, row):
            if ni:
                mu = fe_add(mu, fe_scale(ei, int(ni)))
        if nf.evaluate([int(v) for v in n]) != norm(mu, field):
            raise PrecisionError("norm form disagrees with the exact norm at %s" % (tuple(n),))
    return nf


def _binary_restriction(nf: NormForm, d: int):
    """Coefficients of the form with all variables beyond the first two set to 0."""
    out = {}
    for exps, c in nf.numerator_form:
        if any(e for e in exps[2:]):
            continue
        out[(exps[0], exps[1] if d > 1 else 0)] = c
    return out


def count_norm_values(field: NumberField, L: int, box: int, checkpoints: bool = False):
    """Distinct |numerator| values in [1, L] over the restricted integer box.

    Enumerates n over [-box, box]^2 (two active variables; the remaining
    coordinates are pinned to 0 for degree >= 3, the binary-form reduction),
    counts distinct |form| values up to L, and fits log count against log L
    over dyadic checkpoints.  Returns (count, fitted_exponent), plus the
    (t, count) checkpoint list when checkpoints is true.
    """
    if L < 1 or box < 1:
        raise ValueError("L and box must be positive")
    if (2 * box + 1) ** 2 > 10**8:
        raise SizeError("enumeration of %d form evaluations exceeds 1e8" % (2 * box + 1) ** 2)
    nf = norm_form(field)
    coeffs = _binary_restriction(nf, field.degree)
    deg = nf.degree
    bound = sum(abs(c) for c in coeffs.values()) * (box + 1) ** deg
    if bound >= 2**62:
        raise SizeError("form values overflow 64-bit integers at box %d" % box)
    ns = np.arange(-box, box + 1, dtype=np.int64)
    n1, n2 = np.meshgrid(ns, ns, indexing="ij")
    vals = np.zeros_like(n1)
    for (e1, e2), c in sorted(coeffs.items()):
        vals += c * n1**e1 * n2**e2
    uniq = np.unique(np.abs(vals))
    uniq = uniq[uniq >= 1]
    count = int(np.searchsorted(uniq, L, side="right"))
    marks = []
    t = int(L)
    while t >= 10:
        marks.append(t)
        t //= 2
    marks.reverse()
    pts = [(c, int(np.searchsorted(uniq, c, side="right"))) for c in marks]
    pts = [(c, k) for c, k in pts if k > 0]
    if len(pts) >= 2:
        xs = np.log([c for c, _ in pts])
        ks = np.log([k for _, k in pts])
        exponent = float(np.polyfit(xs, ks, 1)[0])
    else:
        exponent = float("nan")
    if checkpoints:
        return count, exponent, pts
    return count, exponent
