"""Refinement masks and their Fourier machinery.

A mask is the data (alpha, a, tau) of the two-scale relation
phi(x) = sum_k a(k) phi(alpha x - tau(k)); its symbol is the series
ahat(y) = |alpha|^{-1} sum_k a(k) e^{-2 pi i tau(k) y} and the transform of
phi is the one-sided infinite product phihat(y) = (prod_{j<=-1}
ahat(y alpha^j)) phihat(0), factors ordered with decreasing j to the right.

Complex exponentials always reduce their argument mod 1 first; without that
the phase of e^{-2 pi i tau y} is garbage long before tau*y overflows a
double mantissa (the dilation orbits used here reach y ~ alpha^40).
"""

import ast
import cmath
import dataclasses
import functools
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .algebraic_core import (
    FieldElement,
    NumberField,
    LaurentTranslate,
    fe_alpha,
    fe_embed,
    fe_inv,
    fe_mul,
    fe_pow,
    fe_rational,
    integer_dilation_field,
    laurent,
    laurent_embed,
    laurent_int,
    make_field,
    parse_poly,
    precision_bits,
    trace,
    trace_power_sequence,
)
from .errors import (
    EigenError,
    NonconvergenceError,
    NormalizationError,
    NotPisotError,
    PrecisionError,
    UnknownExampleError,
)

_PRODUCT_FACTOR_BUDGET = 10**6

# above this magnitude a float64 argument has too few fractional bits left
# for phase reduction; evaluation switches to extended precision
_MP_ARG_CUTOFF = 2.0**20


def cis_unit(x) -> complex:
    """e^{-2 pi i x} with the argument reduced mod 1 first.

    Accepts mpmath reals so callers can keep full fractional accuracy when
    |x| is too large for float64 (the reduction happens before conversion).
    """
    if isinstance(x, mp.mpf):
        x = float(x - mp.floor(x))
    return cmath.exp(-2j * math.pi * (x - math.floor(x)))


def cis_unit_grid(x):
    """Vector version of cis_unit for float arrays."""
    return np.exp(-2j * np.pi * (x - np.floor(x)))


@dataclass(frozen=True, eq=False)
class RefinementMask:
    """Dilation field + coefficients + translates (+ decay envelope if infinite).

    Finite masks store coeffs/translates directly.  Infinite masks store a
    generator k -> (a_k, LaurentTranslate) with an envelope |a(k)| <= C rho^k
    that converts tolerance into a concrete truncation index.
    """

    field: NumberField
    coeffs: tuple          # scalars, or rank x rank numpy arrays; () if generated
    translates: tuple      # LaurentTranslate per coefficient; () if generated
    rank: int
    phihat0: tuple         # complex vector of length rank
    generator: object = None
    envelope: tuple = None  # (C, rho)
    name: str = ""

    @property
    def infinite(self) -> bool:
        return self.generator is not None

    @property
    def alpha(self) -> float:
        return self.field.alpha


@dataclass(frozen=True, eq=False)
class SymbolValue:
    """A symbol/product evaluation plus an upper bound on the dropped tail."""

    value: object            # complex scalar, vector, or rank x rank matrix
    truncation_error: float

    @property
    def magnitude(self) -> float:
        if np.isscalar(self.value):
            return abs(self.value)
        return float(np.linalg.norm(self.value))


# ---------------------------------------------------------------------------
# construction


def make_mask(field: NumberField, coeffs, translates, rank: int = 1, phihat0=None) -> RefinementMask:
    """Validate a finite mask; for rank > 1 derive phihat0 from ahat(0) if omitted.

    Scalar masks must satisfy sum a(k) = |alpha| (to 1e-12); matrix masks need
    eigenvalue 1 of ahat(0) simple, and the eigenvector is normalized so its
    largest-modulus entry equals 1.
    """
    if len(coeffs) != len(translates):
        raise ValueError("coeffs and translates lengths differ")
    translates = tuple(
        t if isinstance(t, LaurentTranslate) else laurent_int(t) for t in translates
    )
    absalpha = abs(field.alpha)
    if rank == 1:
        coeffs = tuple(complex(c) for c in coeffs)
        total = sum(coeffs)
        if abs(total - absalpha) > 1e-12:
            raise NormalizationError(
                "scalar coefficients sum to %r, need |alpha| = %r" % (total, absalpha)
            )
        ph0 = (1.0 + 0j,) if phihat0 is None else tuple(complex(v) for v in phihat0)
    else:
        coeffs = tuple(np.array(c, dtype=complex) for c in coeffs)
        for c in coeffs:
            if c.shape != (rank, rank):
                raise ValueError("matrix coefficient shape %s != rank %d" % (c.shape, rank))
        a0 = sum(coeffs) / absalpha
        if phihat0 is None:
            w, vecs = np.linalg.eig(a0)
            hits = [i for i in range(rank) if abs(w[i] - 1) < 1e-9]
            if len(hits) != 1:
                raise EigenError("ahat(0) eigenvalue 1 absent or not simple: %s" % w)
            v = vecs[:, hits[0]]
            v = v / v[int(np.argmax(np.abs(v)))]
            ph0 = tuple(complex(x) for x in v)
        else:
            ph0 = tuple(complex(v) for v in phihat0)
            res = a0 @ np.array(ph0) - np.array(ph0)
            if np.max(np.abs(res)) > 1e-9 or not any(abs(v) > 0 for v in ph0):
                raise EigenError("phihat0 is not a fixed vector of ahat(0)")
    return RefinementMask(
        field=field, coeffs=coeffs, translates=translates, rank=int(rank), phihat0=ph0
    )


def _dyadic_generator(k: int):
    return 2.0 ** (1 - k), laurent({1 - k: 1})


def builtin_mask(name: str, field: NumberField = None) -> RefinementMask:
    """The worked examples: boxcar, dyadic, bernoulli (PV field), golden_vector."""
    if name == "boxcar":
        f = integer_dilation_field(2)
        m = make_mask(f, (1.0, 1.0), (laurent_int(0), laurent_int(1)))
        return dataclasses.replace(m, name="boxcar")
    if name == "dyadic":
        f = integer_dilation_field(2)
        # a(k) = tau(k) = 2^{1-k}: envelope |a(k)| = 2 * (1/2)^k
        return RefinementMask(
            field=f,
            coeffs=(),
            translates=(),
            rank=1,
            phihat0=(1.0 + 0j,),
            generator=_dyadic_generator,
            envelope=(2.0, 0.5),
            name="dyadic",
        )
    if name == "bernoulli":
        if field is None:
            raise ValueError("bernoulli mask needs a dilation field")
        if field.pv_status != "PV":
            raise NotPisotError("bernoulli mask needs a certified PV dilation")
        h = abs(field.alpha) / 2.0
        m = make_mask(field, (h, h), (laurent_int(0), laurent_int(1)))
        return dataclasses.replace(m, name="bernoulli")
    if name == "golden_vector":
        f = make_field((-1, -1))
        a1 = ((0, 1), (0, 1))
        a2 = ((0, 0), (1, 0))
        m = make_mask(f, (a1, a2), (laurent_int(0), laurent_int(1)), rank=2)
        return dataclasses.replace(m, name="golden_vector")
    raise UnknownExampleError("no builtin mask named %r" % name)


# ---------------------------------------------------------------------------
# term access (shared by eval_symbol, eval_A, scans)


def truncation_index(mask: RefinementMask, tol: float) -> int:
    """Smallest K with envelope tail C rho^{K+1}/(1-rho) < tol/2."""
    c, rho = mask.envelope
    k = 1
    while c * rho ** (k + 1) / (1 - rho) >= tol / 2:
        k += 1
        if k > 10**7:
            raise NonconvergenceError("envelope never reaches tol %g" % tol)
    return k


def mask_terms(mask: RefinementMask, tol: float = 1e-14):
    """(a_k, LaurentTranslate) terms, truncated for infinite masks; plus tail bound."""
    if not mask.infinite:
        return list(zip(mask.coeffs, mask.translates)), 0.0
    K = truncation_index(mask, tol)
    c, rho = mask.envelope
    tail = c * rho ** (K + 1) / (1 - rho)
    return [mask.generator(k) for k in range(1, K + 1)], tail


@functools.lru_cache(maxsize=256)
def _embeds_cached(mask: RefinementMask, K):
    # masks hash by identity (frozen, eq=False), so this memoizes the exact
    # translate embeddings per mask and truncation depth
    if K is None:
        terms = list(zip(mask.coeffs, mask.translates))
    else:
        terms = [mask.generator(k) for k in range(1, K + 1)]
    return tuple((a, laurent_embed(mask.field, t)[1]) for a, t in terms)


@functools.lru_cache(maxsize=256)
def _embeds_cached_mp(mask: RefinementMask, K, prec: int):
    # extended-precision translate embeddings; a float64 embedding times a
    # huge argument would lose the entire fractional part of the phase
    if K is None:
        terms = list(zip(mask.coeffs, mask.translates))
    else:
        terms = [mask.generator(k) for k in range(1, K + 1)]
    out = []
    with mp.workprec(prec):
        for a, t in terms:
            elem, _ = laurent_embed(mask.field, t)
            out.append((a, mp.re(fe_embed(mask.field, elem, 0, prec))))
    return tuple(out)


def _term_embeds(mask: RefinementMask, tol: float):
    if not mask.infinite:
        return _embeds_cached(mask, None), 0.0
    K = truncation_index(mask, tol)
    c, rho = mask.envelope
    tail = c * rho ** (K + 1) / (1 - rho)
    return _embeds_cached(mask, K), tail


def lipschitz_bound(mask: RefinementMask, tol: float = 1e-14) -> float:
    """Bound on ||ahat(h) - ahat(0)|| / |h|: 2 pi |alpha|^{-1} sum |a(k)| |tau(k)|.

    For infinite masks the dropped tail contributes at most tail_a * max|tau|
    of the last computed terms (translate embeddings are nonincreasing for the
    generated masks shipped here).
    """
    embeds, tail = _term_embeds(mask, tol)
    if mask.rank == 1:
        s = sum(abs(a) * abs(te) for a, te in embeds)
    else:
        s = sum(np.linalg.norm(a, 2) * abs(te) for a, te in embeds)
    if tail:
        s += tail * max(abs(te) for _, te in embeds)
    return 2 * math.pi * s / abs(mask.alpha)


# ---------------------------------------------------------------------------
# evaluation


def eval_symbol(mask: RefinementMask, y, tol: float = 1e-14) -> SymbolValue:
    """ahat(y) = |alpha|^{-1} sum a(k) e^{-2 pi i tau(k) y}, tail below tol.

    Arguments beyond float64's fractional resolution (|y| > 2^20, or any
    mpmath real) are phase-reduced at extended precision.
    """
    if isinstance(y, mp.mpf) or abs(y) > _MP_ARG_CUTOFF:
        phases = _phases_mp(mask, y, tol)
    else:
        embeds, tail = _term_embeds(mask, tol)
        phases = [(a, cis_unit(te * y)) for a, te in embeds], tail
    terms, tail = phases
    inv = 1.0 / abs(mask.alpha)
    if mask.rank == 1:
        acc = 0j
        for a, ph in terms:
            acc += a * ph
        return SymbolValue(inv * acc, tail)
    acc = np.zeros((mask.rank, mask.rank), dtype=complex)
    for a, ph in terms:
        acc = acc + np.asarray(a, dtype=complex) * ph
    return SymbolValue(inv * acc, tail)


def _phases_mp(mask: RefinementMask, y, tol: float):
    """(coefficient, e^{-2 pi i tau y}) pairs with mod-1 reduction at high precision."""
    prec = precision_bits()
    yf = float(y)
    if not math.isfinite(yf) or (abs(yf) > 1 and math.log2(abs(yf)) > prec - 32):
        raise PrecisionError(
            "argument magnitude %.3g leaves under 32 fractional bits at %d-bit "
            "precision; raise PISOT_PRECISION_BITS" % (abs(yf), prec)
        )
    if mask.infinite:
        K = truncation_index(mask, tol)
        c, rho = mask.envelope
        tail = c * rho ** (K + 1) / (1 - rho)
    else:
        K, tail = None, 0.0
    embeds = _embeds_cached_mp(mask, K, prec)
    with mp.workprec(prec):
        ym = mp.mpf(y)
        pairs = [(a, cis_unit(te * ym)) for a, te in embeds]
    return pairs, tail


def eval_symbol_grid(mask: RefinementMask, ys, tol: float = 1e-14):
    """Vectorized ahat over a float array (scalar masks).

    Same terms and term order as eval_symbol; the complex sum reduces over
    the term axis in a fixed order, so results match the scalar path.
    """
    if mask.rank != 1:
        raise ValueError("grid evaluation is scalar-only")
    embeds, tail = _term_embeds(mask, tol)
    ys = np.asarray(ys, dtype=float)
    acc = np.zeros(ys.shape, dtype=complex)
    for a, te in embeds:
        acc += a * cis_unit_grid(te * ys)
    return acc / abs(mask.alpha), tail


def _product_depth(mask: RefinementMask, y: float, tol: float) -> int:
    """First J0 with lip * |y| * sum_{j <= -J0} |alpha|^j below tol."""
    lip = lipschitz_bound(mask, min(tol, 1e-14))
    absalpha = abs(mask.alpha)
    geo = 1.0 / (absalpha - 1.0)
    j0 = 1
    while lip * abs(y) * absalpha ** (-j0) * geo * absalpha >= tol:
        j0 += 1
        if j0 > _PRODUCT_FACTOR_BUDGET:
            raise NonconvergenceError("product tail bound not reached within budget")
    return j0


def eval_phihat(mask: RefinementMask, y, tol: float = 1e-12) -> SymbolValue:
    """phihat(y) = (prod_{j<=-1} ahat(y alpha^j)) phihat(0), truncated to tol.

    Matrix factors multiply with the most negative j applied first to
    phihat(0); scalars commute but use the same order.  Large arguments ride
    the extended-precision path so every factor keeps an accurate phase.
    """
    yf = float(y)
    j0 = _product_depth(mask, yf, tol)
    sym_tol = min(tol / max(j0, 1), 1e-14)
    err = 0.0
    use_mp = isinstance(y, mp.mpf) or abs(yf) > _MP_ARG_CUTOFF
    if use_mp:
        with mp.workprec(precision_bits()):
            al = mp.re(mask.field.roots_mp[0])
            args = []
            x = mp.mpf(y) / al**j0
            for _ in range(j0):
                args.append(x)
                x = x * al
    else:
        args = [yf * mask.alpha**j for j in range(-j0, 0)]
    if mask.rank == 1:
        v = complex(mask.phihat0[0])
        for x in args:
            s = eval_symbol(mask, x, sym_tol)
            v *= s.value
            err += s.truncation_error
        return SymbolValue(v, err + tol)
    v = np.array(mask.phihat0, dtype=complex)
    for x in args:
        s = eval_symbol(mask, x, sym_tol)
        v = s.value @ v
        err += s.truncation_error
    return SymbolValue(v, err + tol)


def phihat_orbit(mask: RefinementMask, lam: float, J_range, tol: float = 1e-12):
    """phihat(lam alpha^J) along the dilation orbit, computed incrementally.

    The two-scale identity phihat(alpha y) = ahat(y) phihat(y) extends the
    base evaluation one factor at a time, so consecutive entries satisfy it
    by construction.
    """
    js = sorted(int(j) for j in J_range)
    if not js:
        return []
    prec = precision_bits()
    growth = abs(lam) * abs(mask.alpha) ** max(js[-1], 0)
    if growth > 0 and math.log2(growth) > prec - 32:
        raise PrecisionError(
            "lam alpha^J overflows the %d-bit budget at J=%d; raise "
            "PISOT_PRECISION_BITS or lower J_max" % (prec, js[-1])
        )
    with mp.workprec(prec):
        al = mp.re(mask.field.roots_mp[0])
        arg = mp.mpf(lam) * al ** js[0]

    def narrowed(x):
        return float(x) if abs(x) <= _MP_ARG_CUTOFF else x

    base = eval_phihat(mask, narrowed(arg), tol)
    out = []
    cur, err = base.value, base.truncation_error
    j_at = js[0]
    for j in js:
        while j_at < j:
            s = eval_symbol(mask, narrowed(arg), min(tol, 1e-14))
            cur = s.value * cur if mask.rank == 1 else s.value @ cur
            err += s.truncation_error
            with mp.workprec(prec):
                arg = arg * al
            j_at += 1
        out.append((j, SymbolValue(cur, err)))
    return out


def bernoulli_phihat(field: NumberField, J: int, j_min: int, return_bound: bool = False):
    """phihat(alpha^J) for the Bernoulli mask: e^{-pi i alpha^J/(alpha-1)} prod_{j_min<=j<J} cos(pi alpha^j).

    Uses the exact-trace residue route for both the phase and the large-j
    cosines, so alpha^j never meets floating arithmetic at full size:
    cos(pi alpha^j) = (-1)^{s(j)} cos(pi r_j) with s(j) = T(alpha^j) and
    r_j = sum_{k>=2} alpha_k^j.  The dropped factors below j_min satisfy
    |1 - prod| <= (pi^2/2) alpha^{2 j_min} / (alpha^2 - 1), reported as bound.
    """
    if field.pv_status != "PV":
        raise NotPisotError("bernoulli product needs a certified PV dilation")
    prec = max(precision_bits(), 64)
    d = field.degree
    with mp.workprec(prec):
        alpha = field.roots_mp[0].real
        # phase: mu = alpha^J / (alpha - 1); embed via trace minus conjugates,
        # with the integer part of T(mu) reduced mod 2 before it meets pi
        al = fe_alpha(field)
        mu = fe_mul(field, fe_pow(field, al, J), fe_inv(field, _alpha_minus_one(field)))
        tmu = trace(mu, field)
        conj_sum = sum(
            _fe_embed_at(field, mu, k, prec) for k in range(1, d)
        ) if d > 1 else mp.mpc(0)
        int_part = tmu.numerator // tmu.denominator
        frac_part = tmu - int_part
        x_red = (int_part % 2) + mp.mpf(frac_part.numerator) / frac_part.denominator - mp.re(conj_sum)
        phase = mp.e ** (-1j * mp.pi * x_red)
        # cosine factors
        smax = max(J - 1, d - 1)
        traces = trace_power_sequence(field, fe_rational(field, 1), max(smax, d - 1)) if J >= 1 else []
        prod = mp.mpf(1)
        sign = 1
        for j in range(j_min, J):
            if j < 0 or d == 1:
                prod *= mp.cos(mp.pi * alpha**j)
            else:
                s_j = traces[j]
                r_j = sum(field.roots_mp[k] ** j for k in range(1, d))
                prod *= mp.cos(mp.pi * mp.re(r_j))
                if int(s_j) % 2:
                    sign = -sign
        value = complex(sign * prod * phase)
        bound = float(mp.pi**2 / 2 * alpha ** (2 * j_min) / (alpha**2 - 1))
    if return_bound:
        return value, bound
    return value


def _alpha_minus_one(field: NumberField) -> FieldElement:
    coords = list(fe_alpha(field).coords)
    coords[0] -= 1
    return FieldElement(tuple(coords))


def _fe_embed_at(field: NumberField, elem: FieldElement, k: int, prec: int):
    z = field.roots_mp[k]
    acc = mp.mpc(0)
    for q in reversed(elem.coords):
        acc = acc * z + mp.mpf(q.numerator) / q.denominator
    return acc


# ---------------------------------------------------------------------------
# mask description files


def mask_from_file(path: str) -> RefinementMask:
    """Parse a structured-text mask description.

    Lines of key = value with keys dilation-poly (c0,c1,... of the monic
    minimal polynomial; a single coefficient c0 means the degree-1 integer
    dilation -c0), rank, coeffs (';'-separated scalars or matrix literals, or
    generator:dyadic), translates (';'-separated: integer n, or j:c comma
    maps), phihat0 (optional ','-separated complex entries).
    """
    fields = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("bad mask file line: %r" % raw.rstrip())
            key, val = line.split("=", 1)
            fields[key.strip()] = val.strip()
    if "dilation-poly" not in fields:
        raise ValueError("mask file needs dilation-poly")
    coeffs_poly = parse_poly(fields["dilation-poly"])
    if len(coeffs_poly) == 1:
        field = integer_dilation_field(-coeffs_poly[0])
    else:
        field = make_field(coeffs_poly)
    rank = int(fields.get("rank", "1"))
    raw_coeffs = fields.get("coeffs", "")
    if raw_coeffs.startswith("generator:"):
        gen_name = raw_coeffs.split(":", 1)[1].strip()
        if gen_name != "dyadic":
            raise ValueError("unknown generator %r" % gen_name)
        base = builtin_mask("dyadic")
        if field.degree != 1 or field.alpha != 2.0:
            raise ValueError("dyadic generator requires dilation 2")
        return base
    coeffs = []
    for part in raw_coeffs.split(";"):
        part = part.strip()
        if rank == 1:
            coeffs.append(complex(part))
        else:
            coeffs.append(ast.literal_eval(part))
    translates = [_parse_translate(p) for p in fields.get("translates", "").split(";")]
    ph0 = None
    if "phihat0" in fields:
        ph0 = tuple(complex(v.strip()) for v in fields["phihat0"].split(","))
    return make_mask(field, tuple(coeffs), tuple(translates), rank=rank, phihat0=ph0)


def _parse_translate(text: str) -> LaurentTranslate:
    text = text.strip()
    if ":" not in text:
        return laurent_int(int(text))
    support = {}
    for pair in text.split(","):
        j, c = pair.split(":")
        support[int(j)] = int(c)
    return laurent(support)
