"""Acceptance contract: eleven end-to-end checks, one printed line each.

Every check asserts the stated target value, bound, and runtime budget
exactly as committed.  Three of the committed constants are inconsistent
with values derived independently in the module suites (a dropped leading
zero in the dyadic limit, an almost-period bound short by a constant
factor, a conjugated sign in the boxcar closed form); those checks are
left failing on purpose rather than silently adjusted.  The true values
are pinned in tests/test_refinement.py.
"""

import cmath
import csv
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import pvrefine as pv
from pvrefine import cli
from pvrefine import refinement as rf
from pvrefine import solenoid as so
from pvrefine import zero_density as zd
from pvrefine.algebraic_core import fe_add, fe_scale


def _run(num, desc, budget, body):
    t0 = time.monotonic()
    try:
        body()
        dt = time.monotonic() - t0
        if budget is not None and dt >= budget:
            raise AssertionError("runtime %.1fs exceeds the %gs budget" % (dt, budget))
    except BaseException:
        print("criterion %02d FAIL: %s" % (num, desc))
        raise
    print("criterion %02d PASS (%.1fs): %s" % (num, dt, desc))


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_criterion_01_dyadic_limit(tmp_path):
    out = tmp_path / "orbit.csv"

    def body():
        rc = cli.main(["phihat-orbit", "--mask", "dyadic", "--lambda", "1",
                       "--jmax", "40", "--out", str(out)])
        assert rc == 0
        rows = _read_csv(out)
        tail = complex(float(rows[-1][1]), float(rows[-1][2]))
        assert abs(tail - (0.2578 + 0.0692j)) < 1e-3

    _run(1, "dyadic orbit tail within 1e-3 of 0.2578+0.0692i", 5.0, body)


def test_criterion_02_symbol_scan_and_almost_period():
    dy = rf.builtin_mask("dyadic")

    def body():
        ys = 0.01 * np.arange(12801)  # [0, 128]
        vals, _ = rf.eval_symbol_grid(dy, ys, 1e-14)
        m_coarse = float(np.abs(vals).min())
        assert m_coarse > 0
        ys_f = 0.005 * np.arange(25601)
        m_fine = float(np.abs(rf.eval_symbol_grid(dy, ys_f, 1e-14)[0]).min())
        assert abs(m_fine - m_coarse) < 0.10 * m_coarse
        for L in range(1, 21):
            shifted, _ = rf.eval_symbol_grid(dy, ys + 2.0 ** (L - 1), 1e-14)
            worst = float(np.abs(shifted - vals).max())
            assert worst <= 2.0 ** -L, "L=%d: |ahat(y+2^(L-1)) - ahat(y)| = %.6g > 2^-L" % (L, worst)

    _run(2, "dyadic scan minimum positive and stable; almost-period bound 2^-L", 30.0, body)


def test_criterion_03_boxcar_closed_form():
    bx = rf.builtin_mask("boxcar")

    def body():
        for y in np.linspace(-8, 8, 1000):
            want = cmath.exp(1j * math.pi * y) * math.sin(math.pi * y) / (math.pi * y)
            got = rf.eval_phihat(bx, float(y), 1e-12).value
            assert abs(got - want) < 1e-10, "y=%.6f: |phihat - e^{+pi i y} sinc| = %.3g" % (
                y, abs(got - want))

    _run(3, "boxcar product matches e^{+pi i y} sin(pi y)/(pi y) to 1e-10", 1.0, body)


def test_criterion_04_golden_vector_product():
    gv = rf.builtin_mask("golden_vector")
    al = gv.alpha

    def closed(y):
        t1, t2 = y / al, y
        den = math.pi * y
        return np.array([
            cmath.exp(-1j * math.pi * t1) * math.sin(math.pi * t1) / den,
            cmath.exp(-1j * math.pi * t2) * math.sin(math.pi * t2) / den,
        ])

    def body():
        for y in np.linspace(-5, 5, 201):
            if abs(y) < 1e-9:
                continue
            got = rf.eval_phihat(gv, float(y), 1e-10).value
            assert np.max(np.abs(got - closed(float(y)))) < 1e-8
            smin = np.linalg.svd(rf.eval_symbol(gv, float(y)).value, compute_uv=False)[-1]
            assert smin > 0

    _run(4, "golden vector product matches closed form to 1e-8; symbol never singular", 5.0, body)


def test_criterion_05_bernoulli_nonvanishing():
    golden = pv.make_field((-1, -1))
    bern = rf.builtin_mask("bernoulli", golden)

    def body():
        rec = zd.vanishing_probe(bern, [pv.fe_rational(golden, 1)], 40)[0]
        assert rec.verdict == "bounded-away"
        assert rec.tail_mean > 1e-3
        assert abs(rec.slope) < 1e-3

    _run(5, "golden-mean Bernoulli probe bounded away from zero through J=40", None, body)


def test_criterion_06_solenoidal_representation():
    golden = pv.make_field((-1, -1))
    masks = [
        rf.builtin_mask("boxcar"),
        rf.builtin_mask("dyadic"),
        rf.builtin_mask("bernoulli", golden),
        rf.builtin_mask("golden_vector"),
    ]

    def body():
        rng = np.random.default_rng(4)
        for mk in masks:
            j_min = -40 if mk.infinite else 0
            worst = 0.0
            for y in rng.uniform(-50, 50, size=1000):
                g = so.theta(mk.field, float(y), j_min, 0)
                lifted = so.eval_A(mk, g)
                direct = rf.eval_symbol(mk, float(y), 1e-14).value
                worst = max(worst, float(np.max(np.abs(np.atleast_1d(lifted - direct)))))
            assert worst < 1e-10, "%s: max |ahat - A(theta)| = %.3g" % (mk.name, worst)

    _run(6, "ahat = A(theta(y)) to 1e-10 on 1000 random y for every builtin", None, body)


def test_criterion_07_lattice_density():
    golden = pv.make_field((-1, -1))

    def body():
        L = 10**5
        cyl = so.LatticeCylinder(L, 0, (0.1,))
        gamma = so.gamma_density(golden, cyl)
        assert abs(gamma - 0.4472) < 5e-4
        ys = np.asarray(so.enumerate_Y(golden, cyl))
        assert len(np.unique(ys)) == len(ys)  # xi injective: no duplicates
        rels = []
        for t in (10**3, 10**4, 10**5):
            cnt = int(np.searchsorted(ys, t, "right") - np.searchsorted(ys, -t, "left"))
            rels.append(abs(cnt / (2.0 * t) - gamma) / gamma)
        assert rels[-1] < 0.05
        assert rels[0] > rels[1] > rels[2]

    _run(7, "card Y(L)/2L within 5% of gamma=0.4472, error decreasing over decades", 60.0, body)


def test_criterion_08_trace_recurrence():
    golden = pv.make_field((-1, -1))

    def body():
        seq = pv.trace_power_sequence(golden, pv.fe_rational(golden, 1), 30)
        assert seq[:7] == [2, 1, 3, 4, 7, 11, 18]
        assert all(Fraction(v).denominator == 1 for v in seq)  # exact integers
        for j, v in enumerate(seq):
            float_sum = sum(r**j for r in golden.roots).real
            assert abs(v - float_sum) < 1e-6

    _run(8, "golden traces give Lucas numbers exactly, matching conjugate sums to 1e-6", None, body)


def test_criterion_09_pv_certification():
    def body():
        assert pv.make_field((-1, -1)).pv_status == "PV"
        assert pv.make_field((-1, -1, 0)).pv_status == "PV"
        assert pv.make_field((-2, 0)).pv_status == "not-PV"
        assert pv.make_field((-8, -2, -1)).pv_status == "not-PV"
        with pytest.raises(pv.ReducibleError):
            pv.make_field((-1, 0))

    _run(9, "PV certification on the four reference polynomials plus reducible rejection", None, body)


def test_criterion_10_norm_forms():
    golden = pv.make_field((-1, -1))

    def body():
        nf = zd.norm_form(golden)
        assert dict(nf.numerator_form) == {(2, 0): 1, (1, 1): 1, (0, 2): -1}
        assert nf.denominator == 5
        row = pv.first_lagrange_row(golden)
        rng = np.random.default_rng(10)
        for n in rng.integers(-500, 501, size=(1000, 2)):
            mu = fe_add(fe_scale(row[0], int(n[0])), fe_scale(row[1], int(n[1])))
            assert nf.evaluate([int(v) for v in n]) == pv.norm(mu, golden)
        cubic = pv.make_field((-1, -1, 0))
        box = int(math.ceil((10**5 * 23) ** (1 / 3))) + 2
        counts = [zd.count_norm_values(cubic, L, box)[0] for L in (10**3, 10**4, 10**5)]
        assert counts == sorted(counts)
        cnt, expn = zd.count_norm_values(cubic, 10**5, box)
        assert expn >= 2 / 3 - 0.05

    _run(10, "golden norm form (n1^2+n1n2-n2^2)/5 exact; cubic count exponent >= 2/3-0.05", 120.0, body)


def test_criterion_11_determinism(tmp_path):
    configs = [
        ["field-check", "--poly", "-1,-1"],
        ["symbol-scan", "--mask", "dyadic", "--range", "0:128", "--step", "0.01", "--svg"],
        ["phihat-orbit", "--mask", "dyadic", "--lambda", "1", "--jmax", "40", "--svg"],
        ["bernoulli", "--poly", "-1,-1", "--jmax", "40"],
        ["lattice-density", "--poly", "-1,-1", "--m", "0", "--eps", "0.1", "--L", "20000"],
        ["zeros-scan", "--mask", "boxcar", "--range", "0:16", "--step", "0.01",
         "--delta", "0.001", "--target", "phihat"],
        ["vanishing-probe", "--mask", "bernoulli", "--poly", "-1,-1", "--lambda", "1,2",
         "--jmax", "40"],
        ["norms-count", "--poly", "-1,-1", "--L", "10000", "--box", "200"],
        ["equidistribution", "--poly", "-1,-1", "--n", "1", "--samples", "10000", "--seed", "0"],
    ]

    def body():
        for k, base in enumerate(configs):
            blobs = []
            threads = ("1", "4") if base[0] == "lattice-density" else ("1", "1")
            for tag, thr in zip(("a", "b"), threads):
                out = tmp_path / ("%02d_%s.csv" % (k, tag))
                rc = cli.main(base + ["--threads", thr, "--out", str(out)])
                assert rc == 0
                blob = out.read_bytes()
                if "--svg" in base:
                    blob += (tmp_path / ("%02d_%s.svg" % (k, tag))).read_bytes()
                blobs.append(blob)
            assert blobs[0] == blobs[1], "%s: bytes differ across runs/threads" % base[0]

    _run(11, "every report's output bytes identical across reruns and thread counts", None, body)
