"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
"acceptance criteria" summary section) or directly as a script.
"""

import io
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from nonperiod.cauchy import FastSeq, beta, beta_radius, is_fast_step
from nonperiod.cli import run
from nonperiod.diagonal import Diagonal
from nonperiod.elem_expr import UndefinedValue, ZeroPow, pair, unpair
from nonperiod.enumeration import Decoder, f, g
from nonperiod.semialg import Verdict, approximate_volume, classify_grid, riemann_volume

from conftest import EPSILON_TABLE, HALF_ALPHA_30, LN2_20, PI_20, record_acceptance


@contextmanager
def criterion(label, limit=None):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - t0
        if limit is not None:
            assert elapsed < limit, f"{label}: {elapsed:.1f} s exceeds {limit} s"
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        record_acceptance(f"[{'PASS' if ok else 'FAIL'}] {label} ({elapsed:.2f} s)")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    assert code == 0, err.getvalue()
    return out.getvalue()


def test_ac01_epsilon_table():
    with criterion("AC1 epsilon table, 80 entries", limit=60):
        got = [int(t) for t in cli("epsilons", "--count", 80).split()]
        assert got == EPSILON_TABLE


def test_ac02_alpha_digits():
    with criterion("AC2 thirty digits of alpha/2", limit=120):
        assert cli("alpha-digits", "--digits", 30) == "0." + HALF_ALPHA_30 + "\n"


def test_ac03_enumeration_fixtures():
    with criterion("AC3 closed forms and beta values"):
        forms = {
            0: lambda x: x,
            1: lambda x: x + 1,
            2: lambda x: x,
            3: lambda x: 0,
            4: lambda x: x + 2,
            169: lambda x: (x + 1) ** x + 1,
        }
        dec = Decoder()
        for e, form in forms.items():
            for x in range(21):
                assert f(e, x, decoder=dec) == form(x)
                assert int(cli("eval", e, x)) == form(x)
        r = beta_radius(10)
        assert r == Fraction(1, 6 * 7**10)
        for e, want in {0: 0, 1: 1, 2: 0, 3: 0, 4: Fraction(1, 2), 40: Fraction(3, 4)}.items():
            b = beta(e, 10, decoder=dec)
            assert b.radius == r
            assert want in b
        assert beta(40, 10).value == Fraction(3, 4)


def test_ac04_pairing():
    with criterion("AC4 pairing laws", limit=5):
        for z in range(10**5):
            assert pair(*unpair(z)) == z
        for x in range(300):
            for y in range(300):
                assert unpair(pair(x, y)) == (x, y)


def _fastness_sweep(zero_pow, dec):
    undefined = []
    for e in range(201):
        s = FastSeq(e, zero_pow=zero_pow, decoder=dec)
        try:
            vals = [s(n) for n in range(52)]
        except UndefinedValue:
            # then it must be undefined at every index
            for n in range(52):
                with pytest.raises(UndefinedValue):
                    s(n)
            undefined.append(e)
            continue
        for n in range(51):
            assert is_fast_step(vals[n], vals[n + 1], n), (e, n)
    return undefined


def test_ac05_fastness():
    with criterion("AC5 fastness of enforced sequences, e <= 200, n <= 50"):
        dec = Decoder()
        undefined = _fastness_sweep(ZeroPow.UNDEFINED, dec)
        assert undefined[:4] == [55, 65, 67, 76]
        for e in undefined:
            with pytest.raises(UndefinedValue):
                g(e, 0, decoder=dec)
        assert _fastness_sweep(ZeroPow.ONE, dec) == []
        assert _fastness_sweep(ZeroPow.ZERO, dec) == []


def test_ac06_separation():
    with criterion("AC6 separation of beta_e from alpha, e < 80"):
        dec = Decoder()
        diag = Diagonal(decoder=dec)
        for e in range(80):
            st = diag.advance(e + 1)
            lo, hi = st.interval
            eps = st.epsilons[e]
            try:
                b = beta(e, e, decoder=dec)
            except UndefinedValue:
                # no real to separate from; the digit defaults to 1
                assert eps == 1
                continue
            if eps == 0:
                assert b.lo > hi, e
            else:
                assert b.hi < lo, e


def test_ac07_volume_exactness(interval):
    with criterion("AC7 interval volume (n-2)/n"):
        for n in (4, 10, 100, 1000):
            assert riemann_volume(interval, n) == (Fraction(n - 2, n), 0)


def test_ac08_period_approximation(disc, log2_region):
    with criterion("AC8a disc volume within 1/50 of pi", limit=300):
        res = approximate_volume(disc, Fraction(1, 50), max_n=2048)
        assert res.n_used <= 2048
        assert abs(res.value - PI_20) < Fraction(1, 50)
    with criterion("AC8b log-2 region within 1/20 of ln 2", limit=300):
        res = approximate_volume(log2_region, Fraction(1, 20), max_n=2048)
        assert res.n_used <= 2048
        assert abs(res.value - LN2_20) < Fraction(1, 20)


def test_ac09_convergence_rate(disc):
    with criterion("AC9 disc error ratio in [1.6, 2.6]"):
        err = {n: PI_20 - riemann_volume(disc, n).volume for n in (64, 128, 256, 512, 1024)}
        for n in (64, 128, 256, 512):
            ratio = err[n] / err[2 * n]
            assert Fraction(16, 10) <= ratio <= Fraction(26, 10), (n, float(ratio))


def _scaled_sign_form(p, r, scale):
    """Integer form of ``p`` at ``x = r * X / scale``: ``p(x) * (q scale)^d`` as a function of integer ``X``."""
    a, q = r.numerator, r.denominator
    d = p.total_degree
    return [(c * a ** sum(e) * (q * scale) ** (d - sum(e)), e) for e, c in p.items()]


def test_ac10_soundness_sampling(disc):
    with criterion("AC10 random points in contained disc cubes"):
        n = 64
        verdicts = classify_grid(disc, n)
        cells = list(zip(*np.nonzero(verdicts == Verdict.CONTAINED)))
        assert cells
        rng = random.Random(2024)
        den = 1 << 30
        # sample point: x_v = r * (k_v * den + u_v) / (n * den), u_v in [0, den]
        forms = [_scaled_sign_form(p, disc.box_scale, n * den) for p in disc.constraints]
        # cross-check the integer form against exact evaluation once
        X = (5 * den + 17, 40 * den + 3)
        pt = [disc.box_scale * Xv / (n * den) for Xv in X]
        for p, form in zip(disc.constraints, forms):
            val = sum(c * X[0] ** e[0] * X[1] ** e[1] for c, e in form)
            assert (val > 0) == (p.evaluate(pt) > 0)
        violations = 0
        for i, j in cells:
            for _ in range(100):
                X0 = int(i) * den + rng.randint(0, den)
                X1 = int(j) * den + rng.randint(0, den)
                for form in forms:
                    if sum(c * X0 ** e[0] * X1 ** e[1] for c, e in form) <= 0:
                        violations += 1
        assert violations == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
