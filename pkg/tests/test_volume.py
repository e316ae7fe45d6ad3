import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonperiod.semialg import (
    BasicDomain,
    GridCube,
    IntPolynomial,
    NoConvergenceAtBudget,
    Verdict,
    approximate_volume,
    classify_grid,
    cube_contained,
    riemann_volume,
)

from conftest import LN2_20, PI_20

x = IntPolynomial.variable(1, 0)


def disc_cube_min(n, i, j, r=Fraction(2)):
    """min of 1 - (x-1)^2 - (y-1)^2 over a closed cube: corners and critical points."""
    h = r / n
    xs = [i * h, (i + 1) * h]
    ys = [j * h, (j + 1) * h]
    if xs[0] <= 1 <= xs[1]:
        xs.append(Fraction(1))
    if ys[0] <= 1 <= ys[1]:
        ys.append(Fraction(1))
    return min(1 - (a - 1) ** 2 - (b - 1) ** 2 for a in xs for b in ys)


def sample_points(domain, verdicts, count, seed=0):
    """Yield random rational points from every Contained cube."""
    rng = random.Random(seed)
    n = verdicts.shape[0]
    h = domain.box_scale / n
    den = 1 << 20
    for k in zip(*np.nonzero(verdicts == Verdict.CONTAINED)):
        for _ in range(count):
            yield [h * (int(kv) + Fraction(rng.randint(0, den), den)) for kv in k]


# -- cube_contained ---------------------------------------------------------


def test_interval_boundary_cube(interval):
    assert cube_contained(interval, GridCube(4, (0,)), 6).verdict == Verdict.NOT_CONTAINED
    assert cube_contained(interval, GridCube(4, (1,)), 6) == (Verdict.CONTAINED, 0)


def test_disc_central_cube(disc):
    assert disc_cube_min(4, 1, 1) > 0
    assert cube_contained(disc, GridCube(4, (1, 1)), 6).verdict == Verdict.CONTAINED


def test_subdivision_certifies():
    # 100(2x-1)^2 + 1 > 0 needs one halving on [0, 1]
    d = BasicDomain(1, 1, [100 * (2 * x - 1) ** 2 + 1])
    assert cube_contained(d, GridCube(1, (0,)), 6) == (Verdict.CONTAINED, 1)
    assert cube_contained(d, GridCube(1, (0,)), 0) == (Verdict.UNKNOWN, 0)


def test_subdivision_finds_interior_zero():
    # (2x-1)^2 vanishes at 1/2, a corner of the first halving of [1/3, 2/3]
    d = BasicDomain(1, 1, [(2 * x - 1) ** 2])
    assert cube_contained(d, GridCube(3, (1,)), 4) == (Verdict.NOT_CONTAINED, 1)


def test_unknown_at_depth_exhaustion():
    # zero at 1/3, never a dyadic corner
    d = BasicDomain(1, 1, [(3 * x - 1) ** 2])
    assert cube_contained(d, GridCube(1, (0,)), 4) == (Verdict.UNKNOWN, 4)
    est = riemann_volume(d, 1, 4)
    assert est == (0, 1)


def test_dimension_mismatch(disc):
    with pytest.raises(ValueError):
        cube_contained(disc, GridCube(4, (1,)), 2)


def test_disc_grid_matches_oracle(disc):
    for n in (4, 8, 12):
        v = classify_grid(disc, n)
        for i in range(n):
            for j in range(n):
                assert (v[i, j] == Verdict.CONTAINED) == (disc_cube_min(n, i, j) > 0)


# -- riemann_volume ---------------------------------------------------------


def test_interval_volume(interval):
    assert riemann_volume(interval, 4) == (Fraction(1, 2), 0)
    for n in (1, 2, 3, 7, 31, 64):
        assert riemann_volume(interval, n).volume == Fraction(max(n - 2, 0), n)


def test_disc_n8_frozen(disc):
    # 32 of 64 cubes by the per-cube minimisation oracle
    assert sum(disc_cube_min(8, i, j) > 0 for i in range(8) for j in range(8)) == 32
    assert riemann_volume(disc, 8) == (2, 0)
    assert riemann_volume(disc, 8).volume < PI_20


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_exact_on_commensurate_boxes(q, data):
    # box (a1/q, b1/q) x (a2/q, b2/q) inside [0, 1]^2, grid n = q * m
    a1 = data.draw(st.integers(0, q - 1))
    b1 = data.draw(st.integers(a1 + 1, q))
    a2 = data.draw(st.integers(0, q - 1))
    b2 = data.draw(st.integers(a2 + 1, q))
    m = data.draw(st.integers(1, 6))
    n = q * m
    X, Y = IntPolynomial.variable(2, 0), IntPolynomial.variable(2, 1)
    d = BasicDomain(2, 1, [q * X - a1, b1 - q * X, q * Y - a2, b2 - q * Y])
    # interior cubes only: each side loses the boundary layer of one cube
    side1 = max((b1 - a1) * m - 2, 0)
    side2 = max((b2 - a2) * m - 2, 0)
    assert riemann_volume(d, n) == (Fraction(side1 * side2, n * n), 0)


@pytest.mark.parametrize("name", ["disc", "log2_region", "dimple", "annulus"])
def test_dyadic_refinement_is_monotone(name, request):
    d = request.getfixturevalue(name)
    for n in (3, 5, 8, 12, 24):
        assert riemann_volume(d, 2 * n, 3).volume >= riemann_volume(d, n, 3).volume


@pytest.mark.parametrize("name", ["disc", "log2_region", "dimple", "annulus"])
def test_soundness_sampling(name, request):
    d = request.getfixturevalue(name)
    v = classify_grid(d, 16)
    for pt in sample_points(d, v, 100, seed=7):
        assert all(p.evaluate(pt) > 0 for p in d.constraints)


def test_inner_approximation_below_known_values(disc, log2_region):
    for n in (16, 64, 256):
        assert riemann_volume(disc, n).volume < PI_20
        assert riemann_volume(log2_region, n).volume < LN2_20


# -- approximate_volume -----------------------------------------------------


def test_approximate_disc(disc):
    res = approximate_volume(disc, Fraction(1, 10))
    assert abs(res.value - PI_20) < Fraction(1, 10)
    assert res.value < PI_20


def test_approximate_log2(log2_region):
    res = approximate_volume(log2_region, Fraction(1, 20))
    assert abs(res.value - LN2_20) < Fraction(1, 20)


def test_approximate_interval(interval):
    res = approximate_volume(interval, Fraction(1, 100))
    assert res.value == Fraction(res.n_used - 2, res.n_used)
    assert abs(res.value - 1) < Fraction(1, 100)


def test_no_convergence(disc):
    with pytest.raises(NoConvergenceAtBudget):
        approximate_volume(disc, Fraction(1, 10**6), max_n=64)
    with pytest.raises(ValueError):
        approximate_volume(disc, 0)
