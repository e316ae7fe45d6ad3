"""Certified inner Riemann sums for volumes of basic open semi-algebraic sets.

A grid cube counts toward ``V_n`` only when every constraint is certified
strictly positive on the closed cube, so ``vol(V_n)`` is always a lower bound
of ``vol(D)``.
"""

from __future__ import annotations

import enum
import os
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .bernstein import scaled_tables
from .kernels import CONTAINED, NOT_CONTAINED, UNDECIDED, classify_cells
from .polynomial import BasicDomain, GridCube, IntPolynomial

__all__ = [
    "Verdict",
    "Certificate",
    "NoConvergenceAtBudget",
    "VolumeEstimate",
    "Approximation",
    "DEFAULT_MAX_DEPTH",
    "default_max_depth",
    "cube_contained",
    "classify_grid",
    "riemann_volume",
    "approximate_volume",
]

DEFAULT_MAX_DEPTH = 6


def default_max_depth() -> int:
    env = os.environ.get("NONPERIOD_MAX_DEPTH")
    return int(env) if env else DEFAULT_MAX_DEPTH


class Verdict(enum.IntEnum):
    NOT_CONTAINED = NOT_CONTAINED
    CONTAINED = CONTAINED
    UNKNOWN = UNDECIDED


class Certificate(NamedTuple):
    verdict: Verdict
    depth_used: int


class NoConvergenceAtBudget(ArithmeticError):
    def __init__(self, max_n: int, last_gap: Fraction | None):
        self.max_n = max_n
        self.last_gap = last_gap
        super().__init__(f"Cauchy criterion not met by max_n={max_n} (last gap {last_gap})")


class VolumeEstimate(NamedTuple):
    volume: Fraction
    unknown_count: int


class Approximation(NamedTuple):
    value: Fraction
    n_used: int
    unknown_count: int = 0


def _certify(p: IntPolynomial, r: Fraction, n: int, k: tuple, depth: int, max_depth: int) -> Certificate:
    v = scaled_tables(p, r, n).verdict(k)
    if v == NOT_CONTAINED:
        return Certificate(Verdict.NOT_CONTAINED, depth)
    if v == CONTAINED:
        return Certificate(Verdict.CONTAINED, depth)
    if depth >= max_depth:
        return Certificate(Verdict.UNKNOWN, depth)
    worst = Certificate(Verdict.CONTAINED, depth)
    for child in GridCube(n, k).children():
        c = _certify(p, r, child.n, child.index, depth + 1, max_depth)
        if c.verdict == Verdict.NOT_CONTAINED:
            return c
        if c.verdict == Verdict.UNKNOWN:
            worst = Certificate(Verdict.UNKNOWN, max(worst.depth_used, c.depth_used))
        else:
            worst = Certificate(worst.verdict, max(worst.depth_used, c.depth_used))
    return worst


def cube_contained(domain: BasicDomain, cube: GridCube, max_depth: int | None = None) -> Certificate:
    """Decide whether the closed ``cube`` lies inside ``domain``.

    Every constraint is checked on the cube's Bernstein coefficients and, if
    undecided, on ``2^dim`` half-size sub-cubes, down to ``max_depth`` halvings.
    ``NOT_CONTAINED`` comes from a (sub-)cube corner where some constraint is
    ``<= 0``; ``CONTAINED`` from all-positive coefficients on a cover of the
    cube. Both are sound. ``UNKNOWN`` means the depth ran out.
    """
    if cube.dim != domain.dim:
        raise ValueError(f"cube dimension {cube.dim} != domain dimension {domain.dim}")
    if max_depth is None:
        max_depth = default_max_depth()
    r = domain.box_scale
    # any boundary-touching corner settles the cube before any subdivision
    for p in domain.constraints:
        if scaled_tables(p, r, cube.n).verdict(cube.index) == NOT_CONTAINED:
            return Certificate(Verdict.NOT_CONTAINED, 0)
    result = Certificate(Verdict.CONTAINED, 0)
    for p in domain.constraints:
        c = _certify(p, r, cube.n, cube.index, 0, max_depth)
        if c.verdict == Verdict.NOT_CONTAINED:
            return c
        verdict = Verdict.UNKNOWN if Verdict.UNKNOWN in (c.verdict, result.verdict) else Verdict.CONTAINED
        result = Certificate(verdict, max(result.depth_used, c.depth_used))
    return result


def classify_grid(
    domain: BasicDomain, n: int, max_depth: int | None = None, backend: str = "auto"
) -> np.ndarray:
    """Verdict codes (see :class:`Verdict`) for every cube, shape ``(n,) * dim``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_depth is None:
        max_depth = default_max_depth()
    flat = classify_cells(domain, n, backend)
    shape = (n,) * domain.dim
    for cell in np.flatnonzero(flat == UNDECIDED):
        k = np.unravel_index(int(cell), shape)
        flat[cell] = cube_contained(domain, GridCube(n, tuple(int(x) for x in k)), max_depth).verdict
    return flat.reshape(shape)


def riemann_volume(
    domain: BasicDomain, n: int, max_depth: int | None = None, backend: str = "auto"
) -> VolumeEstimate:
    """``(r/n)^dim`` times the number of certified cubes, plus the Unknown count.

    Unknown cubes are left out, which keeps the sum an inner approximation.
    """
    verdicts = classify_grid(domain, n, max_depth, backend)
    contained = int(np.count_nonzero(verdicts == Verdict.CONTAINED))
    unknown = int(np.count_nonzero(verdicts == Verdict.UNKNOWN))
    return VolumeEstimate((domain.box_scale / n) ** domain.dim * contained, unknown)


def approximate_volume(
    domain: BasicDomain,
    tol,
    n0: int = 4,
    max_n: int = 2048,
    max_depth: int | None = None,
    backend: str = "auto",
) -> Approximation:
    """Refine ``n0, 2 n0, 4 n0, ...`` until two successive sums differ by less than ``tol/2``.

    There is no computable a-priori grid size for a target accuracy, so the
    stopping rule is empirical; the returned value is still a certified lower
    bound of the volume.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    prev = None
    gap = None
    n = n0
    while n <= max_n:
        est = riemann_volume(domain, n, max_depth, backend)
        if prev is not None:
            gap = abs(est.volume - prev)
            if gap < tol / 2:
                return Approximation(est.volume, n, est.unknown_count)
        prev = est.volume
        n *= 2
    raise NoConvergenceAtBudget(max_n, gap)
