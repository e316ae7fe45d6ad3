"""Bernstein coefficients of integer polynomials on grid cubes.

Two routes are provided:

* :func:`bernstein_coefficients` -- exact rationals, straight from the
  definition (shift the cube to ``[0, 1]^dim``, then change basis).
* :class:`ScaledTables` -- the same coefficients multiplied by one positive
  integer per (polynomial, grid) pair so that every entry is an integer.  The
  sign pattern is unchanged, which is all the containment test needs, and
  the tables are plain integer arrays a compiled kernel can consume.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm, prod

import numpy as np

from .polynomial import GridCube, IntPolynomial

__all__ = ["bernstein_coefficients", "ScaledTables", "scaled_tables", "INT64_SAFE"]

INT64_SAFE = 2**62


def _basis_change(d: int) -> list[list[Fraction]]:
    # b_m = sum_{i <= m} C(m, i) / C(d, i) * a_i
    return [[Fraction(comb(m, i), comb(d, i)) if i <= m else Fraction(0) for i in range(d + 1)] for m in range(d + 1)]


def bernstein_coefficients(p: IntPolynomial, cube: GridCube, r, degrees=None) -> np.ndarray:
    """Exact Bernstein coefficients of ``p`` on ``cube`` (object array of Fractions).

    ``degrees`` defaults to the per-variable degrees of ``p``; larger values
    give the degree-elevated form. Entry ``[m_1, ..., m_l]`` belongs to the
    basis polynomial ``prod_v C(d_v, m_v) t_v^m_v (1 - t_v)^(d_v - m_v)``.
    """
    if p.dim != cube.dim:
        raise ValueError(f"polynomial dimension {p.dim} != cube dimension {cube.dim}")
    degs = tuple(p.degrees if degrees is None else degrees)
    if any(d < dp for d, dp in zip(degs, p.degrees)):
        raise ValueError("degrees below the polynomial's own degrees")
    h = Fraction(r) / cube.n
    lows = [k * h for k in cube.index]
    shape = tuple(d + 1 for d in degs)
    mono = np.full(shape, Fraction(0), dtype=object)
    # x_v = low_v + h t_v, expanded binomially
    for exps, c in p.items():
        for m in itertools.product(*(range(j + 1) for j in exps)):
            coeff = Fraction(c)
            for j, mv, lo in zip(exps, m, lows):
                coeff *= comb(j, mv) * lo ** (j - mv) * h**mv
            mono[m] += coeff
    out = mono
    for axis, d in enumerate(degs):
        T = np.array(_basis_change(d), dtype=object)
        out = np.moveaxis(np.tensordot(T, out, axes=([1], [axis])), 0, axis)
    return out


class ScaledTables:
    """Integer Bernstein data for one polynomial on the grid of side ``r/n``.

    For the cube with lower corner index ``k`` the scaled coefficients are
    ``M @ A(k)``, where ``A_m(k) = sum_t w_t * prod_v k_v^exps[t, v]`` over the
    terms ``t`` with ``targets[t] == m``.
    """

    def __init__(self, p: IntPolynomial, r: Fraction, n: int):
        r = Fraction(r)
        self.dim = p.dim
        self.degrees = p.degrees
        self.shape = tuple(d + 1 for d in self.degrees)
        self.size = prod(self.shape)
        d = p.total_degree
        a, q = r.numerator, r.denominator
        # multiply p(r (k + t) / n) by (q n)^d to clear denominators
        merged: dict[tuple, int] = {}
        for exps, c in p.items():
            cj = c * a ** sum(exps) * (q * n) ** (d - sum(exps))
            for m in itertools.product(*(range(j + 1) for j in exps)):
                w = cj * prod(comb(j, mv) for j, mv in zip(exps, m))
                rest = tuple(j - mv for j, mv in zip(exps, m))
                key = (rest, int(np.ravel_multi_index(m, self.shape)))
                merged[key] = merged.get(key, 0) + w
        merged = {k: v for k, v in merged.items() if v}
        self.weights = [w for w in merged.values()]
        self.exps = [k[0] for k in merged]
        self.targets = [k[1] for k in merged]
        mats = []
        for dv in self.degrees:
            L = lcm(*(comb(dv, i) for i in range(dv + 1)))
            mats.append([[comb(m, i) * (L // comb(dv, i)) if i <= m else 0 for i in range(dv + 1)] for m in range(dv + 1)])
        M = [[1]]
        for T in mats:
            M = [[x * y for x in row for y in trow] for row in M for trow in T]
        self.matrix = M
        self.corners = [
            all(mv in (0, dv) for mv, dv in zip(np.unravel_index(i, self.shape), self.degrees))
            for i in range(self.size)
        ]
        self.n = n
        # |A_m(k)| <= sum_t |w_t| n^|exps_t| for 0 <= k_v < n
        bound_a = sum(abs(w) * n ** sum(e) for w, e in zip(self.weights, self.exps))
        self.bound = max(sum(abs(x) for x in row) for row in M) * max(bound_a, 1)

    @property
    def fits_int64(self) -> bool:
        return self.bound < INT64_SAFE

    def coefficients(self, k) -> list[int]:
        """Scaled Bernstein coefficients on cube ``k`` with Python ints."""
        A = [0] * self.size
        for w, e, t in zip(self.weights, self.exps, self.targets):
            v = w
            for kv, ev in zip(k, e):
                if ev:
                    v *= kv**ev
            A[t] += v
        return [sum(x * y for x, y in zip(row, A)) for row in self.matrix]

    def verdict(self, k) -> int:
        """0: a corner is <= 0; 1: every coefficient > 0; 2: undecided."""
        B = self.coefficients(k)
        if any(b <= 0 for b, c in zip(B, self.corners) if c):
            return 0
        return 1 if min(B) > 0 else 2


@lru_cache(maxsize=256)
def scaled_tables(p: IntPolynomial, r: Fraction, n: int) -> ScaledTables:
    return ScaledTables(p, r, n)
