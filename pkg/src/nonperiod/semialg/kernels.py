"""Level-0 classification of every cube of a grid.

Each cube gets 0 (some corner of some constraint is <= 0), 1 (all scaled
Bernstein coefficients of every constraint are positive) or 2 (undecided;
the caller refines these exactly).

Two interchangeable backends compute identical arrays:

* ``numba``: a compiled loop over cells, parallel over ``prange``.
* ``numpy``: chunked vectorised evaluation; also the only route when the
  integers may not fit in int64, in which case it runs on object arrays.

``NONPERIOD_DISABLE_NUMBA=1`` forces the numpy backend for ``backend="auto"``.
"""

from __future__ import annotations

import logging
import os
from fractions import Fraction

import numpy as np

from .bernstein import ScaledTables, scaled_tables
from .polynomial import BasicDomain

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
else:
    if "NUMBA_THREADING_LAYER" not in os.environ:
        try:
            from numba.np.ufunc import omppool  # noqa: F401
        except ImportError:
            pass
        else:
            # skip the TBB probe; old TBB builds only produce a warning
            nb.config.THREADING_LAYER = "omp"

__all__ = ["NOT_CONTAINED", "CONTAINED", "UNDECIDED", "numba_enabled", "resolve_backend", "classify_cells"]

log = logging.getLogger(__name__)

NOT_CONTAINED, CONTAINED, UNDECIDED = 0, 1, 2

_CHUNK = 1 << 16


def numba_enabled() -> bool:
    flag = os.environ.get("NONPERIOD_DISABLE_NUMBA", "").strip().lower()
    return nb is not None and flag not in ("1", "true", "yes", "on")


def resolve_backend(backend: str = "auto") -> str:
    if backend == "auto":
        return "numba" if numba_enabled() else "numpy"
    if backend == "numba" and nb is None:
        raise RuntimeError("numba backend requested but numba is not importable")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


if nb is not None:

    @nb.njit(parallel=True, cache=True, nogil=True)
    def _classify_numba(n, dim, t_off, t_w, t_exp, t_tgt, s_off, m_off, m_flat, corner, out):
        n_cons = t_off.shape[0] - 1
        s_max = 0
        for c in range(n_cons):
            s_max = max(s_max, s_off[c + 1] - s_off[c])
        for cell in nb.prange(out.shape[0]):
            k = np.empty(dim, np.int64)
            rem = np.int64(cell)
            for v in range(dim - 1, -1, -1):
                k[v] = rem % n
                rem //= n
            A = np.empty(s_max, np.int64)
            verdict = 1
            for c in range(n_cons):
                S = s_off[c + 1] - s_off[c]
                for i in range(S):
                    A[i] = 0
                for t in range(t_off[c], t_off[c + 1]):
                    val = t_w[t]
                    for v in range(dim):
                        for _ in range(t_exp[t, v]):
                            val *= k[v]
                    A[t_tgt[t]] += val
                base = m_off[c]
                bad = False
                allpos = True
                for i in range(S):
                    b = 0
                    for j in range(S):
                        b += m_flat[base + i * S + j] * A[j]
                    if b <= 0:
                        allpos = False
                        if corner[s_off[c] + i]:
                            bad = True
                            break
                if bad:
                    verdict = 0
                    break
                if not allpos:
                    verdict = 2
            out[cell] = verdict


def _pack(tables: list[ScaledTables], dim: int):
    t_off = [0]
    s_off = [0]
    m_off = []
    w, ex, tg, mf, cr = [], [], [], [], []
    for t in tables:
        w += t.weights
        ex += [list(e) for e in t.exps]
        tg += t.targets
        t_off.append(len(w))
        m_off.append(len(mf))
        mf += [x for row in t.matrix for x in row]
        cr += t.corners
        s_off.append(len(cr))
    i64 = np.int64
    return (
        np.array(t_off, i64),
        np.array(w, i64),
        np.array(ex, i64).reshape(-1, dim),
        np.array(tg, i64),
        np.array(s_off, i64),
        np.array(m_off, i64),
        np.array(mf, i64),
        np.array(cr, np.bool_),
    )


def _classify_numpy(n: int, dim: int, tables: list[ScaledTables], dtype, out: np.ndarray) -> None:
    total = out.shape[0]
    mats = [np.array(t.matrix, dtype=dtype) for t in tables]
    corners = [np.array(t.corners, dtype=bool) for t in tables]
    for start in range(0, total, _CHUNK):
        cells = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        k = np.stack(np.unravel_index(cells, (n,) * dim), axis=1).astype(dtype)
        verdict = np.ones(cells.shape[0], dtype=np.int8)
        dead = np.zeros(cells.shape[0], dtype=bool)
        for t, M, cmask in zip(tables, mats, corners):
            A = np.zeros((cells.shape[0], t.size), dtype=dtype)
            for w, e, tgt in zip(t.weights, t.exps, t.targets):
                col = np.full(cells.shape[0], w, dtype=dtype)
                for v, ev in enumerate(e):
                    for _ in range(ev):
                        col = col * k[:, v]
                A[:, tgt] += col
            B = A @ M.T
            dead |= (B[:, cmask] <= 0).any(axis=1)
            verdict[~(B > 0).all(axis=1)] = UNDECIDED
        verdict[dead] = NOT_CONTAINED
        out[start : start + cells.shape[0]] = verdict


def classify_cells(domain: BasicDomain, n: int, backend: str = "auto") -> np.ndarray:
    """Level-0 verdicts for all ``n^dim`` cubes, flattened in C order."""
    backend = resolve_backend(backend)
    r = Fraction(domain.box_scale)
    tables = [scaled_tables(p, r, n) for p in domain.constraints]
    out = np.empty(n**domain.dim, dtype=np.int8)
    if not all(t.fits_int64 for t in tables):
        log.info("grid n=%d may overflow int64; using exact object arrays", n)
        _classify_numpy(n, domain.dim, tables, object, out)
    elif backend == "numba":
        _classify_numba(n, domain.dim, *_pack(tables, domain.dim), out)
    else:
        _classify_numpy(n, domain.dim, tables, np.int64, out)
    return out
