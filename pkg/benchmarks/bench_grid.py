"""Time level-0 grid certification with the numba and numpy backends.

Usage::

    python benchmarks/bench_grid.py [--sizes 256 512 1024] [--repeat 3]

Both backends must return identical verdict arrays; the script exits
nonzero otherwise. The first numba call per process pays for JIT compilation
(or for loading the on-disk cache), so it is run once before timing.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from nonperiod.semialg import load_domain
from nonperiod.semialg.kernels import classify_cells

DOMAINS = Path(__file__).resolve().parent.parent / "domains"


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--domains", nargs="+", default=["disc", "log2", "annulus"])
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    classify_cells(load_domain(DOMAINS / "disc.json"), 4, "numba")
    print(f"numba warm-up: {time.perf_counter() - t0:.2f} s")
    print(f"{'domain':<10}{'n':>6}{'cells':>10}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    status = 0
    for name in args.domains:
        domain = load_domain(DOMAINS / f"{name}.json")
        for n in args.sizes:
            t_nb, a = best_of(lambda: classify_cells(domain, n, "numba"), args.repeat)
            t_np, b = best_of(lambda: classify_cells(domain, n, "numpy"), args.repeat)
            same = np.array_equal(a, b)
            status |= not same
            flag = "" if same else "  MISMATCH"
            print(f"{name:<10}{n:>6}{a.size:>10}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>8.1f}x{flag}")
    return status


if __name__ == "__main__":
    sys.exit(main())
