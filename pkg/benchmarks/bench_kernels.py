"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json PATH]

Each kernel runs on the same seeded inputs under both backends; outputs are
compared for equality before any timing is reported.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import timeit

import numpy as np

from distalreg import kernels
from distalreg.ffield import build_incidence
from distalreg.kernels import _pykernels

try:
    from distalreg.kernels import _ckernels
except ImportError:
    _ckernels = None


def _cases(rng: random.Random):
    gens = np.array([[rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6), rng.randint(0, 3)]
                     for _ in range(600)], dtype=np.int64)
    forms = np.array([[rng.randint(-1000, 1000) for _ in range(3)] for _ in range(200)],
                     dtype=np.int64)
    ptr = np.arange(0, 601, 3, dtype=np.int64)
    dim = np.array([rng.choice((0, 1, 2)) for _ in range(200)], dtype=np.int8)
    sets = np.array([rng.getrandbits(60) for _ in range(4000)], dtype=np.uint64)
    inst = build_incidence(16)
    lp = np.ascontiguousarray(inst.line_points, dtype=np.int32)
    pl = np.ascontiguousarray(inst.point_lines, dtype=np.int32)
    gl, fl = [tuple(map(int, g)) for g in gens], [tuple(map(int, f)) for f in forms]
    return {
        "linear_sign_matrix": (lambda: _ckernels.linear_sign_matrix(gens, forms),
                               lambda: _pykernels.linear_sign_matrix(gl, fl)),
        "cell_sign_masks": (lambda: _ckernels.cell_sign_masks(gens, ptr, dim, forms),
                            lambda: _pykernels.cell_sign_masks(gl, ptr, dim, fl)),
        "count_traces": (lambda: _ckernels.count_traces(sets, (1 << 20) - 1),
                         lambda: _pykernels.count_traces([int(s) for s in sets], (1 << 20) - 1)),
        "biclique_local_search": (
            lambda: _ckernels.biclique_local_search(lp, pl, 2000, 7),
            lambda: _pykernels.biclique_local_search(lp.tolist(), pl.tolist(), 2000, 7)),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b)) and len(a) == len(b)
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return a == b


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="write timings here")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; only the fallback is available", file=sys.stderr)
        return 1
    print(f"active backend: {kernels.BACKEND}")
    rows = []
    for name, (fast, slow) in _cases(random.Random(12345)).items():
        if not _same(fast(), slow()):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        tc = min(timeit.repeat(fast, number=1, repeat=args.repeat))
        tp = min(timeit.repeat(slow, number=1, repeat=args.repeat))
        rows.append({"kernel": name, "cython_s": tc, "python_s": tp, "speedup": tp / tc})
        print(f"{name:24s} cython {tc * 1e3:9.2f} ms   python {tp * 1e3:9.2f} ms   x{tp / tc:7.1f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
