"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled module is used when it imports and the inputs fit in int64
with headroom; otherwise the reference implementation in ``_pykernels``
runs on Python ints.  Set ``DISTALREG_PURE_PYTHON=1`` to force the fallback.
"""
import os

import numpy as np

from . import _pykernels

NEG, ZERO, POS = _pykernels.NEG, _pykernels.ZERO, _pykernels.POS

_ck = None
if os.environ.get("DISTALREG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _ck
    except ImportError:  # extension not built
        _ck = None

BACKEND = "cython" if _ck is not None else "python"

# |a*x + b*y + c*w| <= 3 * max|form| * max|gen| must stay below 2**62
_LIMIT = 1 << 62


def _max_abs(rows):
    m = 0
    for row in rows:
        for v in row:
            v = abs(int(v))
            if v > m:
                m = v
    return m


def _int64_safe(gens, forms):
    return 3 * _max_abs(gens) * _max_abs(forms) < _LIMIT


def linear_sign_matrix(gens, forms):
    gens = [tuple(g) for g in gens]
    forms = [tuple(f) for f in forms]
    if _ck is not None and gens and forms and _int64_safe(gens, forms):
        return _ck.linear_sign_matrix(np.asarray(gens, dtype=np.int64).reshape(-1, 3),
                                      np.asarray(forms, dtype=np.int64).reshape(-1, 3))
    return _pykernels.linear_sign_matrix(gens, forms)


def cell_sign_masks(gens, cell_ptr, cell_dim, forms):
    """Per-cell bitmask of realized signs (1 neg, 2 zero, 4 pos) for each linear form."""
    gens = [tuple(g) for g in gens]
    forms = [tuple(f) for f in forms]
    if _ck is not None and gens and forms and _int64_safe(gens, forms):
        return _ck.cell_sign_masks(
            np.asarray(gens, dtype=np.int64).reshape(-1, 3),
            np.ascontiguousarray(cell_ptr, dtype=np.int64),
            np.ascontiguousarray(cell_dim, dtype=np.int8),
            np.asarray(forms, dtype=np.int64).reshape(-1, 3),
        )
    return _pykernels.cell_sign_masks(gens, cell_ptr, cell_dim, forms)


def count_traces(sets, mask):
    sets = list(sets)
    if _ck is not None and int(mask) < (1 << 64) and all(0 <= int(s) < (1 << 64) for s in sets):
        return _ck.count_traces(np.asarray(sets, dtype=np.uint64), int(mask))
    return _pykernels.count_traces(sets, mask)


def biclique_local_search(line_points, point_lines, iters, seed):
    seed = int(seed) & ((1 << 64) - 1)
    if _ck is not None:
        return _ck.biclique_local_search(np.ascontiguousarray(line_points, dtype=np.int32),
                                         np.ascontiguousarray(point_lines, dtype=np.int32),
                                         int(iters), seed)
    lp = [list(map(int, row)) for row in line_points]
    pl = [list(map(int, row)) for row in point_lines]
    return _pykernels.biclique_local_search(lp, pl, iters, seed)


__all__ = ["BACKEND", "NEG", "ZERO", "POS", "linear_sign_matrix", "cell_sign_masks",
           "count_traces", "biclique_local_search"]
