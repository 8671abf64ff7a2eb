# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Same contracts as ``_pykernels``; int64 inputs only."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, int8_t, uint8_t, int32_t

cnp.import_array()

DEF NEG = 1
DEF ZERO = 2
DEF POS = 4


def linear_sign_matrix(const int64_t[:, ::1] gens, const int64_t[:, ::1] forms):
    cdef Py_ssize_t n = gens.shape[0], m = forms.shape[0], i, j
    cdef int64_t v
    out = np.zeros((n, m), dtype=np.int8)
    cdef int8_t[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(m):
                v = forms[j, 0] * gens[i, 0] + forms[j, 1] * gens[i, 1] + forms[j, 2] * gens[i, 2]
                o[i, j] = (v > 0) - (v < 0)
    return out


def cell_sign_masks(const int64_t[:, ::1] gens, const int64_t[::1] cell_ptr,
                    const int8_t[::1] cell_dim, const int64_t[:, ::1] forms):
    cdef Py_ssize_t ncell = cell_ptr.shape[0] - 1, m = forms.shape[0]
    cdef Py_ssize_t c, j, g, lo, hi
    cdef int64_t v
    cdef bint pos, neg
    out = np.zeros((ncell, m), dtype=np.uint8)
    cdef uint8_t[:, ::1] o = out
    with nogil:
        for c in range(ncell):
            lo = cell_ptr[c]
            hi = cell_ptr[c + 1]
            if cell_dim[c] == 0:
                hi = lo + 1     # a vertex is its single generator
            for j in range(m):
                pos = False
                neg = False
                for g in range(lo, hi):
                    v = forms[j, 0] * gens[g, 0] + forms[j, 1] * gens[g, 1] + forms[j, 2] * gens[g, 2]
                    if v > 0:
                        pos = True
                    elif v < 0:
                        neg = True
                if cell_dim[c] == 0:
                    o[c, j] = POS if pos else (NEG if neg else ZERO)
                elif pos and neg:
                    o[c, j] = NEG | ZERO | POS
                elif pos:
                    o[c, j] = POS
                elif neg:
                    o[c, j] = NEG
                else:
                    o[c, j] = ZERO
    return out


def count_traces(const uint64_t[::1] sets, uint64_t mask):
    cdef Py_ssize_t n = sets.shape[0], i, k = 0
    if n == 0:
        return 0
    buf = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] b = buf
    for i in range(n):
        b[i] = sets[i] & mask
    buf.sort()
    k = 1
    for i in range(1, n):
        if b[i] != b[i - 1]:
            k += 1
    return k


cdef inline uint64_t _splitmix(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef void _bump(Py_ssize_t line, int delta, int32_t[:, ::1] line_points, int64_t[::1] cnt,
                int64_t[::1] damage, int64_t[::1] blocking, int64_t* free) nogil:
    cdef Py_ssize_t k, q = line_points.shape[1]
    cdef int64_t c = cnt[line]
    cdef int32_t p
    if delta > 0:
        if c == 0:
            free[0] -= 1
            for k in range(q):
                p = line_points[line, k]
                damage[p] -= 1
                blocking[p] += 1
        elif c == 1:
            for k in range(q):
                blocking[line_points[line, k]] -= 1
        cnt[line] = c + 1
    else:
        if c == 1:
            free[0] += 1
            for k in range(q):
                p = line_points[line, k]
                damage[p] += 1
                blocking[p] -= 1
        elif c == 2:
            for k in range(q):
                blocking[line_points[line, k]] += 1
        cnt[line] = c - 1


def biclique_local_search(int32_t[:, ::1] line_points, int32_t[:, ::1] point_lines,
                          Py_ssize_t iters, uint64_t seed):
    cdef Py_ssize_t npts = point_lines.shape[0], nlines = line_points.shape[0]
    cdef Py_ssize_t deg = point_lines.shape[1] if npts else 1
    cdef uint64_t state = seed, r
    cdef int64_t free = nlines, size = 0, best_val = -1, val, ties
    cdef Py_ssize_t it, p, k, target, nmem, kick, kk, stale = 0, limit
    cnt_a = np.zeros(nlines, dtype=np.int64)
    damage_a = np.full(npts, deg, dtype=np.int64)
    blocking_a = np.zeros(npts, dtype=np.int64)
    inp_a = np.zeros(npts, dtype=np.uint8)
    best_a = np.zeros(npts, dtype=np.uint8)
    members_a = np.zeros(npts, dtype=np.int64)
    cdef int64_t[::1] cnt = cnt_a, damage = damage_a, blocking = blocking_a, members = members_a
    cdef uint8_t[::1] inp = inp_a, best = best_a
    limit = 2 * npts // (deg if deg > 1 else 1) + 8
    with nogil:
        for it in range(iters):
            target = -1
            ties = 0
            if size <= free:
                for p in range(npts):
                    if inp[p]:
                        continue
                    if target < 0 or damage[p] < damage[target]:
                        target = p
                        ties = 1
                    elif damage[p] == damage[target]:
                        ties += 1
                        r = _splitmix(&state)
                        if r % <uint64_t>ties == 0:
                            target = p
                if target < 0:
                    break
                inp[target] = 1
                size += 1
                for k in range(deg):
                    _bump(point_lines[target, k], 1, line_points, cnt, damage, blocking, &free)
            else:
                for p in range(npts):
                    if not inp[p]:
                        continue
                    if target < 0 or blocking[p] > blocking[target]:
                        target = p
                        ties = 1
                    elif blocking[p] == blocking[target]:
                        ties += 1
                        r = _splitmix(&state)
                        if r % <uint64_t>ties == 0:
                            target = p
                inp[target] = 0
                size -= 1
                for k in range(deg):
                    _bump(point_lines[target, k], -1, line_points, cnt, damage, blocking, &free)
            val = size if size < free else free
            if val > best_val:
                best_val = val
                for p in range(npts):
                    best[p] = inp[p]
                stale = 0
            else:
                stale += 1
            if stale > limit and size:
                stale = 0
                nmem = 0
                for p in range(npts):
                    if inp[p]:
                        members[nmem] = p
                        nmem += 1
                r = _splitmix(&state)
                kick = 1 + <Py_ssize_t>(r % <uint64_t>(nmem // 4 + 1 if nmem // 4 + 1 > 1 else 1))
                if kick > nmem:
                    kick = nmem
                for kk in range(kick):
                    r = _splitmix(&state)
                    k = <Py_ssize_t>(r % <uint64_t>nmem)
                    p = members[k]
                    # list.pop(k) semantics: shift the tail left
                    while k < nmem - 1:
                        members[k] = members[k + 1]
                        k += 1
                    nmem -= 1
                    inp[p] = 0
                    size -= 1
                    for k in range(deg):
                        _bump(point_lines[p, k], -1, line_points, cnt, damage, blocking, &free)
    return best_val, best_a
