"""Pure-Python reference kernels.

Semantics are the contract for the compiled twin in ``_ckernels.pyx``.
These versions take arbitrary Python ints, so they are also the exact
fallback whenever inputs overflow 64-bit arithmetic.
"""
import numpy as np

NEG, ZERO, POS = 1, 2, 4
_MASK64 = (1 << 64) - 1


def linear_sign_matrix(gens, forms):
    """``out[i, j] = sign(f0*X + f1*Y + f2*W)`` for generator ``i``, form ``j``."""
    out = np.zeros((len(gens), len(forms)), dtype=np.int8)
    for i, (x, y, w) in enumerate(gens):
        x, y, w = int(x), int(y), int(w)
        for j, (a, b, c) in enumerate(forms):
            v = int(a) * x + int(b) * y + int(c) * w
            out[i, j] = (v > 0) - (v < 0)
    return out


def cell_sign_masks(gens, cell_ptr, cell_dim, forms):
    """Bitmask of signs each form realizes on each open cell.

    Cell ``c`` owns generators ``cell_ptr[c]:cell_ptr[c+1]``; points have
    ``W > 0``, recession directions ``W == 0``.  Bits: 1 negative, 2 zero,
    4 positive.
    """
    signs = linear_sign_matrix(gens, forms)
    ncell = len(cell_ptr) - 1
    out = np.zeros((ncell, len(forms)), dtype=np.uint8)
    for c in range(ncell):
        lo, hi = int(cell_ptr[c]), int(cell_ptr[c + 1])
        dim = int(cell_dim[c])
        for j in range(len(forms)):
            if dim == 0:
                s = int(signs[lo, j])
                out[c, j] = POS if s > 0 else (NEG if s < 0 else ZERO)
                continue
            pos = neg = False
            for g in range(lo, hi):
                s = signs[g, j]
                if s > 0:
                    pos = True
                elif s < 0:
                    neg = True
            if pos and neg:
                out[c, j] = NEG | ZERO | POS
            elif pos:
                out[c, j] = POS
            elif neg:
                out[c, j] = NEG
            else:
                out[c, j] = ZERO
    return out


def count_traces(sets, mask):
    """Number of distinct traces ``s & mask`` over the bitmask family ``sets``."""
    mask = int(mask)
    return len({int(s) & mask for s in sets})


def _splitmix(state):
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def biclique_local_search(line_points, point_lines, iters, seed):
    """Search for a large incidence-free pair (P0, L0) in a regular incidence structure.

    ``line_points[l]`` lists the points on line ``l``; ``point_lines[p]`` the
    lines through ``p``.  The line side is always the set of lines avoiding
    ``P0``; moves add the least damaging point or drop the most blocking
    one, with seeded tie-breaking and periodic perturbation.  Returns
    ``(best_value, in_p0)`` where ``in_p0`` is a uint8 mask of the best P0.
    """
    npts = len(point_lines)
    nlines = len(line_points)
    state = int(seed) & _MASK64
    cnt = [0] * nlines
    damage = [len(point_lines[p]) for p in range(npts)]
    blocking = [0] * npts
    inp = [0] * npts
    size = 0
    free = nlines
    best_val = -1
    best = [0] * npts
    stale = 0

    def bump(line, delta):
        nonlocal free
        c = cnt[line]
        pts = line_points[line]
        if delta > 0:
            if c == 0:
                free -= 1
                for p in pts:
                    damage[p] -= 1
                    blocking[p] += 1
            elif c == 1:
                for p in pts:
                    blocking[p] -= 1
            cnt[line] = c + 1
        else:
            if c == 1:
                free += 1
                for p in pts:
                    damage[p] += 1
                    blocking[p] -= 1
            elif c == 2:
                for p in pts:
                    blocking[p] += 1
            cnt[line] = c - 1

    for _ in range(int(iters)):
        if size <= free:
            # add the point that closes the fewest free lines
            target, ties = None, 0
            for p in range(npts):
                if inp[p]:
                    continue
                if target is None or damage[p] < damage[target]:
                    target, ties = p, 1
                elif damage[p] == damage[target]:
                    ties += 1
                    state, r = _splitmix(state)
                    if r % ties == 0:
                        target = p
            if target is None:
                break
            inp[target] = 1
            size += 1
            for line in point_lines[target]:
                bump(line, +1)
        else:
            # drop the point that blocks the most lines on its own
            target, ties = None, 0
            for p in range(npts):
                if not inp[p]:
                    continue
                if target is None or blocking[p] > blocking[target]:
                    target, ties = p, 1
                elif blocking[p] == blocking[target]:
                    ties += 1
                    state, r = _splitmix(state)
                    if r % ties == 0:
                        target = p
            inp[target] = 0
            size -= 1
            for line in point_lines[target]:
                bump(line, -1)
        val = min(size, free)
        if val > best_val:
            best_val = val
            best = list(inp)
            stale = 0
        else:
            stale += 1
        if stale > 2 * npts // max(1, len(point_lines[0]) if npts else 1) + 8 and size:
            # perturb: drop a few random points of P0
            stale = 0
            members = [p for p in range(npts) if inp[p]]
            state, r = _splitmix(state)
            kick = 1 + r % max(1, len(members) // 4 + 1)
            for _k in range(min(kick, len(members))):
                state, r = _splitmix(state)
                p = members.pop(r % len(members))
                inp[p] = 0
                size -= 1
                for line in point_lines[p]:
                    bump(line, -1)
    return best_val, np.asarray(best, dtype=np.uint8)
