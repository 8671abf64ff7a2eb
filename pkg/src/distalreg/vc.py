"""Finite set systems: VC-dimension, shatter function, epsilon-approximations and nets.

Sets are stored as Python-int bitmasks over the ground indices.  Every
approximation or net is verified exhaustively against the whole family
before it is returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import kernels
from .rng import derive_rng
from .structures import AtomicMeasure, as_point


class NetConstructionError(RuntimeError):
    """Sampling and fallback both failed within the retry cap."""


class SetSystem:
    def __init__(self, ground: Sequence, sets: Sequence):
        self.ground = list(ground)
        if not self.ground:
            raise ValueError("ground set must be nonempty")
        n = len(self.ground)
        masks = []
        for s in sets:
            if isinstance(s, int):
                m = s
                if m >> n:
                    raise ValueError("set mask exceeds the ground set")
            else:
                m = 0
                for i in s:
                    if not 0 <= i < n:
                        raise ValueError(f"element {i} is not in the ground set")
                    m |= 1 << i
            masks.append(m)
        if not masks:
            raise ValueError("a set system needs at least one set")
        self.masks = masks

    @classmethod
    def from_relation(cls, R, ground_points, params) -> "SetSystem":
        """Traces ``phi(M, b)`` on the ground points, one set per parameter."""
        pts = [as_point(p) for p in ground_points]
        sets = []
        for b in params:
            bv = as_point(b) + R.z_value
            m = 0
            for i, a in enumerate(pts):
                if R.holds_vec(a + bv):
                    m |= 1 << i
            sets.append(m)
        return cls(pts, sets)

    def __len__(self):
        return len(self.masks)

    def set_indices(self, k: int) -> list[int]:
        m = self.masks[k]
        return [i for i in range(len(self.ground)) if m >> i & 1]

    def distinct(self) -> list[int]:
        return sorted(set(self.masks))

    def traces(self, subset_mask: int) -> int:
        if len(self.ground) <= 64:
            return kernels.count_traces(self.masks, subset_mask)
        return len({m & subset_mask for m in self.masks})

    def to_json(self) -> dict:
        return {"ground": [list(map(str, p)) if isinstance(p, tuple) else str(p) for p in self.ground],
                "sets": [self.set_indices(k) for k in range(len(self.masks))]}


def _mask(idx) -> int:
    m = 0
    for i in idx:
        m |= 1 << i
    return m


def vc_dimension(sys: SetSystem) -> int:
    """Largest size of a shattered subset, by level-wise search over shattered sets.

    Shattering is hereditary, so candidates of size ``d+1`` are built only
    from shattered sets of size ``d`` whose every ``d``-subset is shattered.
    """
    masks = sys.distinct()
    n = len(sys.ground)
    level = {0}
    d = 0
    while level and (1 << (d + 1)) <= len(masks):
        nxt = set()
        for s in sorted(level):
            top = s.bit_length()
            for e in range(top, n):
                t = s | (1 << e)
                # every d-subset of t must already be shattered
                ok = all((t & ~(1 << j)) in level for j in range(n) if t >> j & 1 and j != e)
                if ok and sys.traces(t) == 1 << (d + 1):
                    nxt.add(t)
        if not nxt:
            break
        level = nxt
        d += 1
    return d


def shatter_function(sys: SetSystem, n: int) -> int:
    """``max |F cap B|`` over ``n``-subsets ``B`` of the ground set."""
    g = len(sys.ground)
    if not 0 <= n <= g:
        raise ValueError(f"n must lie in [0, {g}]")
    if n == 0:
        return 1
    return max(sys.traces(_mask(c)) for c in combinations(range(g), n))


def sauer_shelah_bound(n: int, d: int) -> int:
    return sum(math.comb(n, i) for i in range(d + 1))


def _vc_bound(sys: SetSystem, vc_dim) -> int:
    if vc_dim is not None:
        return int(vc_dim)
    if len(sys.ground) <= 25:
        return vc_dimension(sys)
    # |F| >= 2^d for any shattered set of size d
    return max(0, len(sys.distinct()).bit_length() - 1)


def approximation_size(eps: Fraction, d: int, constant=1) -> int:
    """``ceil(C * d * (1/eps)^2 * log(2/eps))`` with ``d`` floored at 1."""
    eps = Fraction(eps)
    return max(1, math.ceil(float(constant) * max(d, 1) * float(1 / eps) ** 2 * math.log(float(2 / eps))))


def _check_measure(m: AtomicMeasure, sys: SetSystem):
    if len(m) != len(sys.ground):
        raise ValueError("measure support must be the ground set, index for index")


@dataclass
class Approximation:
    sample: tuple
    max_error: Fraction
    size: int
    bound: int
    attempts: int

    def __iter__(self):
        return iter(self.sample)

    def __len__(self):
        return len(self.sample)


def approximation_error(m: AtomicMeasure, sys: SetSystem, sample: Sequence[int]) -> Fraction:
    nums, den = m.int_weights()
    counts = [0] * len(sys.ground)
    for i in sample:
        counts[i] += 1
    n = len(sample)
    worst = Fraction(0)
    for s in sys.distinct():
        mass = Fraction(sum(nums[i] for i in range(len(nums)) if s >> i & 1), den)
        av = Fraction(sum(counts[i] for i in range(len(counts)) if s >> i & 1), n)
        worst = max(worst, abs(mass - av))
    return worst


def epsilon_approximation(m: AtomicMeasure, sys: SetSystem, eps, seed: int = 0, constant=1,
                          retries: int = 8, vc_dim=None) -> Approximation:
    """Seeded sample whose empirical averages are within ``eps`` of ``m`` on every set."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    _check_measure(m, sys)
    d = _vc_bound(sys, vc_dim)
    bound = approximation_size(eps, d, constant)
    nums, _ = m.int_weights()
    size = bound
    for attempt in range(retries + 1):
        rng = derive_rng(seed, "approx", attempt)
        sample = tuple(rng.choices(range(len(nums)), weights=nums, k=size))
        err = approximation_error(m, sys, sample)
        if err <= eps:
            return Approximation(sample, err, size, bound, attempt + 1)
        size *= 2
    raise NetConstructionError(f"no {eps}-approximation after {retries + 1} attempts; "
                               "the sample constant is too small")


@dataclass
class Net:
    indices: tuple
    method: str
    bound: int
    attempts: int

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def heavy_sets(m: AtomicMeasure, sys: SetSystem, eps) -> list[int]:
    nums, den = m.int_weights()
    eps = Fraction(eps)
    out = []
    for s in sys.distinct():
        tot = sum(nums[i] for i in range(len(nums)) if s >> i & 1)
        if Fraction(tot, den) > eps:
            out.append(s)
    return out


def is_net(m: AtomicMeasure, sys: SetSystem, eps, net: Sequence[int]) -> bool:
    nm = _mask(net)
    return all(s & nm for s in heavy_sets(m, sys, eps))


def _greedy_hitting_set(heavy: list[int], n: int) -> list[int]:
    left = list(heavy)
    chosen = []
    while left:
        best, best_cnt = -1, 0
        for i in range(n):
            bit = 1 << i
            c = sum(1 for s in left if s & bit)
            if c > best_cnt:
                best, best_cnt = i, c
        chosen.append(best)
        bit = 1 << best
        left = [s for s in left if not s & bit]
    return sorted(chosen)


def _prune(picked: list[int], heavy: list[int]) -> list[int]:
    """Drop elements whose removal keeps every heavy set hit."""
    keep = list(picked)
    for i in list(picked):
        trial = _mask(j for j in keep if j != i)
        if all(s & trial for s in heavy):
            keep.remove(i)
    return keep


def epsilon_net(m: AtomicMeasure, sys: SetSystem, eps, seed: int = 0, constant=1,
                retries: int = 8, vc_dim=None) -> Net:
    """A subset of the ground meeting every set of ``m``-mass greater than ``eps``.

    Tries seeded samples of sizes 1, 2, 4, ... up to the approximation bound,
    then falls back to a deterministic greedy hitting set.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    _check_measure(m, sys)
    heavy = heavy_sets(m, sys, eps)
    n = len(sys.ground)
    if not heavy:
        return Net((), "empty", 0, 0)
    d = _vc_bound(sys, vc_dim)
    bound = approximation_size(eps, d, constant)
    nums, _ = m.int_weights()
    size, attempt = 1, 0
    while size <= bound and attempt <= retries:
        rng = derive_rng(seed, "net", attempt)
        picked = sorted(set(rng.choices(range(n), weights=nums, k=size)))
        pm = _mask(picked)
        attempt += 1
        if all(s & pm for s in heavy):
            return Net(tuple(_prune(picked, heavy)), "sample", bound, attempt)
        size *= 2
    picked = _greedy_hitting_set(heavy, n)
    if len(picked) > max(bound, 1) or not all(s & _mask(picked) for s in heavy):
        raise NetConstructionError("greedy hitting set exceeds the sample bound")
    return Net(tuple(picked), "greedy", bound, attempt + 1)
