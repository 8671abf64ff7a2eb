"""Chambers on the real line: root points and the open intervals between them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exactnum import AlgebraicNumber, Order, compare, isolate_roots, rational_between, sort_algebraic
from ..structures import as_point

NEG_INF = AlgebraicNumber.neg_inf()
POS_INF = AlgebraicNumber.pos_inf()


def _alg(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, tuple):
        (x,) = x
    return AlgebraicNumber.rational(Fraction(x))


class Interval:
    """An open interval ``(lo, hi)`` or a single point ``{lo}`` of the line."""

    dim_space = 1
    __slots__ = ("lo", "hi", "is_point", "provenance", "_witness")

    def __init__(self, lo: AlgebraicNumber, hi: AlgebraicNumber, is_point: bool = False,
                 provenance: tuple = ()):
        self.lo = lo
        self.hi = hi
        self.is_point = is_point
        self.provenance = provenance
        self._witness = None

    @classmethod
    def point(cls, a: AlgebraicNumber, provenance: tuple = ()) -> "Interval":
        return cls(a, a, True, provenance)

    @property
    def dim(self) -> int:
        return 0 if self.is_point else 1

    def contains(self, x) -> bool:
        a = _alg(x)
        if self.is_point:
            return compare(a, self.lo) == Order.EQ
        return compare(self.lo, a) == Order.LT and compare(a, self.hi) == Order.LT

    def witness(self):
        """A point of the chamber: rational for open intervals, the point itself otherwise."""
        if self.is_point:
            return self.lo
        if self._witness is None:
            self._witness = rational_between(self.lo, self.hi)
        return self._witness

    def __repr__(self):
        if self.is_point:
            return f"{{{self.lo!r}}}"
        return f"({self.lo!r}, {self.hi!r})"

    def to_json(self) -> dict:
        return {"kind": "point" if self.is_point else "open",
                "lo": self.lo.to_json(), "hi": self.hi.to_json(),
                "provenance": [list(p) for p in self.provenance]}


@dataclass
class Profile:
    """Truth pattern of ``phi(x, b)`` along the line for one parameter ``b``."""

    roots: list          # distinct real roots of the atoms at b, increasing
    at_root: list        # truth at each root
    between: list        # truth on each open gap; len(roots) + 1 entries
    degenerate: bool     # some atom vanishes identically at b

    @property
    def constant(self) -> bool:
        vals = set(self.at_root) | set(self.between)
        return len(vals) <= 1


def _merge_roots(polys, degree_cap):
    found = []
    for p in polys:
        if p.is_zero() or p.degree == 0:
            continue
        found.extend(r for r, _ in isolate_roots(p, degree_cap=degree_cap))
    found = sort_algebraic(found)
    out = []
    for r in found:
        if not out or compare(out[-1], r) != Order.EQ:
            out.append(r)
    return out


def profile(R, b) -> Profile:
    key = ("profile", as_point(b))
    hit = R._cache.get(key)
    if hit is not None:
        return hit
    polys = R.univariate_atoms(b)
    roots = _merge_roots(polys, R.degree_cap)
    ends = [NEG_INF] + roots + [POS_INF]
    between = [R.holds(rational_between(ends[i], ends[i + 1]), b) for i in range(len(roots) + 1)]
    at_root = [R.truth_at_algebraic(r, b) for r in roots]
    hit = Profile(roots, at_root, between, any(p.is_zero() for p in polys))
    R._cache[key] = hit
    return hit


class Decomposition1D(list):
    """Chambers ``gap0, point0, gap1, ..., point_{m-1}, gap_m`` of the line.

    Chamber ``2i`` is the open gap left of boundary ``i`` and ``2i+1`` is
    boundary ``i`` itself.
    """

    def __init__(self, boundaries, provenance, degenerate):
        self.boundaries = boundaries
        self.degenerate = degenerate
        ends = [NEG_INF] + boundaries + [POS_INF]
        cells = []
        for i in range(len(boundaries) + 1):
            prov = tuple(p for p in (provenance[i - 1] if i else None,
                                     provenance[i] if i < len(boundaries) else None) if p)
            cells.append(Interval(ends[i], ends[i + 1], False, prov))
            if i < len(boundaries):
                cells.append(Interval.point(boundaries[i], (provenance[i],)))
        super().__init__(cells)

    def position(self, x) -> tuple[int, bool]:
        """``(i, on)``: ``x`` equals boundary ``i`` if ``on``, else lies in gap ``i``."""
        a = _alg(x)
        lo, hi = 0, len(self.boundaries)
        while lo < hi:
            mid = (lo + hi) // 2
            c = compare(a, self.boundaries[mid])
            if c == Order.EQ:
                return mid, True
            if c == Order.LT:
                hi = mid
            else:
                lo = mid + 1
        return lo, False

    def locate(self, x) -> int:
        i, on = self.position(x)
        return 2 * i + 1 if on else 2 * i


def decompose_1d(R, S) -> Decomposition1D:
    tagged = []
    degenerate = []
    for si, s in enumerate(S):
        prof = profile(R, s)
        if prof.degenerate:
            degenerate.append(si)
        for ri, r in enumerate(prof.roots):
            tagged.append((r, (si, ri)))
    tagged = sort_algebraic(tagged, key=lambda t: t[0])
    bounds, prov = [], []
    for r, tag in tagged:
        if bounds and compare(bounds[-1], r) == Order.EQ:
            continue
        bounds.append(r)
        prov.append(tag)
    return Decomposition1D(bounds, prov, degenerate)


def _values_inside(prof: Profile, lo: AlgebraicNumber, hi: AlgebraicNumber) -> set:
    """Truth values ``phi(., b)`` takes on the open interval ``(lo, hi)``."""
    inside = [i for i, r in enumerate(prof.roots)
              if compare(lo, r) == Order.LT and compare(r, hi) == Order.LT]
    if not inside:
        # the whole interval sits in one gap of the profile
        for j, r in enumerate(prof.roots):
            if compare(lo, r) == Order.LT:
                return {prof.between[j]}
        return {prof.between[len(prof.roots)]}
    i0, i1 = inside[0], inside[-1]
    vals = {prof.between[i0], prof.between[i1 + 1]}
    vals.update(prof.at_root[i0:i1 + 1])
    vals.update(prof.between[i0 + 1:i1 + 1])
    return vals


def crosses_1d(C: Interval, R, b) -> bool:
    if C.is_point:
        return False
    return len(_values_inside(profile(R, b), C.lo, C.hi)) > 1


def value_on_1d(C: Interval, R, b) -> bool:
    """Truth of ``phi(x, b)`` on a chamber ``b`` does not cross."""
    if C.is_point:
        return R.truth_at_algebraic(C.lo, b)
    return R.holds(C.witness(), b)


def crossing_matrix_1d(dec: Decomposition1D, R, B) -> np.ndarray:
    """Boolean ``(len(dec), len(B))`` matrix of crossings."""
    out = np.zeros((len(dec), len(B)), dtype=bool)
    nb = len(dec.boundaries)
    for j, b in enumerate(B):
        prof = profile(R, b)
        if prof.constant:
            continue
        # group the roots of b by the gap of the decomposition they fall in
        gaps: dict[int, list[int]] = {}
        for i, r in enumerate(prof.roots):
            g, on = dec.position(r)
            if not on:
                gaps.setdefault(g, []).append(i)
        for g, idx in gaps.items():
            i0, i1 = idx[0], idx[-1]
            vals = {prof.between[i0], prof.between[i1 + 1]}
            vals.update(prof.at_root[i0:i1 + 1])
            vals.update(prof.between[i0 + 1:i1 + 1])
            if len(vals) > 1:
                out[2 * g, j] = True
    assert out.shape[0] == 2 * nb + 1
    return out
