"""Rectangular regularity partitions, vertex partitions and equipartitions.

Parts are boxes given by per-coordinate sets of support indices.  Each
refinement round replaces every non-homogeneous box ``X`` by a homogeneous
box ``Y`` from ``eh_box`` plus the telescoping remainder

    X_1 x ... x X_{i-1} x (X_i minus Y_i) x Y_{i+1} x ... x Y_k,   i = 1..k,

which partitions ``X`` exactly.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactnum import format_rational as fr
from .ramsey import DEFAULT_BETA, eh_box
from .rng import derive_seed, parallel_map
from .structures import SEMIALG_1D, AtomicMeasure, HyperRelation, Relation


def as_hyper(R) -> HyperRelation:
    if isinstance(R, HyperRelation):
        return R
    if isinstance(R, Relation) and R.backend == SEMIALG_1D and R.y_arity == 1 and not R.z_arity:
        return HyperRelation(2, R.formula, R.degree_cap)
    raise TypeError("regularity needs a relation on the real line")


def _measures(measures, k) -> list[AtomicMeasure]:
    ms = [measures] * k if isinstance(measures, AtomicMeasure) else list(measures)
    if len(ms) != k or any(not isinstance(m, AtomicMeasure) or m.dim != 1 for m in ms):
        raise ValueError("need one 1D atomic measure per coordinate")
    return ms


class _Grid:
    """Truth tensor and integer weights over the product of supports."""

    def __init__(self, H: HyperRelation, ms: list[AtomicMeasure]):
        self.H = H
        self.ms = ms
        self.T = H.truth_tensor([m.points for m in ms])
        self.w = [m.int_weights() for m in ms]

    def mass(self, sides) -> Fraction:
        out = Fraction(1)
        for (nums, den), s in zip(self.w, sides):
            out *= Fraction(sum(nums[j] for j in s), den)
        return out

    def polarity(self, sides) -> str | None:
        """``"POSITIVE"``, ``"NEGATIVE"`` or None for a crossed (or empty) box."""
        if any(not s for s in sides):
            return None
        sub = self.T[np.ix_(*sides)]
        if sub.all():
            return "POSITIVE"
        if not sub.any():
            return "NEGATIVE"
        return None


@dataclass
class RectPart:
    sides: tuple                  # per coordinate, sorted tuple of support indices
    polarity: str | None          # None when not homogeneous
    mass: Fraction
    origin: str = "initial"

    @property
    def homogeneous(self) -> bool:
        return self.polarity is not None

    def to_json(self) -> dict:
        return {"sides": [list(s) for s in self.sides], "homogeneous": self.homogeneous,
                "polarity": self.polarity, "mass": fr(self.mass), "origin": self.origin}


@dataclass
class RectPartition:
    parts: list
    k: int
    dd: Fraction
    rounds: int = 0
    trace: list = field(default_factory=list)
    params: list = field(default_factory=list)     # one entry per refined part: (round, part index)
    pieces: list = field(default_factory=list)     # every coordinate piece ever created
    size_ledger: int = 1                           # parts including pruned zero-mass ones
    pruned: int = 0
    delta_min: Fraction | None = None
    grid: object = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"k": self.k, "defect": fr(self.dd), "rounds": self.rounds,
                "parts": [p.to_json() for p in self.parts],
                "size": len(self.parts), "size_with_pruned": self.size_ledger,
                "pruned": self.pruned, "parameters": len(self.params),
                "delta_min": None if self.delta_min is None else fr(self.delta_min),
                "trace": self.trace}


def _defect(parts) -> Fraction:
    return sum((p.mass for p in parts if not p.homogeneous), Fraction(0))


def _check_partition(parts, old: RectPart):
    """The new parts tile ``old`` exactly: product counts add up and boxes are disjoint."""
    total = sum(math.prod(len(s) for s in p.sides) for p in parts)
    assert total == math.prod(len(s) for s in old.sides), "telescoping split lost or repeated tuples"
    for i, p in enumerate(parts):
        for s, t in zip(p.sides, old.sides):
            assert set(s) <= set(t)
        for q in parts[i + 1:]:
            assert any(not set(s) & set(t) for s, t in zip(p.sides, q.sides)), "overlapping parts"


def _split(grid: _Grid, X: RectPart, Y: list[tuple]) -> list[RectPart]:
    k = len(X.sides)
    boxes = [tuple(Y)]
    for i in range(k):
        inY = set(Y[i])
        rest = tuple(j for j in X.sides[i] if j not in inY)
        boxes.append(X.sides[:i] + (rest,) + tuple(Y[i + 1:]))
    out = []
    for n, b in enumerate(boxes):
        out.append(RectPart(b, grid.polarity(b), grid.mass(b), "box" if n == 0 else f"telescope{n}"))
    return out


def _refine_part(grid: _Grid, X: RectPart, seed, beta, K, net_constant):
    local = [m.restrict(s) for m, s in zip(grid.ms, X.sides)]
    box = eh_box(grid.H, local, beta, seed, K, net_constant)
    Y = [tuple(sorted(X.sides[i][j] for j in box.sides[i])) for i in range(len(X.sides))]
    ratio = min(Fraction(sum(grid.w[i][0][j] for j in Y[i]), sum(grid.w[i][0][j] for j in X.sides[i]))
                for i in range(len(Y)))
    assert ratio >= box.epsilon
    return Y, ratio, box.polarity


def refine_once(P: RectPartition, R, measures, seed: int = 0, beta=DEFAULT_BETA, K=16,
                net_constant=1, _grid: _Grid | None = None) -> RectPartition:
    H = as_hyper(R)
    k = H.arity
    grid = _grid or _Grid(H, _measures(measures, k))
    bad = [i for i, p in enumerate(P.parts) if not p.homogeneous]
    if not bad:
        return P
    rnd = P.rounds + 1
    results = parallel_map(
        lambda i: _refine_part(grid, P.parts[i], derive_seed(seed, "regularity", rnd, i), beta, K,
                               net_constant), bad)
    new_parts, pieces = [], list(P.pieces)
    params = list(P.params)
    ledger = P.size_ledger
    pruned = P.pruned
    deltas = []
    by_index = dict(zip(bad, results))
    for i, X in enumerate(P.parts):
        if i not in by_index:
            new_parts.append(X)
            continue
        Y, ratio, pol = by_index[i]
        deltas.append(ratio)
        params.append((rnd, i))
        split = _split(grid, X, Y)
        assert split[0].polarity == pol, "eh_box output is not homogeneous on the grid"
        _check_partition([p for p in split], X)
        ledger += len(split) - 1
        for p in split:
            if p.mass == 0:
                pruned += 1
                continue
            new_parts.append(p)
            for c, s in enumerate(p.sides):
                pieces.append((c, s))
    delta = min(deltas)
    dd = _defect(new_parts)
    assert dd <= (1 - delta ** k) * P.dd, "defect did not shrink by 1 - delta^k"
    assert len(new_parts) <= (k + 1) * len(P.parts) and ledger <= (k + 1) * P.size_ledger
    trace = P.trace + [{"round": rnd, "defect": fr(dd), "parts": len(new_parts),
                        "delta": fr(delta), "refined": len(bad)}]
    dmin = delta if P.delta_min is None else min(P.delta_min, delta)
    return RectPartition(new_parts, k, dd, rnd, trace, params, pieces, ledger, pruned, dmin)


def _initial(grid: _Grid, k) -> RectPartition:
    full = tuple(tuple(range(len(m))) for m in grid.ms)
    part = RectPart(full, grid.polarity(full), Fraction(1))
    pieces = [(c, s) for c, s in enumerate(full)]
    return RectPartition([part], k, _defect([part]), 0,
                         [{"round": 0, "defect": fr(_defect([part])), "parts": 1}], [], pieces)


def regularity_round_cap(eps, delta, k) -> int:
    """``ceil(log eps / log(1 - delta^k))``."""
    q = float(Fraction(delta) ** k)
    if q >= 1:
        return 1
    return max(1, math.ceil(math.log(float(eps)) / math.log1p(-q)))


def regularity_partition(R, measures, eps, seed: int = 0, beta=DEFAULT_BETA, K=16,
                         net_constant=1, max_rounds: int = 10_000) -> RectPartition:
    """Refine until the defect is at most ``eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    H = as_hyper(R)
    k = H.arity
    grid = _Grid(H, _measures(measures, k))
    P = _initial(grid, k)
    P.grid = grid
    if eps >= 1:
        return P
    while P.dd > eps:
        if P.rounds >= max_rounds:
            raise AssertionError("regularity iteration exceeded its cap")
        P = refine_once(P, H, None, seed, beta, K, net_constant, _grid=grid)
    n = P.rounds
    if n:
        # the defect exceeded eps before the last round
        assert (1 - P.delta_min ** k) ** (n - 1) > eps, "more rounds than the defect bound allows"
        assert n <= regularity_round_cap(eps, P.delta_min, k)
    assert len(P.parts) <= (k + 1) ** n and P.size_ledger <= (k + 1) ** n
    assert len(P.params) <= (k + 1) ** n
    P.grid = grid
    return P


# --------------------------------------------------------------------------
# vertex partitions


@dataclass
class VertexPartition:
    parts: list              # lists of support indices
    masses: list
    nonhomogeneous_mass: Fraction
    pieces: int
    rect: RectPartition | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"parts": self.parts, "masses": [fr(m) for m in self.masses],
               "count": len(self.parts), "nonhomogeneous_mass": fr(self.nonhomogeneous_mass),
               "pieces": self.pieces}
        if self.rect is not None:
            out["rect"] = {"defect": fr(self.rect.dd), "rounds": self.rect.rounds,
                           "size": len(self.rect.parts), "trace": self.rect.trace}
        out.update(self.extra)
        return out


def _tuple_mass(T, groups, weights, k) -> Fraction:
    """Mass of non-homogeneous tuples of groups; ``weights`` are exact group masses."""
    total = Fraction(0)
    for combo in itertools.product(range(len(groups)), repeat=k):
        sub = T[np.ix_(*[groups[c] for c in combo])]
        if sub.any() and not sub.all():
            total += math.prod((weights[c] for c in combo), start=Fraction(1))
    return total


def vertex_partition(R, mu: AtomicMeasure, eps, seed: int = 0, beta=DEFAULT_BETA, K=16,
                     net_constant=1) -> VertexPartition:
    """Atoms of the boolean algebra generated by every coordinate piece of the rectangular partition."""
    H = as_hyper(R)
    k = H.arity
    P = regularity_partition(H, [mu] * k, eps, seed, beta, K, net_constant)
    grid = P.grid
    pieces = sorted({frozenset(s) for _, s in P.pieces}, key=lambda s: (len(s), sorted(s)))
    sig: dict[tuple, list[int]] = {}
    for j in range(len(mu)):
        sig.setdefault(tuple(j in s for s in pieces), []).append(j)
    atoms = sorted(sig.values())
    assert len(atoms) <= 2 ** len(pieces)
    # refinement: every atom lies inside or outside each side, and grid cells tile the parts
    owner = {}
    for pi, part in enumerate(P.parts):
        inside = []
        for s in part.sides:
            ss = set(s)
            inside.append([a for a, at in enumerate(atoms) if set(at) <= ss])
            for at in atoms:
                assert set(at) <= ss or not set(at) & ss, "atom straddles a part side"
        for cell in itertools.product(*inside):
            assert cell not in owner, "grid cell in two parts"
            owner[cell] = pi
    assert len(owner) == len(atoms) ** k, "grid cells not covered by the partition"
    masses = [mu.mass(at) for at in atoms]
    bad = _tuple_mass(grid.T, atoms, masses, k)
    assert bad <= P.dd <= Fraction(eps)
    extra = {"type_bound": 2 ** len(pieces) if len(pieces) < 64 else f"2^{len(pieces)}"}
    if Fraction(eps) < 1 and len(atoms) > 1:
        extra["size_exponent"] = f"{math.log(len(atoms)) / math.log(1 / float(eps)):.6f}"
    return VertexPartition(atoms, masses, bad, len(pieces), P, extra)


# --------------------------------------------------------------------------
# cutting finite sets and equipartition


@dataclass
class Prefix:
    """The condition ``x < threshold`` (``None`` thresholds mean minus/plus infinity)."""

    threshold: Fraction | None
    unbounded: str               # "none", "empty" or "all"
    indices: list

    def holds(self, x) -> bool:
        if self.unbounded == "empty":
            return False
        if self.unbounded == "all":
            return True
        return Fraction(x) < self.threshold

    def to_json(self) -> dict:
        t = {"empty": "-inf", "all": "+inf"}.get(self.unbounded)
        return {"condition": "x < t", "t": t if t else fr(self.threshold), "count": len(self.indices)}


def cut_finite_set(A, m: int, backend: str = SEMIALG_1D) -> Prefix:
    """``x < t`` selecting exactly the ``m`` smallest points of ``A``."""
    if backend != SEMIALG_1D:
        raise ValueError("cutting finite sets needs the ordered backend")
    vals = [Fraction(a[0] if isinstance(a, tuple) else a) for a in A]
    if not 0 <= m <= len(vals):
        raise ValueError("m must lie in [0, |A|]")
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    if m == 0:
        return Prefix(None, "empty", [])
    if m == len(vals):
        return Prefix(None, "all", sorted(order))
    lo, hi = vals[order[m - 1]], vals[order[m]]
    if lo == hi:
        raise ValueError("tied values: no threshold selects exactly m points")
    t = (lo + hi) / 2
    return Prefix(t, "none", sorted(order[:m]))


@dataclass
class Equipartition:
    parts: list              # per part, list of (support index, sub-atom count)
    K: int
    K_prime: int
    delta: Fraction
    masses: list
    nonhomogeneous_mass: Fraction
    subatoms_per_point: int
    vertex: VertexPartition

    @property
    def spread(self) -> Fraction:
        return max(self.masses) - min(self.masses)

    def to_json(self) -> dict:
        return {"K": self.K, "K_prime": self.K_prime, "delta": fr(self.delta),
                "subatoms_per_point": self.subatoms_per_point,
                "parts": [[[i, c] for i, c in p] for p in self.parts],
                "masses": sorted({fr(m) for m in self.masses}),
                "spread": fr(self.spread), "nonhomogeneous_mass": fr(self.nonhomogeneous_mass),
                "vertex_parts": len(self.vertex.parts),
                "vertex_nonhomogeneous_mass": fr(self.vertex.nonhomogeneous_mass)}


def equipartition(R, mu: AtomicMeasure, eps, delta=None, seed: int = 0, beta=DEFAULT_BETA, K=16,
                  net_constant=1) -> Equipartition:
    """Parts of mass ``1/K'`` each (within ``delta``) with few non-homogeneous tuples.

    The uniform measure on ``P`` is made atom-free by splitting each point
    into ``g`` sub-atoms at integer positions ``i*g + j``; chunks of ``c``
    consecutive sub-atoms then weigh exactly ``1/K'``.
    """
    H = as_hyper(R)
    k = H.arity
    eps = Fraction(eps)
    n = len(mu)
    if set(mu.weights) != {Fraction(1, n)}:
        raise ValueError("equipartition expects the uniform counting measure")
    vp = vertex_partition(H, mu, eps / 2, seed, beta, K, net_constant)
    Kparts = len(vp.parts)
    Kp = math.ceil(4 * 2 ** k * Kparts / eps)
    delta = Fraction(1, 2 * Kp) if delta is None else Fraction(delta)
    if not 0 < delta < Fraction(1, Kp):
        raise ValueError("delta must lie in (0, 1/K')")
    g = Kp // math.gcd(n, Kp)
    c = n // math.gcd(n, Kp)
    N = n * g
    assert N % Kp == 0 and N // Kp == c
    rank = sorted(range(n), key=lambda i: mu.points[i][0])
    pos = {i: r for r, i in enumerate(rank)}

    def subatoms(points):
        return sorted(pos[i] * g + j for i in points for j in range(g))

    def slice_off(atoms):
        chunks = []
        while len(atoms) >= c:
            pre = cut_finite_set(atoms, c)
            chunks.append([atoms[t] for t in pre.indices])
            taken = set(pre.indices)
            atoms = [a for t, a in enumerate(atoms) if t not in taken]
        return chunks, atoms

    chunks, pool = [], []
    for V in vp.parts:
        ch, rem = slice_off(subatoms(V))
        chunks += ch
        pool += rem
    ch, T = slice_off(sorted(pool))
    chunks += ch
    assert not T, "sub-atom count is a multiple of the chunk size"
    assert len(chunks) == Kp
    parts = []
    for ch in chunks:
        cnt = Counter(rank[a // g] for a in ch)
        parts.append(sorted(cnt.items()))
    masses = [Fraction(sum(ct for _, ct in p), N) for p in parts]
    target = Fraction(1, Kp)
    assert all(abs(m - target) <= delta for m in masses)
    # group chunks by underlying point set; tuples of groups carry multiplicity
    groups = Counter(tuple(i for i, _ in p) for p in parts)
    keys = list(groups)
    weights = [Fraction(groups[key], Kp) for key in keys]
    bad = _tuple_mass(vp.rect.grid.T, [list(key) for key in keys], weights, k)
    assert bad <= eps, "non-homogeneous tuple mass exceeds eps"
    return Equipartition(parts, Kparts, Kp, delta, masses, bad, g, vp)
