"""Point-line incidences over finite fields.

Points of ``F_q^2`` are indexed ``x*q + y`` and non-vertical lines
``y = a*x + b`` are indexed ``a*q + b``.  Field elements are integers whose
base-``p`` digits are coefficients of a polynomial reduced modulo the first
monic irreducible of degree ``e`` in lexicographic order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .rng import derive_seed, parallel_map

DEFAULT_Q_CAP = 128


def prime_power(q: int) -> tuple[int, int]:
    """``(p, e)`` with ``q = p**e``, or ValueError."""
    q = int(q)
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _digits(v: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(v % p)
        v //= p
    return out


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by monic ``m`` over ``F_p`` (ascending coefficients)."""
    a = list(a)
    d = len(m) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] % p
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * m[j]) % p
    return [x % p for x in a[:d]] + [0] * max(0, d - len(a))


def _irreducible(p: int, e: int) -> list[int]:
    """First monic irreducible of degree ``e`` over ``F_p``, by trial division."""
    for low in itertools.product(range(p), repeat=e):
        f = list(reversed(low)) + [1]
        if f[0] == 0:
            continue
        ok = True
        for d in range(1, e // 2 + 1):
            for g_low in itertools.product(range(p), repeat=d):
                g = list(g_low) + [1]
                if not any(_poly_mod(f, g, p)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f
    raise AssertionError("no irreducible polynomial found")


class Field:
    def __init__(self, q: int):
        self.q = q
        self.p, self.e = prime_power(q)
        p, e = self.p, self.e
        if e == 1:
            self.modulus = [0, 1]
            r = np.arange(q)
            self.add = (r[:, None] + r[None, :]) % q
            self.mul = (r[:, None] * r[None, :]) % q
        else:
            self.modulus = _irreducible(p, e)
            digs = [_digits(v, p, e) for v in range(q)]
            enc = lambda ds: sum(c * p ** i for i, c in enumerate(ds))
            self.add = np.array([[enc([(x + y) % p for x, y in zip(digs[a], digs[b])])
                                  for b in range(q)] for a in range(q)])
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    prod = [0] * (2 * e - 1)
                    for i, x in enumerate(digs[a]):
                        if x:
                            for j, y in enumerate(digs[b]):
                                prod[i + j] += x * y
                    mul[a, b] = mul[b, a] = enc(_poly_mod(prod, self.modulus, p))
            self.mul = mul
        self.add = self.add.astype(np.int64)
        self.mul = self.mul.astype(np.int64)

    def subspace(self, dim: int) -> list[int]:
        """The additive subgroup spanned by the first ``dim`` basis monomials."""
        return list(range(self.p ** dim))

    def subfield(self, d: int) -> list[int] | None:
        """Elements of the subfield of order ``p**d`` (fixed points of ``x -> x^(p^d)``)."""
        if self.e % d:
            return None
        out = []
        for x in range(self.q):
            y = x
            for _ in range(d):
                y = self.pow(y, self.p)
            if y == x:
                out.append(x)
        return out

    def pow(self, x: int, n: int) -> int:
        r = 1
        for _ in range(n):
            r = int(self.mul[r, x])
        return r


@dataclass
class IncidenceInstance:
    q: int
    p: int
    e: int
    gf: Field = field(repr=False)
    line_points: np.ndarray = field(repr=False)   # (q^2, q) point indices on each line
    point_lines: np.ndarray = field(repr=False)   # (q^2, q) lines through each point
    incidences: int = 0

    @property
    def n_points(self) -> int:
        return self.q * self.q

    @property
    def n_lines(self) -> int:
        return self.q * self.q

    def count_incidences(self, P0, L1) -> int:
        lmask = np.zeros(self.n_lines, dtype=bool)
        lmask[list(L1)] = True
        P0 = list(P0)
        if not P0:
            return 0
        return int(lmask[self.point_lines[P0]].sum())

    def free_lines(self, P0) -> list[int]:
        """Lines meeting no point of ``P0``."""
        hit = np.zeros(self.n_lines, dtype=bool)
        P0 = list(P0)
        if P0:
            hit[self.point_lines[P0].ravel()] = True
        return np.flatnonzero(~hit).tolist()

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "e": self.e, "points": self.n_points,
                "lines": self.n_lines, "incidences": self.incidences,
                "modulus": self.gf.modulus}


def build_incidence(q: int, cap: int = DEFAULT_Q_CAP) -> IncidenceInstance:
    p, e = prime_power(q)
    if q > cap:
        raise ValueError(f"q = {q} exceeds the configured cap {cap}")
    F = Field(q)
    a = np.repeat(np.arange(q), q)          # line index a*q + b
    b = np.tile(np.arange(q), q)
    xs = np.arange(q)
    ys = F.add[F.mul[a][:, xs], b[:, None]]  # y = a*x + b, shape (q^2, q)
    line_points = (xs[None, :] * q + ys).astype(np.int32)
    point_lines = [[] for _ in range(q * q)]
    for line in range(q * q):
        for pt in line_points[line]:
            point_lines[pt].append(line)
    point_lines = np.array(point_lines, dtype=np.int32)
    inst = IncidenceInstance(q, p, e, F, line_points, point_lines, int(line_points.size))
    # the four identities
    assert inst.n_points == q * q and inst.n_lines == q * q
    assert line_points.shape == (q * q, q) and all(len(set(r)) == q for r in line_points.tolist())
    assert point_lines.shape == (q * q, q)
    assert inst.incidences == q ** 3
    return inst


@dataclass
class CSCheck:
    holds: bool
    incidences: int
    lhs: int      # I^2
    rhs: int      # |L1| * (I + |P0|^2)

    @property
    def margin(self) -> int:
        return self.rhs - self.lhs

    def to_json(self) -> dict:
        return {"holds": self.holds, "incidences": self.incidences, "lhs": self.lhs,
                "rhs": self.rhs, "margin": self.margin}


def cs_bound_holds(inst: IncidenceInstance, P0, L1) -> CSCheck:
    """``I(P0, L1) <= sqrt(|L1|) * sqrt(I(P0, L1) + |P0|^2)``, compared after squaring."""
    P0, L1 = list(P0), list(L1)
    I = inst.count_incidences(P0, L1)
    lhs = I * I
    rhs = len(L1) * (I + len(P0) ** 2)
    return CSCheck(lhs <= rhs, I, lhs, rhs)


def contradiction_holds(q: int, delta0: Fraction) -> bool:
    """``(d q^3)^2 > (1 - d) q^2 (d q^3 + d^2 q^4)`` for ``d = delta0``."""
    d = Fraction(delta0)
    return (d * q ** 3) ** 2 > (1 - d) * q ** 2 * (d * q ** 3 + d * d * q ** 4)


def contradiction_threshold(p: int, k: int, max_exp: int = 256) -> int:
    """Smallest power ``q`` of ``p`` at which ``delta0 = 1/p^k`` is impossible."""
    p_, e = prime_power(p)
    if e != 1:
        raise ValueError("p must be prime")
    if k < 1:
        raise ValueError("k must be positive")
    d = Fraction(1, p ** k)
    for j in range(1, max_exp + 1):
        if contradiction_holds(p ** j, d):
            return p ** j
    raise ValueError("no threshold below the scan limit")


# --------------------------------------------------------------------------
# searching for incidence-free pairs


@dataclass
class FreePair:
    delta: Fraction
    P0: list
    L0: list
    strategy: str

    def to_json(self) -> dict:
        return {"delta": f"{self.delta.numerator}/{self.delta.denominator}",
                "strategy": self.strategy, "P0": self.P0, "L0": self.L0,
                "size_P0": len(self.P0), "size_L0": len(self.L0)}


def _pair_from_points(inst, P0, strategy) -> FreePair:
    """Best pair for a fixed ``P0``: all free lines, trimmed to a balanced size."""
    P0 = sorted(P0)
    L0 = inst.free_lines(P0)
    m = min(len(P0), len(L0))
    return FreePair(Fraction(m, inst.n_points), P0[:m], L0[:m], strategy)


def _strategy_product(inst, budget, seed) -> FreePair:
    F = inst.gf
    q = inst.q
    sets = [F.subspace(d) for d in range(inst.e + 1)]
    for d in range(1, inst.e):
        sf = F.subfield(d)
        if sf is not None:
            sets.append(sf)
    best = FreePair(Fraction(0), [], [], "product")
    for X in sets:
        for Y in sets:
            P0 = [x * q + y for x in X for y in Y]
            cand = _pair_from_points(inst, P0, "product")
            if cand.delta > best.delta:
                best = cand
    return best


def _strategy_greedy(inst, budget, seed) -> FreePair:
    """Add the point closing the fewest free lines; keep the best prefix."""
    npts = inst.n_points
    covered = np.zeros(inst.n_lines, dtype=bool)
    inP = np.zeros(npts, dtype=bool)
    order = []
    best_val, best_len = 0, 0
    for step in range(npts):
        dmg = np.where(inP, np.iinfo(np.int64).max, (~covered[inst.point_lines]).sum(axis=1))
        p = int(np.argmin(dmg))
        inP[p] = True
        order.append(p)
        covered[inst.point_lines[p]] = True
        val = min(step + 1, int((~covered).sum()))
        if val > best_val:
            best_val, best_len = val, step + 1
        if int((~covered).sum()) <= best_val:
            break
    return _pair_from_points(inst, order[:best_len], "greedy")


def _strategy_local(inst, budget, seed) -> FreePair:
    val, mask = kernels.biclique_local_search(inst.line_points, inst.point_lines, budget,
                                              derive_seed(seed, "ffield", inst.q))
    P0 = np.flatnonzero(mask).tolist()
    pair = _pair_from_points(inst, P0, "local_search")
    assert pair.delta * inst.n_points >= val
    return pair


EXHAUSTIVE_MAX_POINTS = 16


def _strategy_exhaustive(inst, budget, seed) -> FreePair | None:
    """Exact optimum: the best line side for ``P0`` is every free line."""
    npts = inst.n_points
    if npts > EXHAUSTIVE_MAX_POINTS:
        return None
    lmask = [sum(1 << int(l) for l in inst.point_lines[p]) for p in range(npts)]
    full = (1 << inst.n_lines) - 1
    union = [0] * (1 << npts)
    best_val, best_mask = 0, 0
    for m in range(1, 1 << npts):
        low = m & -m
        union[m] = union[m ^ low] | lmask[low.bit_length() - 1]
        val = min(m.bit_count(), (full & ~union[m]).bit_count())
        if val > best_val:
            best_val, best_mask = val, m
    P0 = [p for p in range(npts) if best_mask >> p & 1]
    pair = _pair_from_points(inst, P0, "exhaustive")
    assert pair.delta * npts == best_val
    return pair


STRATEGIES = {"product": _strategy_product, "greedy": _strategy_greedy,
              "local_search": _strategy_local, "exhaustive": _strategy_exhaustive}
DEFAULT_STRATEGIES = ("exhaustive", "product", "greedy", "local_search")


@dataclass
class SearchReport:
    q: int
    best: FreePair
    per_strategy: dict
    cs: CSCheck

    def to_json(self) -> dict:
        return {"q": self.q, "best": self.best.to_json(), "cs": self.cs.to_json(),
                "per_strategy": {k: (None if v is None else f"{v.delta.numerator}/{v.delta.denominator}")
                                 for k, v in self.per_strategy.items()}}


def max_homogeneous_fraction(inst: IncidenceInstance, strategies=DEFAULT_STRATEGIES,
                             budget: int = 2000, seed: int = 0) -> SearchReport:
    """Largest ``delta`` found with ``I(P0, L0)`` empty and ``|P0| = |L0| = delta q^2``.

    Strategies run in a fixed schedule; the first one reaching the maximum wins.
    """
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    found = parallel_map(lambda s: STRATEGIES[s](inst, budget, seed), list(strategies))
    per = dict(zip(strategies, found))
    best = None
    for s in strategies:
        f = per[s]
        if f is not None and (best is None or f.delta > best.delta):
            best = f
    assert inst.count_incidences(best.P0, best.L0) == 0, "reported pair has incidences"
    # all incidences of P0 land on lines outside L0
    rest = sorted(set(range(inst.n_lines)) - set(inst.free_lines(best.P0)))
    cs = cs_bound_holds(inst, best.P0, rest)
    assert cs.holds
    return SearchReport(inst.q, best, per, cs)
