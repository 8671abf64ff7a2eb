"""Homogeneous pairs and boxes: cutting-based extraction and density amplification.

Masses are exact rationals throughout, and every returned pair or box is
checked pair by pair (tuple by tuple) with the oracle before it is handed
back.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import oracle
from .cells import build_cutting, crosses, value_on
from .exactnum import format_rational as fr
from .oracle import NEGATIVE, POSITIVE
from .rng import derive_seed
from .structures import AtomicMeasure, HyperRelation, PiecewiseUniform1D, ProductMeasure, as_point

DEFAULT_BETA = Fraction(1, 4)


class DensityPreconditionError(ValueError):
    """The relation is sparser than the requested density."""


def _frac_json(x):
    if isinstance(x, tuple):
        return [fr(v) for v in x]
    return fr(x)


@dataclass
class HomogeneousPair:
    polarity: str
    A: list | None             # indices into the x-side support (None for continuous measures)
    B: list                    # indices into the y-side support
    mass_A: Fraction | tuple   # exact, or a rational enclosure for continuous measures
    mass_B: Fraction
    guarantee_A: Fraction
    guarantee_B: Fraction
    chamber: object = None
    B_condition: str = ""
    cutting_size: int = 0
    r: Fraction | None = None
    size_S: int = 0
    budget: float = 0.0
    verified: bool = False
    checked: int = 0
    rounds: int = 0
    trace: list = field(default_factory=list)
    epsilon: Fraction | None = None
    alpha: Fraction | None = None
    omega: Fraction | None = None
    round_cap: int | None = None

    def to_json(self) -> dict:
        out = {"polarity": self.polarity,
               "A": self.A, "B": self.B,
               "mass_A": _frac_json(self.mass_A), "mass_B": fr(self.mass_B),
               "guarantee_A": fr(self.guarantee_A), "guarantee_B": fr(self.guarantee_B),
               "B_condition": self.B_condition, "cutting_size": self.cutting_size,
               "verified": self.verified, "pairs_checked": self.checked}
        if self.chamber is not None:
            out["chamber"] = self.chamber.to_json()
        if self.r is not None:
            out.update(r=fr(self.r), size_S=self.size_S, budget_floor=math.floor(self.budget))
        if self.epsilon is not None:
            out.update(epsilon=fr(self.epsilon), alpha=fr(self.alpha), omega=fr(self.omega),
                       rounds=self.rounds, round_cap=self.round_cap, trace=self.trace)
        return out


def _chamber_masses(dec, mu):
    """Per-chamber mass of ``mu`` and, for atomic ``mu``, each support point's chamber."""
    n = len(dec)
    if isinstance(mu, AtomicMeasure):
        nums, den = mu.int_weights()
        where = [dec.locate(p if len(p) > 1 else p[0]) for p in mu.points]
        tot = [0] * n
        for i, c in enumerate(where):
            tot[c] += nums[i]
        return [Fraction(t, den) for t in tot], where
    if isinstance(mu, PiecewiseUniform1D):
        out = []
        for C in dec:
            if C.is_point:
                out.append((Fraction(0), Fraction(0)))
            else:
                out.append(mu.mass_bounds(C.lo, C.hi))
        return out, None
    raise TypeError(f"unsupported x-side measure {type(mu).__name__}")


def eh_pair(R, mu, nu: AtomicMeasure, beta=DEFAULT_BETA, seed: int = 0, K=16,
            net_constant=1) -> HomogeneousPair:
    """A homogeneous pair ``(C0 cap supp mu, B0)`` from a ``1/r``-cutting with ``r = 1/(1 - 2 beta)``.

    ``C0`` is the heaviest chamber (first in decomposition order on ties).
    The parameters not crossing ``C0`` split into those containing ``C0`` and
    those missing it; the heavier class wins, POSITIVE on ties.
    """
    beta = Fraction(beta)
    if not 0 < beta < Fraction(1, 2):
        raise ValueError("beta must lie in (0, 1/2)")
    r = 1 / (1 - 2 * beta)
    params = list(nu.points)
    cut = build_cutting(R, params, nu, r, seed=derive_seed(seed, "eh_pair"), K=K,
                        net_constant=net_constant)
    dec = cut.chambers
    n = len(dec)
    masses, where = _chamber_masses(dec, mu)
    key = [m[0] if isinstance(m, tuple) else m for m in masses]
    c0 = max(range(n), key=lambda i: (key[i], -i))
    C0 = dec[c0]
    crossing = set(cut.crossings[c0])
    inside, outside = [], []
    for j, b in enumerate(params):
        if j in crossing:
            continue
        (inside if value_on(C0, R, b) else outside).append(j)
    m_in, m_out = nu.mass(inside), nu.mass(outside)
    if m_in >= m_out:
        polarity, B0, cond = POSITIVE, inside, "chamber inside phi(M, b)"
    else:
        polarity, B0, cond = NEGATIVE, outside, "chamber disjoint from phi(M, b)"
    mass_B = nu.mass(B0)
    assert mass_B >= beta, "parameter side lighter than beta"
    guarantee_A = Fraction(1, n)
    pair = HomogeneousPair(polarity, None, B0, masses[c0], mass_B, guarantee_A, beta, C0, cond,
                           n, r, len(cut.S), cut.budget)
    if where is not None:
        pair.A = [i for i, c in enumerate(where) if c == c0]
        assert pair.mass_A >= guarantee_A, "heaviest chamber lighter than 1/|cutting|"
        rep = oracle.verify_homogeneous(R, [mu.points[i] for i in pair.A], [params[j] for j in B0])
        assert rep.polarity == polarity or rep.vacuous, "extracted pair is not homogeneous"
        pair.verified, pair.checked = True, rep.checked
    else:
        assert masses[c0][1] >= guarantee_A, "heaviest chamber lighter than 1/|cutting|"
        # continuous side: homogeneity means no B0 parameter crosses C0 and the value matches
        ok = all(not crosses(C0, R, params[j]) and value_on(C0, R, params[j]) == (polarity == POSITIVE)
                 for j in B0)
        assert ok, "extracted pair is not homogeneous"
        pair.verified, pair.checked = True, len(B0)
    return pair


def _counting(points):
    pts = [as_point(p) for p in points]
    counts = Counter(pts)
    distinct = list(dict.fromkeys(pts))
    m = AtomicMeasure(distinct, [Fraction(counts[p], len(pts)) for p in distinct])
    return pts, distinct, m


@dataclass
class CountingPair:
    pair: HomogeneousPair
    A: list          # indices into the original A list
    B: list
    delta_realized: Fraction

    def to_json(self) -> dict:
        return {"pair": self.pair.to_json(), "A": self.A, "B": self.B,
                "size_A": len(self.A), "size_B": len(self.B),
                "delta_realized": fr(self.delta_realized)}


def eh_pair_counting(R, A, B, beta=DEFAULT_BETA, seed: int = 0, **kw) -> CountingPair:
    """``eh_pair`` under counting measures; repeated points carry their multiplicity."""
    if not A or not B:
        raise ValueError("both sides must be nonempty")
    a_pts, a_dist, mu = _counting(A)
    b_pts, b_dist, nu = _counting(B)
    pair = eh_pair(R, mu, nu, beta, seed, **kw)
    a_sel = {a_dist[i] for i in pair.A}
    b_sel = {b_dist[j] for j in pair.B}
    A0 = [i for i, p in enumerate(a_pts) if p in a_sel]
    B0 = [j for j, p in enumerate(b_pts) if p in b_sel]
    delta = min(Fraction(len(A0), len(a_pts)), Fraction(len(B0), len(b_pts)))
    return CountingPair(pair, A0, B0, delta)


# --------------------------------------------------------------------------
# density amplification


def sqrt_upper(x: Fraction, bits: int = 20) -> Fraction:
    """A rational ``s >= sqrt(x)``, strictly below 1 when ``x < 1``."""
    x = Fraction(x)
    while True:
        scale = 1 << bits
        t = math.isqrt(x.numerator * scale * scale // x.denominator)
        while t * t * x.denominator < x.numerator * scale * scale:
            t += 1
        s = Fraction(t, scale)
        if x >= 1 or s < 1:
            return s
        bits *= 2


class _Weights:
    """Exact edge and mass sums over index subsets of two atomic measures."""

    def __init__(self, R, mu: AtomicMeasure, nu: AtomicMeasure):
        self.wa, self.da = mu.int_weights()
        self.wb, self.db = nu.int_weights()
        self.T = np.array([[R.holds(a, b) for b in nu.points] for a in mu.points], dtype=bool)
        self.wb_obj = np.array(self.wb, dtype=object)

    def mass_a(self, A) -> int:
        return sum(self.wa[i] for i in A)

    def mass_b(self, B) -> int:
        return sum(self.wb[j] for j in B)

    def density(self, A, B) -> Fraction:
        ma, mb = self.mass_a(A), self.mass_b(B)
        if ma == 0 or mb == 0:
            return Fraction(0)
        sub = self.T[np.ix_(A, B)].astype(object)
        rows = sub.dot(self.wb_obj[B]) if len(B) else np.zeros(len(A), dtype=object)
        edges = sum(int(self.wa[i]) * int(v) for i, v in zip(A, rows))
        return Fraction(edges, ma * mb)


def density_pair(R, mu: AtomicMeasure, nu: AtomicMeasure, alpha, beta=DEFAULT_BETA, seed: int = 0,
                 K=16, net_constant=1, max_rounds: int = 10_000) -> HomogeneousPair:
    """A POSITIVE pair inside a relation of product density at least ``alpha``.

    Each round extracts a homogeneous pair on the current rectangle.  A
    NEGATIVE pair is traded for a sub-rectangle whose density grows by the
    factor ``1/(1 - delta^2)``; a POSITIVE pair ends the run.  The returned
    guarantee is ``epsilon = delta_last * prod(h)``.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    W = _Weights(R, mu, nu)
    A, B = list(range(len(mu))), list(range(len(nu)))
    omega = W.density(A, B)
    if omega < alpha:
        raise DensityPreconditionError(f"density {omega} is below alpha = {alpha}")
    hs: list[Fraction] = []
    deltas: list[Fraction] = []
    trace = []
    for rnd in range(max_rounds):
        cur = W.density(A, B)
        mA, mB = mu.restrict(A), nu.restrict(B)
        pair = eh_pair(R, mA, mB, beta, derive_seed(seed, "density", rnd), K, net_constant)
        delta = min(Fraction(1, pair.cutting_size), Fraction(beta))
        deltas.append(delta)
        A0 = [A[i] for i in pair.A]
        B0 = [B[j] for j in pair.B]
        step = {"round": rnd, "density": fr(cur), "delta": fr(delta), "polarity": pair.polarity,
                "size_A": len(A), "size_B": len(B)}
        if pair.polarity == POSITIVE:
            trace.append(step)
            break
        assert cur <= 1 - delta * delta, "NEGATIVE pair inside a rectangle of density above 1 - delta^2"
        a0 = Fraction(W.mass_a(A0), W.mass_a(A))
        b0 = Fraction(W.mass_b(B0), W.mass_b(B))
        s = sqrt_upper(1 - cur)
        mirrored = a0 > s
        d_prime = cur * delta / ((1 + delta) * s)
        assert 0 < d_prime < 1
        d = 1 - d_prime
        h = min(delta, d_prime, 1 - s)
        assert h > 0
        inA0, inB0 = set(A0), set(B0)
        A1 = [i for i in A if i not in inA0]
        B1 = [j for j in B if j not in inB0]
        small_other = a0 if mirrored else b0
        target = cur / (1 - delta * delta)
        if small_other <= d:
            case = 1
            best, best_d = None, Fraction(-1)
            for cand in ((A0, B1), (A1, B0), (A1, B1)):
                if W.mass_a(cand[0]) == 0 or W.mass_b(cand[1]) == 0:
                    continue
                dd = W.density(*cand)
                if dd > best_d:
                    best, best_d = cand, dd
            newA, newB = best
        else:
            case = 2
            newA, newB = (A, B1) if mirrored else (A1, B)
        new = W.density(newA, newB)
        ra = Fraction(W.mass_a(newA), W.mass_a(A))
        rb = Fraction(W.mass_b(newB), W.mass_b(B))
        assert new >= target, "density failed to grow by 1/(1 - delta^2)"
        assert ra >= h and rb >= h, "a side shrank below the factor h"
        hs.append(h)
        step.update(case=case, mirrored=mirrored, h=fr(h), d_prime=fr(d_prime), new_density=fr(new))
        trace.append(step)
        A, B = newA, newB
    else:
        raise AssertionError("density iteration exceeded its cap")
    n_grow = len(hs)
    d_min = min(deltas)
    assert (1 - d_min * d_min) ** n_grow >= omega, "more rounds than the density bound allows"
    eps = deltas[-1] * math.prod(hs, start=Fraction(1))
    mass_A, mass_B = mu.mass(A0), nu.mass(B0)
    assert 0 < eps <= mass_A and eps <= mass_B
    rep = oracle.verify_homogeneous(R, [mu.points[i] for i in A0], [nu.points[j] for j in B0])
    assert rep.polarity == POSITIVE and not rep.vacuous
    out = HomogeneousPair(POSITIVE, A0, B0, mass_A, mass_B, eps, eps, pair.chamber,
                          pair.B_condition, pair.cutting_size, pair.r, pair.size_S, pair.budget,
                          True, rep.checked, len(deltas), trace, eps, alpha, omega,
                          density_round_cap(omega, d_min))
    assert out.rounds <= out.round_cap
    return out


def density_round_cap(alpha, delta) -> int:
    """``ceil(log(1/alpha) / log(1/(1 - delta^2))) + 1``."""
    alpha, delta = Fraction(alpha), Fraction(delta)
    if alpha >= 1:
        return 1
    return math.ceil(math.log(1 / alpha) / -math.log1p(-float(delta * delta))) + 1


# --------------------------------------------------------------------------
# hypergraphs


def product_density(H: HyperRelation, factors) -> Fraction:
    """Exact ``omega(R)`` under the product of atomic coordinate measures."""
    acc = H.truth_tensor([m.points for m in factors]).astype(object)
    den = 1
    for m in reversed(factors):
        nums, d = m.int_weights()
        acc = acc.dot(np.array(nums, dtype=object))
        den *= d
    return Fraction(int(acc), den)


@dataclass
class HomogeneousBox:
    polarity: str
    sides: list          # per coordinate, indices into that coordinate's support
    masses: list
    epsilon: Fraction
    alpha: Fraction
    verified: bool = False
    checked: int = 0
    levels: list = field(default_factory=list)

    @property
    def delta_realized(self) -> Fraction:
        return min(self.masses)

    def to_json(self) -> dict:
        return {"polarity": self.polarity, "sides": self.sides,
                "masses": [fr(m) for m in self.masses], "epsilon": fr(self.epsilon),
                "alpha": fr(self.alpha), "delta_realized": fr(self.delta_realized),
                "verified": self.verified, "tuples_checked": self.checked, "levels": self.levels}


def _factors(omega) -> list:
    fs = list(omega.factors) if isinstance(omega, ProductMeasure) else list(omega)
    for m in fs:
        if not isinstance(m, AtomicMeasure) or m.dim != 1:
            raise TypeError("box extraction needs one-dimensional atomic coordinate measures")
    return fs


def density_box(H: HyperRelation, omega, alpha, beta=DEFAULT_BETA, seed: int = 0, K=16,
                net_constant=1, _verify: bool = True) -> HomogeneousBox:
    """Sets ``A_i`` of mass at least ``epsilon`` with ``prod A_i`` inside ``R``.

    ``x0`` is paired against the remaining coordinates; the parameters that
    survive define the residual ``R'(x1, ...) = AND_{a in A0} R(a, x1, ...)``,
    which is dense enough to recurse on.
    """
    fs = _factors(omega)
    k = H.arity
    if k < 2 or len(fs) != k:
        raise ValueError("need arity >= 2 and one measure per coordinate")
    alpha = Fraction(alpha)
    rest = fs[1] if k == 2 else ProductMeasure(fs[1:]).as_atomic()
    res = density_pair(H.binary(), fs[0], rest, alpha, beta, derive_seed(seed, "box", k), K,
                       net_constant)
    level = {"arity": k, "alpha": fr(alpha), "epsilon": fr(res.epsilon), "rounds": res.rounds}
    eps_here = res.epsilon
    if k == 2:
        sides, eps, levels = [res.A, res.B], eps_here, [level]
    else:
        a_vals = [fs[0].points[i][0] for i in res.A]
        residual = H.fix_first(a_vals)
        alpha_sub = product_density(residual, fs[1:])
        assert alpha_sub >= res.mass_B >= eps_here
        sub = density_box(residual, fs[1:], alpha_sub, beta, seed, K, net_constant, _verify=False)
        sides = [res.A] + sub.sides
        eps = min(eps_here, sub.epsilon)
        levels = [level] + sub.levels
    masses = [fs[i].mass(s) for i, s in enumerate(sides)]
    assert all(m >= eps for m in masses) and eps > 0
    box = HomogeneousBox(POSITIVE, sides, masses, eps, alpha, levels=levels)
    if _verify:
        rep = oracle.verify_box(H, [[fs[i].points[j] for j in s] for i, s in enumerate(sides)])
        assert rep.polarity == POSITIVE and not rep.vacuous, "box is not inside the relation"
        box.verified, box.checked = True, rep.checked
    return box


def eh_box(H: HyperRelation, omega, beta=DEFAULT_BETA, seed: int = 0, K=16,
           net_constant=1) -> HomogeneousBox:
    """A homogeneous box for ``R`` or its complement, whichever has density at least 1/2."""
    fs = _factors(omega)
    w = product_density(H, fs)
    half = Fraction(1, 2)
    if w >= half:
        box = density_box(H, fs, half, beta, seed, K, net_constant)
    else:
        box = density_box(H.negate(), fs, half, beta, seed, K, net_constant)
        box.polarity = NEGATIVE
    rep = oracle.verify_box(H, [[fs[i].points[j] for j in s] for i, s in enumerate(box.sides)])
    assert rep.polarity == box.polarity and not rep.vacuous, "box is not homogeneous"
    box.verified, box.checked = True, rep.checked
    assert box.delta_realized >= box.epsilon
    return box
