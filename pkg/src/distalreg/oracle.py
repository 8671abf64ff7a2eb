"""Brute-force ground truth.

Everything here enumerates pairs or tuples and calls ``structures.evaluate``;
nothing is shared with the algorithms being checked.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .structures import AtomicMeasure, HyperRelation, as_point, evaluate

POSITIVE = "POSITIVE"
NEGATIVE = "NEGATIVE"
CROSSED = "CROSSED"


class OracleBudgetError(ValueError):
    """The instance is too large for exhaustive enumeration."""


def fingerprint(*parts) -> str:
    h = hashlib.blake2b(digest_size=12)
    h.update(repr(parts).encode())
    return h.hexdigest()


@dataclass
class OracleReport:
    claim: str
    fingerprint: str
    passed: bool
    polarity: str | None = None
    checked: int = 0
    vacuous: bool = False
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"claim": self.claim, "fingerprint": self.fingerprint, "passed": self.passed,
                "polarity": self.polarity, "checked": self.checked, "vacuous": self.vacuous,
                "witnesses": self.witnesses}


def _tuples_polarity(values) -> tuple[str, int, list]:
    seen_true = seen_false = None
    n = 0
    for t, v in values:
        n += 1
        if v and seen_true is None:
            seen_true = t
        if not v and seen_false is None:
            seen_false = t
        if seen_true is not None and seen_false is not None:
            return CROSSED, n, [list(map(str, seen_true)), list(map(str, seen_false))]
    return (NEGATIVE if seen_true is None and n else POSITIVE), n, []


def verify_homogeneous(R, A0, B0) -> OracleReport:
    """Polarity of ``A0 x B0`` by evaluating every pair; empty sides count as POSITIVE."""
    A0 = [as_point(a) for a in A0]
    B0 = [as_point(b) for b in B0]
    fp = fingerprint("pair", A0, B0)
    if not A0 or not B0:
        return OracleReport("homogeneous_pair", fp, True, POSITIVE, 0, vacuous=True)
    vals = ((a + b, evaluate(R, a, b)) for a in A0 for b in B0)
    pol, n, wit = _tuples_polarity(vals)
    return OracleReport("homogeneous_pair", fp, pol != CROSSED, pol, n, witnesses=wit)


def verify_box(R: HyperRelation, sides) -> OracleReport:
    """Polarity of a product of 1D point lists under a k-ary relation."""
    sides = [[as_point(p) for p in s] for s in sides]
    fp = fingerprint("box", sides)
    if any(not s for s in sides):
        return OracleReport("homogeneous_box", fp, True, POSITIVE, 0, vacuous=True)
    vals = ((sum(t, ()), evaluate(R, sum(t, ()))) for t in itertools.product(*sides))
    pol, n, wit = _tuples_polarity(vals)
    return OracleReport("homogeneous_box", fp, pol != CROSSED, pol, n, witnesses=wit)


def _longest_run(mask: np.ndarray) -> tuple[int, int]:
    """``(length, start)`` of the longest run of True values."""
    if not mask.any():
        return 0, 0
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    d = np.diff(padded)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    lens = ends - starts
    k = int(np.argmax(lens))
    return int(lens[k]), int(starts[k])


@dataclass
class IntervalPair:
    delta: Fraction
    A: list
    B: list
    polarity: str


def best_interval_pair(R, A, B, cap: int = 200) -> IntervalPair:
    """Best homogeneous (interval of A) x (interval of B), scored by the smaller side fraction."""
    if len(A) > cap or len(B) > cap:
        raise OracleBudgetError(f"interval enumeration capped at {cap} points per side")
    A = sorted(as_point(a) for a in A)
    B = sorted(as_point(b) for b in B)
    n, m = len(A), len(B)
    T = np.array([[evaluate(R, a, b) for b in B] for a in A], dtype=bool)
    best = IntervalPair(Fraction(0), [], [], POSITIVE)
    for i in range(n):
        all_t = np.ones(m, dtype=bool)
        all_f = np.ones(m, dtype=bool)
        for j in range(i, n):
            all_t &= T[j]
            all_f &= ~T[j]
            lt, st = _longest_run(all_t)
            lf, sf = _longest_run(all_f)
            if max(lt, lf) == 0:
                break
            frac_a = Fraction(j - i + 1, n)
            for length, start, pol in ((lt, st, POSITIVE), (lf, sf, NEGATIVE)):
                score = min(frac_a, Fraction(length, m))
                if score > best.delta:
                    best = IntervalPair(score, A[i:j + 1], B[start:start + length], pol)
            if Fraction(max(lt, lf), m) <= best.delta:
                break  # runs only shrink as the A-interval grows
    return best


def _as_measure_list(measures, k):
    if isinstance(measures, AtomicMeasure):
        return [measures] * k
    return list(measures)


def brute_defect(parts, R, measures) -> Fraction:
    """Total product mass of the non-homogeneous parts.

    ``parts`` are rectangles given as per-coordinate lists of support
    indices; ``measures`` are the coordinate measures (or one shared measure).
    """
    k = len(parts[0]) if parts else 0
    ms = _as_measure_list(measures, k)
    total = Fraction(0)
    for sides in parts:
        pts = [[ms[i].points[j] for j in s] for i, s in enumerate(sides)]
        if any(not p for p in pts):
            continue
        if k == 2 and not isinstance(R, HyperRelation):
            rep = verify_homogeneous(R, pts[0], pts[1])
        else:
            rep = verify_box(R, pts)
        if rep.polarity == CROSSED:
            mass = Fraction(1)
            for i, s in enumerate(sides):
                mass *= sum((ms[i].weights[j] for j in s), Fraction(0))
            total += mass
    return total


def exists_homogeneous_of_size(R, A, B, s: int, cap: int = 14):
    """Exact search for a homogeneous ``A0 x B0`` with ``|A0| = |B0| = s``.

    Returns ``(found, witness)`` with the witness ``(A0, B0, polarity)`` or None.
    """
    if len(A) > cap or len(B) > cap:
        raise OracleBudgetError(f"subset enumeration capped at {cap} points per side")
    A = [as_point(a) for a in A]
    B = [as_point(b) for b in B]
    if s == 0:
        return True, ([], [], POSITIVE)
    if s > len(A) or s > len(B):
        return False, None
    T = [[evaluate(R, a, b) for b in B] for a in A]
    for combo in itertools.combinations(range(len(A)), s):
        for pol, want in ((POSITIVE, True), (NEGATIVE, False)):
            cols = [j for j in range(len(B)) if all(T[i][j] == want for i in combo)]
            if len(cols) >= s:
                return True, ([A[i] for i in combo], [B[j] for j in cols[:s]], pol)
    return False, None

