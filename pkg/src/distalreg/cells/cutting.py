"""1/r-cuttings built from nets over crossing sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..exactnum import format_rational
from ..rng import derive_seed
from ..structures import PLANE_LINES, SEMIALG_1D, AtomicMeasure, as_point
from ..vc import SetSystem, epsilon_net
from .interval1d import Interval, crosses_1d, crossing_matrix_1d, decompose_1d, value_on_1d
from .planar import crosses_by_witness, crossing_matrix_planar, decompose_planar, value_on_planar


def decompose(R, S):
    """S-complete chambers partitioning the object space."""
    S = [as_point(s) for s in S]
    if R.backend == SEMIALG_1D:
        return decompose_1d(R, S)
    if R.backend == PLANE_LINES:
        return decompose_planar(R, S)
    raise ValueError(f"unknown backend {R.backend!r}")


def crosses(C, R, b) -> bool:
    b = as_point(b)
    if isinstance(C, Interval):
        return crosses_1d(C, R, b)
    return crosses_by_witness(C, R, b)


def crossing_set(C, R, B) -> list[int]:
    return [j for j, b in enumerate(B) if crosses(C, R, b)]


def crossing_matrix(dec, R, B) -> np.ndarray:
    B = [as_point(b) for b in B]
    if R.backend == SEMIALG_1D:
        return crossing_matrix_1d(dec, R, B)
    return crossing_matrix_planar(dec, R, B)


def value_on(C, R, b) -> bool:
    """Truth value of ``phi(., b)`` on a chamber that ``b`` does not cross."""
    b = as_point(b)
    if isinstance(C, Interval):
        return value_on_1d(C, R, b)
    return value_on_planar(C, R, b)


def cutting_budget(r, K=16) -> float:
    r = float(r)
    return K * r * r * math.log(2 * r)


@dataclass
class Cutting:
    chambers: list
    crossings: list            # per chamber, sorted indices into B
    crossing_mass: list        # per chamber, exact nu-mass of its crossing set
    r: Fraction
    S: tuple                   # indices into B
    budget: float
    rounds: int
    degenerate: list = field(default_factory=list)

    @property
    def max_crossing_mass(self) -> Fraction:
        return max(self.crossing_mass, default=Fraction(0))

    def __len__(self):
        return len(self.chambers)

    def to_json(self) -> dict:
        return {
            "r": format_rational(self.r),
            "S": list(self.S),
            "size_S": len(self.S),
            "budget_floor": math.floor(self.budget),
            "within_budget": len(self.S) <= self.budget,
            "rounds": self.rounds,
            "degenerate_parameters": list(self.degenerate),
            "max_crossing_mass": format_rational(self.max_crossing_mass),
            "chambers": [dict(C.to_json(), crossing=list(cs), crossing_count=len(cs),
                              crossing_mass=format_rational(m))
                         for C, cs, m in zip(self.chambers, self.crossings, self.crossing_mass)],
        }


def build_cutting(R, B, nu: AtomicMeasure | None = None, r=2, seed: int = 0, K=16,
                  net_constant=1, retries: int = 8) -> Cutting:
    """A 1/r-cutting: chambers of ``decompose(R, S)`` each crossed by nu-mass at most ``1/r``.

    ``S`` grows by rounds.  Each round takes the crossing sets of the
    current chambers and adds a ``1/r``-net of them, which hits every heavy
    chamber and therefore splits it.  The loop stops once no chamber is
    heavy, so the cutting property holds exactly on return.
    """
    B = [as_point(b) for b in B]
    r = Fraction(r)
    if r <= 1:
        raise ValueError("r must exceed 1")
    if nu is None and B:
        nu = AtomicMeasure.uniform(B)
    if B and len(nu) != len(B):
        raise ValueError("nu must be supported on B, index for index")
    eps = 1 / r
    nums, den = nu.int_weights() if B else ([], 1)
    chosen: list[int] = []
    rounds = 0
    while True:
        dec = decompose(R, [B[i] for i in chosen])
        M = crossing_matrix(dec, R, B) if B else np.zeros((len(dec), 0), dtype=bool)
        sets = [np.flatnonzero(row).tolist() for row in M]
        masses = [Fraction(sum(nums[j] for j in s), den) for s in sets]
        if all(m <= eps for m in masses):
            break
        rounds += 1
        heavy = [s for s, m in zip(sets, masses) if m > eps]
        net = epsilon_net(nu, SetSystem(range(len(B)), heavy), eps,
                          seed=derive_seed(seed, "cutting", rounds),
                          constant=net_constant, retries=retries)
        new = [i for i in net.indices if i not in chosen]
        assert new, "net failed to split a heavy chamber"
        chosen = sorted(set(chosen) | set(new))
    cut = Cutting(dec, sets, masses, r, tuple(chosen), cutting_budget(r, K), rounds,
                  list(getattr(dec, "degenerate", [])))
    assert cut.max_crossing_mass <= eps
    return cut
