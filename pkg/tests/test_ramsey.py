import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from distalreg import oracle
from distalreg.ramsey import (DensityPreconditionError, density_box, density_pair, density_round_cap,
                              eh_box, eh_pair, eh_pair_counting, product_density, sqrt_upper)
from distalreg.rng import derive_seed
from distalreg.structures import PiecewiseUniform1D, evaluate, relation_from_json
from tests.helpers import formula_rel, hyper, random_deg2, random_points, uniform

F = Fraction


def pts(m, idx):
    return [m.points[i] for i in idx]


def exact_density(R, mu, nu):
    return sum((wa * wb for a, wa in zip(mu.points, mu.weights)
                for b, wb in zip(nu.points, nu.weights) if evaluate(R, a, b)), F(0))


def test_eh_pair_thresholds(lt):
    mu = nu = uniform(range(1, 101))
    pair = eh_pair(lt, mu, nu, F(1, 4), seed=0)
    rep = oracle.verify_homogeneous(lt, pts(mu, pair.A), pts(nu, pair.B))
    assert rep.polarity == pair.polarity and not rep.vacuous and pair.verified
    assert nu.mass(pair.B) >= F(1, 4)
    assert mu.mass(pair.A) >= F(1, pair.cutting_size)


@pytest.mark.parametrize("value,polarity", [(False, "NEGATIVE"), (True, "POSITIVE")])
def test_eh_pair_constant_relations(value, polarity):
    R = formula_rel({"const": value})
    mu = nu = uniform(range(10))
    pair = eh_pair(R, mu, nu)
    assert pair.cutting_size == 1 and pair.polarity == polarity
    assert pair.mass_A == 1 and pair.mass_B == 1


def test_eh_pair_rejects_bad_beta(lt):
    with pytest.raises(ValueError):
        eh_pair(lt, uniform([1]), uniform([2]), F(1, 2))


def test_eh_pair_continuous_object_measure(parab):
    mu = PiecewiseUniform1D([-4, 0, 4], [F(1, 16), F(3, 16)])
    nu = uniform(range(0, 16))
    pair = eh_pair(parab, mu, nu, seed=3)
    lo, hi = pair.mass_A
    assert lo <= hi and lo >= pair.guarantee_A
    assert nu.mass(pair.B) >= F(1, 4)
    # every chosen parameter is constant on the chamber, with the claimed value
    for j in pair.B:
        b = nu.points[j]
        w = pair.chamber.witness()
        truth = parab.truth_at_algebraic(w, b) if hasattr(w, "kind") else evaluate(parab, w, b)
        assert truth == (pair.polarity == "POSITIVE")


def test_counting_examples(lt):
    one = eh_pair_counting(lt, [3], [4])
    assert one.delta_realized == 1 and one.pair.polarity == "POSITIVE"
    res = eh_pair_counting(lt, list(range(1, 21)), list(range(1, 21)))
    assert F(len(res.B), 20) >= F(1, 4)
    rep = oracle.verify_homogeneous(lt, res.A and [list(range(1, 21))[i] for i in res.A],
                                    [list(range(1, 21))[j] for j in res.B])
    assert rep.polarity == res.pair.polarity


def test_counting_with_multiplicity(lt):
    A = [1, 1, 1, 5, 9]
    B = [2, 2, 7, 7, 7, 10]
    res = eh_pair_counting(lt, A, B)
    rep = oracle.verify_homogeneous(lt, [A[i] for i in res.A], [B[j] for j in res.B])
    assert rep.polarity == res.pair.polarity
    assert F(len(res.B), len(B)) >= F(1, 4)


@given(st.integers(0, 2 ** 32))
def test_counting_random_deg2_verified(seed):
    rng = random.Random(seed)
    R = random_deg2(rng)
    A, B = random_points(rng, 50), random_points(rng, 50)
    res = eh_pair_counting(R, A, B, seed=seed)
    rep = oracle.verify_homogeneous(R, [A[i] for i in res.A], [B[j] for j in res.B])
    assert rep.polarity == res.pair.polarity and not rep.vacuous
    assert 4 * len(res.B) >= len(B)
    assert len(res.A) * res.pair.cutting_size >= len(A)


@given(st.integers(0, 2 ** 32))
def test_counting_cross_validates_with_exact_search(seed):
    rng = random.Random(seed)
    R = random_deg2(rng)
    A, B = random_points(rng, 10), random_points(rng, 10)
    res = eh_pair_counting(R, A, B, seed=seed)
    s = min(len(res.A), len(res.B))
    found, wit = oracle.exists_homogeneous_of_size(R, A, B, s)
    assert found
    assert oracle.verify_homogeneous(R, wit[0], wit[1]).polarity == wit[2]


def test_planar_pair(above):
    rng = random.Random(11)
    A = rng.sample([(x, y) for x in range(-8, 9) for y in range(-8, 9)], 40)
    B = rng.sample([(a, c) for a in range(-3, 4) for c in range(-8, 9)], 40)
    res = eh_pair_counting(above, A, B, seed=2)
    rep = oracle.verify_homogeneous(above, [A[i] for i in res.A], [B[j] for j in res.B])
    assert rep.polarity == res.pair.polarity
    assert 4 * len(res.B) >= 40


def test_eh_pair_is_deterministic(lt):
    rng = random.Random(5)
    A, B = random_points(rng, 60), random_points(rng, 60)
    assert eh_pair_counting(lt, A, B, seed=9).to_json() == eh_pair_counting(lt, A, B, seed=9).to_json()


# --- density ----------------------------------------------------------------

def test_sqrt_upper():
    for x in (F(0), F(1, 2), F(2, 3), F(99, 100), F(1)):
        s = sqrt_upper(x)
        assert s * s >= x and s <= 1
        assert s - F(1, 2 ** 18) < 0 or (s - F(1, 2 ** 18)) ** 2 < x


def test_density_total_relation_returns_full():
    R = formula_rel({"const": True})
    mu = nu = uniform(range(5))
    pair = density_pair(R, mu, nu, 1)
    assert pair.rounds == 1 and pair.mass_A == 1 and pair.mass_B == 1


def test_density_thresholds(lt):
    mu = nu = uniform(range(1, 61))
    alpha = exact_density(lt, mu, nu)
    assert alpha == F(59, 120)
    pair = density_pair(lt, mu, nu, alpha, seed=1)
    rep = oracle.verify_homogeneous(lt, pts(mu, pair.A), pts(nu, pair.B))
    assert rep.polarity == "POSITIVE" and not rep.vacuous
    assert mu.mass(pair.A) >= pair.epsilon > 0 and nu.mass(pair.B) >= pair.epsilon
    assert pair.rounds <= pair.round_cap


def test_density_precondition(lt):
    mu = nu = uniform(range(1, 11))
    with pytest.raises(DensityPreconditionError):
        density_pair(lt, mu, nu, exact_density(lt, mu, nu) + F(1, 100))


@given(st.integers(0, 2 ** 32))
def test_density_random(seed):
    rng = random.Random(seed)
    R = random_deg2(rng)
    mu, nu = uniform(random_points(rng, 25)), uniform(random_points(rng, 25))
    alpha = exact_density(R, mu, nu)
    if alpha == 0:
        return
    pair = density_pair(R, mu, nu, alpha, seed=seed)
    rep = oracle.verify_homogeneous(R, pts(mu, pair.A), pts(nu, pair.B))
    assert rep.polarity == "POSITIVE" and not rep.vacuous
    assert min(mu.mass(pair.A), nu.mass(pair.B)) >= pair.epsilon > 0
    assert pair.rounds <= pair.round_cap
    for t in pair.trace[:-1]:
        delta = F(t["delta"])
        assert F(t["new_density"]) * (1 - delta * delta) >= F(t["density"])
    assert pair.trace[-1]["polarity"] == "POSITIVE"


def test_round_cap_formula():
    assert density_round_cap(F(1, 2), F(1, 2)) >= math.ceil(math.log(2) / math.log(4 / 3))
    assert density_round_cap(1, F(1, 4)) >= 1


# --- boxes -------------------------------------------------------------------

def test_density_box_k2_is_density_pair():
    H = hyper(2, "x0 - x1")
    mu, nu = uniform(range(1, 21)), uniform(range(3, 23))
    alpha = product_density(H, [mu, nu])
    box = density_box(H, [mu, nu], alpha, seed=4)
    pair = density_pair(H.binary(), mu, nu, alpha, seed=derive_seed(4, "box", 2))
    assert box.sides == [pair.A, pair.B] and box.epsilon == pair.epsilon


def test_density_box_chain():
    H = relation_from_json({"backend": "SEMIALG_1D", "arity": 3, "formula": {"and": [
        {"atom": {"expr": "x0 - x1"}, "sign": "<"}, {"atom": {"expr": "x1 - x2"}, "sign": "<"}]}})
    ms = [uniform(range(1, 31))] * 3
    alpha = product_density(H, ms)
    box = density_box(H, ms, alpha, seed=0)
    rep = oracle.verify_box(H, [pts(ms[i], s) for i, s in enumerate(box.sides)])
    assert rep.polarity == "POSITIVE" and rep.checked == math.prod(len(s) for s in box.sides)
    assert all(m >= box.epsilon for m in box.masses)


def test_total_box():
    H = relation_from_json({"backend": "SEMIALG_1D", "arity": 3, "formula": {"const": True}})
    ms = [uniform(range(4))] * 3
    box = eh_box(H, ms)
    assert box.masses == [1, 1, 1] and box.polarity == "POSITIVE"


def test_eh_box_pairs():
    H = hyper(2, "x0 - x1")
    ms = [uniform(range(1, 41))] * 2
    box = eh_box(H, ms, seed=2)
    rep = oracle.verify_box(H, [pts(ms[i], s) for i, s in enumerate(box.sides)])
    assert rep.polarity == box.polarity and box.delta_realized >= box.epsilon


@given(st.integers(0, 2 ** 32))
def test_eh_box_random_k3(seed):
    rng = random.Random(seed)
    c = [rng.randint(-3, 3) for _ in range(4)]
    H = hyper(3, f"{c[0]}*x0 + {c[1]}*x1*x2 + {c[2]}*x2**2 + {c[3]}", rng.choice("<>"))
    ms = [uniform(random_points(rng, 8)) for _ in range(3)]
    box = eh_box(H, ms, seed=seed)
    rep = oracle.verify_box(H, [pts(ms[i], s) for i, s in enumerate(box.sides)])
    assert rep.polarity == box.polarity and not rep.vacuous
    assert box.delta_realized >= box.epsilon > 0
