import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from distalreg.cells import (build_cutting, crosses, crossing_matrix, crossing_set, cutting_budget,
                             decompose, value_on)
from distalreg.cells.interval1d import profile
from distalreg.cells.planar import crosses_by_witness
from distalreg.exactnum import AlgebraicNumber, Order, compare
from distalreg.structures import AtomicMeasure, evaluate
from tests.helpers import formula_rel, plane, rel1d

F = Fraction


def ends(C):
    def show(a):
        if a.kind == AlgebraicNumber.NEG_INF:
            return "-inf"
        if a.kind == AlgebraicNumber.POS_INF:
            return "+inf"
        return a.value
    return ("pt", show(C.lo)) if C.is_point else (show(C.lo), show(C.hi))


def test_decompose_thresholds(lt):
    assert [ends(C) for C in decompose(lt, [5, 2])] == \
        [("-inf", 2), ("pt", 2), (2, 5), ("pt", 5), (5, "+inf")]


def test_decompose_parabola(parab):
    assert [ends(C) for C in decompose(parab, [4])] == \
        [("-inf", -2), ("pt", -2), (-2, 2), ("pt", 2), (2, "+inf")]


def test_decompose_irrational_boundaries(parab):
    dec = decompose(parab, [2])
    assert len(dec) == 5
    assert not dec[1].lo.is_rational
    assert dec[2].contains(0) and not dec[2].contains(F(3, 2))


def test_two_crossing_lines(above):
    dec = decompose(above, [(1, 0), (-1, 0)])
    kinds = sorted(C.kind for C in dec)
    assert kinds.count("face") == 6 and kinds.count("vertex") == 1
    assert all(len(C.provenance) <= 4 for C in dec)
    for x, y in itertools.product(range(-6, 7), repeat=2):
        p = (F(x, 2), F(y, 3))
        inside = [i for i, C in enumerate(dec) if C.contains(p)]
        assert inside == [dec.locate(p)]


def test_crosses_examples(lt):
    dec = decompose(lt, [2, 5])
    C25, C2 = dec[2], dec[1]
    assert crosses(C25, lt, 3) is True
    assert crosses(C25, lt, 7) is False and value_on(C25, lt, 7) is True
    assert not any(crosses(C2, lt, b) for b in range(-3, 9))
    assert crossing_set(C25, lt, [1, 3, 4, 7]) == [1, 2]
    assert crossing_set(C25, lt, []) == []


def test_full_line_chamber_is_crossed_by_nonconstant(parab):
    (full,) = decompose(parab, [])
    assert crossing_set(full, parab, [-1, 0, 3]) == [1, 2]


def test_constant_relation_cutting():
    R = formula_rel({"const": False})
    cut = build_cutting(R, list(range(10)), r=4)
    assert len(cut) == 1 and cut.S == () and cut.max_crossing_mass == 0


def test_thresholds_cutting(lt):
    B = list(range(1, 101))
    cut = build_cutting(lt, B, r=4, seed=7)
    for C in cut.chambers:
        assert sum(crosses(C, lt, b) for b in B) <= 25


def test_full_decomposition_fallback(lt):
    B = list(range(8))
    dec = decompose(lt, B)
    assert not crossing_matrix(dec, lt, B).any()
    cut = build_cutting(lt, B, r=10)
    assert cut.max_crossing_mass <= F(1, 10)


def test_cutting_rejects_small_r(lt):
    with pytest.raises(ValueError):
        build_cutting(lt, [1, 2], r=1)


# --- properties ------------------------------------------------------------

RELS_1D = [("x - y", "<"), ("x**2 - y", ">"), ("x**2 - y*x - 1", "<="), ("x**3 - y", "!="),
           ("(x - y)*(x + y)", ">=")]


@given(st.sampled_from(RELS_1D), st.lists(st.integers(-9, 9), max_size=5),
       st.lists(st.fractions(-12, 12, max_denominator=4), min_size=1, max_size=12))
def test_1d_partition_completeness_and_matrix(rel, S, probes):
    R = rel1d(*rel)
    dec = decompose(R, S)
    for p in probes:
        inside = [i for i, C in enumerate(dec) if C.contains(p)]
        assert inside == [dec.locate(p)]
    for C in dec:
        assert not any(crosses(C, R, s) for s in S)
        assert C.is_point or compare(C.lo, C.hi) == Order.LT
    roots = sum(len(profile(R, s).roots) for s in S)
    assert len(dec) <= 2 * roots + 1
    B = list(range(-10, 11, 3))
    M = crossing_matrix(dec, R, B)
    for i, C in enumerate(dec):
        for j, b in enumerate(B):
            assert M[i, j] == crosses(C, R, b)
            if not M[i, j]:
                w = C.witness()
                truth = R.truth_at_algebraic(w, b) if isinstance(w, AlgebraicNumber) \
                    else evaluate(R, w, b)
                assert value_on(C, R, b) == truth


line = st.tuples(st.integers(-3, 3), st.integers(-6, 6))


@given(st.lists(line, max_size=5))
def test_planar_partition_and_completeness(S):
    R = plane("x1 - y0*x0 - y1", ">")
    dec = decompose(R, S)
    n = len(set(S))
    assert len(dec) <= 4 * (n + 1) ** 2 + 2 * n * n
    for x, y in itertools.product(range(-5, 6), repeat=2):
        p = (F(x, 2), F(y, 2))
        inside = [i for i, C in enumerate(dec) if C.contains(p)]
        assert inside == [dec.locate(p)]
    for C in dec:
        assert C.contains(C.witness())
        assert len(C.provenance) <= 4
        assert not any(crosses(C, R, s) for s in S)


FORMULAS_2D = [
    {"atom": {"expr": "x1 - y0*x0 - y1"}, "sign": ">="},
    {"and": [{"atom": {"expr": "x1 - y0*x0 - y1"}, "sign": "<"},
             {"atom": {"expr": "x0 - y1"}, "sign": ">"}]},
    {"or": [{"atom": {"expr": "x1 - y0"}, "sign": "="},
            {"atom": {"expr": "x0 + x1 - y1"}, "sign": "<"}]},
]


@given(st.sampled_from(FORMULAS_2D), st.lists(line, max_size=4), st.lists(line, min_size=1, max_size=6))
def test_planar_matrix_agrees_with_witness_route(f, S, B):
    R = formula_rel(f, "PLANE_LINES", 2)
    dec = decompose(R, S)
    M = crossing_matrix(dec, R, B)
    for i, C in enumerate(dec):
        for j, b in enumerate(B):
            assert bool(M[i, j]) == crosses_by_witness(C, R, b)


@given(st.sampled_from(["x - y", "x**2 - y"]), st.integers(0, 2 ** 32), st.sampled_from([2, 3, 5]))
def test_cutting_property_random(expr, seed, r):
    rng = random.Random(seed)
    R = rel1d(expr, ">")
    B = rng.sample(range(-30, 31), rng.randint(1, 40))
    ws = [rng.randint(1, 4) for _ in B]
    nu = AtomicMeasure(B, [F(w, sum(ws)) for w in ws])
    cut = build_cutting(R, B, nu, r, seed)
    for C in cut.chambers:
        assert nu.mass(crossing_set(C, R, B)) <= F(1, r)
    assert len(cut.S) <= cutting_budget(r)
    again = build_cutting(R, B, nu, r, seed)
    assert again.S == cut.S and again.crossings == cut.crossings


def test_planar_cutting(above):
    rng = random.Random(3)
    B = rng.sample([(a, c) for a in range(-4, 5) for c in range(-15, 16)], 40)
    cut = build_cutting(above, B, r=2, seed=1)
    for C in cut.chambers:
        assert F(len(crossing_set(C, above, B)), 40) <= F(1, 2)
