import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from distalreg.exactnum import (AlgebraicNumber, Order, Poly, compare, count_roots, format_rational,
                                isolate_roots, parse_rational, sign_at, squarefree_decomposition,
                                sturm_sequence)

X = sympy.Symbol("x")
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def sym(p: Poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(p.coeffs))


def sqrt2():
    return AlgebraicNumber.root(Poly([-2, 0, 1]), 1, 2)


# --- parsing -------------------------------------------------------------

def test_parse_and_format_roundtrip():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(" -4 ") == -4
    assert format_rational(Fraction(-2, 4)) == "-1/2"
    assert format_rational(Fraction(5)) == "5/1"


@pytest.mark.parametrize("bad", ["0.5", "1e3", 1.5, True, None, "x"])
def test_parse_rejects_inexact(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


# --- isolate_roots examples ------------------------------------------------

def test_sqrt2_roots_isolated_symmetrically():
    roots = isolate_roots(Poly([-2, 0, 1]))
    assert [m for _, m in roots] == [1, 1]
    (a, _), (b, _) = roots
    lo_a, hi_a = a.enclosure()
    lo_b, hi_b = b.enclosure()
    assert -2 <= lo_a < hi_a <= -1 and 1 <= lo_b < hi_b <= 2
    assert compare(a, AlgebraicNumber.rational(-Fraction(3, 2))) == Order.GT


def test_no_real_roots():
    assert isolate_roots(Poly([1, 0, 1])) == []


def test_multiplicities_from_repeated_factor():
    p = Poly.from_roots([1, 1, -3])
    got = [(r.value, m) for r, m in isolate_roots(p)]
    assert got == [(-3, 1), (1, 2)]


def test_window_and_degree_cap():
    p = Poly.from_roots([-5, 0, 5])
    assert [r.value for r, _ in isolate_roots(p, window=(-1, 5))] == [0, 5]
    with pytest.raises(ValueError):
        isolate_roots(Poly.from_roots(range(9)), degree_cap=8)
    with pytest.raises(ValueError):
        isolate_roots(Poly([]))


# --- compare / sign_at examples --------------------------------------------

def test_compare_examples():
    assert compare(sqrt2(), AlgebraicNumber.rational(Fraction(3, 2))) == Order.LT
    assert compare(sqrt2(), AlgebraicNumber.root(Poly([-4, 0, 0, 0, 1]), 1, 2)) == Order.EQ
    assert compare(AlgebraicNumber.neg_inf(), AlgebraicNumber.rational(-10 ** 9)) == Order.LT
    assert compare(AlgebraicNumber.pos_inf(), sqrt2()) == Order.GT


def test_sign_at_examples():
    assert sign_at(Poly([-1, 1]), AlgebraicNumber.rational(2)) == 1
    assert sign_at(Poly([-2, 0, 1]), sqrt2()) == 0
    assert sign_at(Poly([-3, 0, 1]), sqrt2()) == -1


def test_json_roundtrip_of_algebraic_numbers():
    for a in (sqrt2(), AlgebraicNumber.rational(Fraction(-7, 3)), AlgebraicNumber.pos_inf()):
        assert compare(AlgebraicNumber.from_json(a.to_json()), a) == Order.EQ


# --- properties ------------------------------------------------------------

@given(st.lists(rationals, min_size=1, max_size=4))
def test_linear_products_recover_distinct_roots(roots):
    p = Poly.from_roots(roots)
    got = isolate_roots(p)
    assert all(r.is_rational for r, _ in got)
    want = sorted(set(roots))
    assert [r.value for r, _ in got] == want
    assert [m for _, m in got] == [roots.count(v) for v in want]


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=5))
def test_real_root_count_matches_sympy(coeffs):
    p = Poly(coeffs)
    if p.degree < 1:
        return
    ours = isolate_roots(p)
    theirs = sympy.Poly(sym(p), X).real_roots()
    distinct = sorted(set(theirs), key=lambda r: float(r))
    assert len(ours) == len(distinct)
    for (r, m), s in zip(ours, distinct):
        lo, hi = r.enclosure()
        assert lo <= s <= hi
        assert m == theirs.count(s)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=5), rationals, rationals)
def test_sturm_count_matches_direct_count(coeffs, a, b):
    p = Poly(coeffs)
    if p.degree < 1 or a == b:
        return
    lo, hi = min(a, b), max(a, b)
    sqf = squarefree_decomposition(p)
    n = sum(1 for f, _ in sqf for r, _ in isolate_roots(f)
            if compare(AlgebraicNumber.rational(lo), r) == Order.LT
            and compare(r, AlgebraicNumber.rational(hi)) != Order.GT)
    assert count_roots(p, lo, hi) == n
    assert sturm_sequence(p)[0] == p


def _algebraic_pool():
    polys = [Poly([-2, 0, 1]), Poly([-3, 0, 1]), Poly([-2, 0, 0, 1]), Poly([-1, -1, 0, 1]),
             Poly([1, -4, 0, 0, 1]), Poly([-5, 0, 1]), Poly.from_roots([Fraction(7, 5), 2])]
    out = [AlgebraicNumber.neg_inf(), AlgebraicNumber.pos_inf()]
    for p in polys:
        out += [r for r, _ in isolate_roots(p)]
    out += [AlgebraicNumber.rational(Fraction(n, 4)) for n in range(-8, 9, 3)]
    return out


POOL = _algebraic_pool()


def _approx(a):
    if a.kind == AlgebraicNumber.NEG_INF:
        return -sympy.oo
    if a.kind == AlgebraicNumber.POS_INF:
        return sympy.oo
    if a.is_rational:
        return sympy.Rational(a.value.numerator, a.value.denominator)
    lo, hi = a.enclosure()
    roots = [r for r in sympy.Poly(sym(a.poly), X).real_roots() if lo <= r <= hi]
    assert len(roots) == 1
    return roots[0]


@pytest.mark.parametrize("i", range(len(POOL)))
def test_compare_agrees_with_sympy(i):
    a = POOL[i]
    for b in POOL:
        want = sympy.sign(sympy.nsimplify(_approx(a) - _approx(b))) if a.is_finite and b.is_finite \
            else None
        got = compare(a, b)
        if want is not None:
            assert int(got) == int(want)
        assert compare(b, a) == Order(-int(got))


@given(st.tuples(*[st.integers(0, len(POOL) - 1)] * 3))
def test_compare_is_transitive(idx):
    a, b, c = (POOL[i] for i in idx)
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=4), st.integers(0, len(POOL) - 1))
def test_sign_at_zero_iff_root(coeffs, i):
    p, a = Poly(coeffs), POOL[i]
    if p.degree < 1 or not a.is_finite:
        return
    is_root = any(compare(r, a) == Order.EQ for r, _ in isolate_roots(p))
    assert (sign_at(p, a) == 0) == is_root


def test_quadratic_fast_path_matches_bisection():
    for c0, c1, c2 in itertools.product(range(-4, 5), range(-4, 5), (1, 2, -3)):
        p = Poly([c0, c1, c2])
        fast = isolate_roots(p)
        cubic = isolate_roots(p * Poly([7, 1]))   # forces the general path
        rest = [r for r, _ in cubic if not (r.is_rational and r.value == -7)]
        assert len(rest) == len(fast)
        for (r, _), s in zip(fast, rest):
            assert compare(r, s) == Order.EQ
