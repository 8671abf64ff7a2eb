import numpy as np
import pytest
from hypothesis import given, strategies as st

from distalreg import kernels
from distalreg.ffield import build_incidence
from distalreg.kernels import _pykernels

ck = pytest.importorskip("distalreg.kernels._ckernels")

small = st.integers(-10 ** 6, 10 ** 6)
triple = st.tuples(small, small, small)


@given(st.lists(triple, min_size=1, max_size=20), st.lists(triple, min_size=1, max_size=10))
def test_linear_sign_matrix_parity(gens, forms):
    g = np.array(gens, dtype=np.int64)
    f = np.array(forms, dtype=np.int64)
    assert np.array_equal(ck.linear_sign_matrix(g, f), _pykernels.linear_sign_matrix(gens, forms))


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(0, 2)), min_size=1, max_size=8),
       st.lists(triple, min_size=1, max_size=6), st.data())
def test_cell_sign_masks_parity(cells, forms, data):
    sizes = [1 if dim == 0 else n for n, dim in cells]
    gens = data.draw(st.lists(triple, min_size=sum(sizes), max_size=sum(sizes)))
    ptr = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
    dim = np.array([d for _, d in cells], dtype=np.int8)
    fast = ck.cell_sign_masks(np.array(gens, dtype=np.int64), ptr, dim, np.array(forms, dtype=np.int64))
    slow = _pykernels.cell_sign_masks(gens, ptr, dim, forms)
    assert np.array_equal(fast, slow)


@given(st.lists(st.integers(0, 2 ** 64 - 1), max_size=50), st.integers(0, 2 ** 64 - 1))
def test_count_traces_parity(sets, mask):
    assert ck.count_traces(np.array(sets, dtype=np.uint64), mask) == \
        _pykernels.count_traces(sets, mask)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_local_search_parity(q):
    inst = build_incidence(q)
    lp = np.ascontiguousarray(inst.line_points, dtype=np.int32)
    pl = np.ascontiguousarray(inst.point_lines, dtype=np.int32)
    for seed in (0, 1, 2 ** 63 + 5):
        v1, m1 = ck.biclique_local_search(lp, pl, 300, seed)
        v2, m2 = _pykernels.biclique_local_search(lp.tolist(), pl.tolist(), 300, seed)
        assert v1 == v2 and np.array_equal(np.asarray(m1), np.asarray(m2))


def test_overflow_falls_back_to_python_ints():
    big = 2 ** 40
    gens = [(big, big, 1)]
    forms = [(big, -big, 1)]
    out = kernels.linear_sign_matrix(gens, forms)
    assert out[0, 0] == 1
    assert kernels.count_traces([2 ** 70, 3], 2 ** 70) == 2


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_end_to_end_backends_agree(monkeypatch):
    import random

    from distalreg.ramsey import eh_pair_counting
    from tests.helpers import plane

    R = plane("x1 - y0*x0 - y1", ">")
    rng = random.Random(0)
    cases = [(rng.sample([(x, y) for x in range(-20, 21) for y in range(-20, 21)], 60),
              rng.sample([(a, c) for a in range(-4, 5) for c in range(-20, 21)], 60)) for _ in range(5)]
    fast = [eh_pair_counting(R, A, B, seed=s).to_json() for s, (A, B) in enumerate(cases)]
    monkeypatch.setattr(kernels, "_ck", None)
    slow = [eh_pair_counting(R, A, B, seed=s).to_json() for s, (A, B) in enumerate(cases)]
    assert fast == slow
