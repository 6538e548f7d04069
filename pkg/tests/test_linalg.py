import numpy as np
from hypothesis import given, settings, strategies as st

from algebroids import linalg as la

from oracles import rank_mod_p

PRIMES = [2, 3, 5, 7, 65521]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_plain_elimination(pm):
    p, a = pm
    assert la.rank(a, p) == rank_mod_p(a.tolist(), p)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_nullspace_is_a_complement_of_the_rank(pm):
    p, a = pm
    ns = la.nullspace(a, p)
    assert ns.shape == (a.shape[1], a.shape[1] - la.rank(a, p))
    assert not np.any(la.mm(a, ns, p))
    assert la.rank(ns, p) == ns.shape[1]


@settings(max_examples=100, deadline=None)
@given(matrices(), st.integers(0, 2**31))
def test_solve_consistent_systems(pm, seed):
    p, a = pm
    rng = np.random.default_rng(seed)
    x = rng.integers(0, p, (a.shape[1], 2))
    b = la.mm(a, x, p)
    y = la.solve(a, b, p)
    assert y is not None
    assert np.array_equal(la.mm(a, y, p), b)


def test_solve_reports_inconsistency():
    a = np.array([[1, 0], [0, 0]])
    assert la.solve(a, np.array([[0], [1]]), 3) is None


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 5), st.integers(0, 2**31))
def test_inverse_of_random_invertible(p, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, (n, n))
    inv = la.inverse(a, p)
    if rank_mod_p(a.tolist(), p) < n:
        assert inv is None
    else:
        assert np.array_equal(la.mm(a, inv, p), la.eye(n))
        assert np.array_equal(la.mm(inv, a, p), la.eye(n))


def test_large_prime_products_are_exact():
    p = 2**31 - 1
    rng = np.random.default_rng(1)
    a = rng.integers(0, p, (7, 9))
    b = rng.integers(0, p, (9, 4))
    exact = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(9)) % p for j in range(4)] for i in range(7)]
    assert la.mm(a, b, p).tolist() == exact


def test_asmat_canonical_representatives():
    assert la.asmat([-1, 7, 2**70], 5).tolist() == [4, 2, 2**70 % 5]


def test_tdot_handles_empty_axes():
    z = np.zeros((0, 3, 2), dtype=np.int64)
    out = la.tdot(z, np.ones((2, 4), dtype=np.int64), ([2], [0]), 3)
    assert out.shape == (0, 3, 4)


def test_rref_pivots_lowest_index():
    a = np.array([[0, 2, 1], [0, 1, 2]])
    r, piv = la.rref(a, 3)
    assert list(piv) == [1]
    assert r.tolist()[0] == [0, 1, 2]


def test_echelon_tracks_span():
    e = la.Echelon(3, 3)
    assert e.add(np.array([1, 1, 0]))
    assert not e.add(np.array([2, 2, 0]))
    assert e.contains(np.array([2, 2, 0]))
    assert not e.contains(np.array([0, 0, 1]))
    assert e.dim == 1
