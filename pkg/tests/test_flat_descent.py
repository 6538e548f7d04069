import numpy as np
import pytest

from algebroids import linalg as la
from algebroids.algebra import (AlgebraHom, field_algebra, identity_hom, product_algebra, quotient_algebra,
                                truncated_polynomial)
from algebroids.errors import NotSemilinear, ShapeError
from algebroids.fileformat import Workspace, parse_file
from algebroids.flat_descent import (amitsur_check, amitsur_maps, cartesian_check, cartesianize, global_sections,
                                     multiplication_iso)
from algebroids.modules import free_module, ideal_module, is_faithfully_flat, regular_module
from corpora import diagonal, modules_up_to, negative_maps, positive_maps


@pytest.mark.parametrize("name", list(positive_maps()))
def test_amitsur_equalizer_on_flat_maps(name):
    f = positive_maps()[name]
    assert is_faithfully_flat(f)
    rng = np.random.default_rng(11)
    mods = modules_up_to(f.src, 6, rng)
    assert mods
    for M in mods:
        r = amitsur_check(f, M)
        assert r.injective and r.equalizer, (name, M, r.to_dict())
        assert r.agreement_dim == M.dim


def test_positive_corpus_spans_primes():
    assert {f.p for f in positive_maps().values()} == {2, 3, 5}


@pytest.mark.parametrize("name", list(negative_maps()))
def test_amitsur_fails_off_faithful_flatness(name):
    f = negative_maps()[name]
    assert not is_faithfully_flat(f)
    r = amitsur_check(f, regular_module(f.src))
    assert not r.equalizer and not r.faithfully_flat
    kind, vec = r.witness
    assert kind == "kernel of l"
    l_img = la.mm(amitsur_l(f), np.array(vec, dtype=np.int64), f.p)
    assert not np.any(l_img) and any(vec)


def amitsur_l(f):
    return amitsur_maps(f, regular_module(f.src))[0]


def test_square_zero_ideal_is_still_an_equalizer():
    f = negative_maps()["F2[x]/x^2 -> F2"]
    x = ideal_module(f.src, [[0, 1]])
    assert amitsur_check(f, x).equalizer


def test_cartesian_check_file_examples(flat_file):
    ws = Workspace(parse_file(flat_file))
    good = ws.get("good", "restriction")
    bad = ws.get("bad", "restriction")
    assert cartesian_check(good.arrow, good.source, good.target, good.matrix).cartesian
    r = cartesian_check(bad.arrow, bad.source, bad.target, bad.matrix)
    assert not r.cartesian and (r.rank, r.target_dim) == (1, 2)


def test_cartesian_rejects_non_semilinear():
    f = diagonal(3, 2)
    MB, MC = free_module(f.src, 2), regular_module(f.dst)
    cartesian_check(f, MB, MC, la.eye(2))
    with pytest.raises(NotSemilinear):
        cartesian_check(AlgebraHom(product_algebra(3, 2), field_algebra(3), [[1, 0]]),
                        regular_module(product_algebra(3, 2)), free_module(field_algebra(3), 2), la.eye(2))


def test_cartesian_rejects_wrong_base():
    f = diagonal(3, 2)
    with pytest.raises(ShapeError):
        cartesian_check(f, regular_module(f.dst), regular_module(f.dst), la.eye(2))


@pytest.mark.parametrize("name", ["F3 -> F3[x]/x^2", "F5xF5 -> F5^3", "F2 -> F4"])
def test_cartesianize_and_global_sections(name):
    f = positive_maps()[name]
    A = f.src
    rng = np.random.default_rng(5)
    for M in modules_up_to(A, 4, rng):
        P = cartesianize(A, M, [identity_hom(A), f])
        assert P.is_cartesian
        assert global_sections(P, 0, M) == M
        assert la.rank(multiplication_iso(A, M), A.p) == M.dim


def test_global_sections_only_at_base():
    f = positive_maps()["F2 -> F4"]
    M = free_module(f.src, 2)
    P = cartesianize(f.src, M, [identity_hom(f.src), f])
    with pytest.raises(ShapeError):
        global_sections(P, 1, M)


def test_cartesianize_along_a_non_flat_quotient():
    A = truncated_polynomial(2, 2)
    Q, q = quotient_algebra(A, [[0, 1]])
    M = ideal_module(A, [[0, 1]])
    P = cartesianize(A, M, [identity_hom(A), q])
    assert [v.dim for v in P.values] == [1, 1]
    assert P.is_cartesian and global_sections(P, 0, M) == M
