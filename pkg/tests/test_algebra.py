import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebroids.algebra import (AlgebraHom, FiniteAlgebra, PrimeField, direct_product, field_algebra,
                                find_unit, identity_hom, make_algebra, polynomial_quotient, product_algebra,
                                quotient_algebra, tensor_algebras, truncated_polynomial, unit_map)
from algebroids.errors import BadUnit, NonAssociative, NonCommutative, NotAlgebraHom, NotPrime, ShapeError

from oracles import is_algebra_hom


def small_algebras():
    return [field_algebra(2), field_algebra(5), truncated_polynomial(2, 2), truncated_polynomial(3, 3),
            product_algebra(3, 2), product_algebra(2, 3), polynomial_quotient(2, [1, 1]),
            polynomial_quotient(3, [1, 0]), direct_product(field_algebra(3), truncated_polynomial(3, 2))]


@pytest.mark.parametrize("a", small_algebras(), ids=lambda a: f"p{a.p}d{a.dim}")
def test_builders_are_commutative_associative_unital(a):
    # rebuilding without the trusted flag re-runs every axiom check
    FiniteAlgebra(a.field, a.mul, a.unit)
    for i in range(a.dim):
        assert np.array_equal(a.mult(a.unit, a.basis_vector(i)), a.basis_vector(i))


def test_f4_is_a_field():
    f4 = polynomial_quotient(2, [1, 1])
    nonzero = [np.array(v) for v in [(1, 0), (0, 1), (1, 1)]]
    for x in nonzero:
        assert any(np.array_equal(f4.mult(x, y), f4.unit) for y in nonzero)


def test_rejects_bad_structure_constants():
    with pytest.raises(NotPrime):
        PrimeField(4)
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = 1
    mul[0, 1, 0] = 1
    with pytest.raises(NonCommutative):
        make_algebra(3, mul, [1, 0])
    with pytest.raises(ShapeError):
        make_algebra(3, np.zeros((2, 2, 3)), [1, 0])
    with pytest.raises(BadUnit):
        make_algebra(3, truncated_polynomial(3, 2).mul, [0, 1])


def test_nonassociative_witness():
    # e0 = 1, e1^2 = e2, e2^2 = e1, e1 e2 = 0: (e1 e1) e2 = e1 but e1 (e1 e2) = 0
    mul = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        mul[0, i, i] = mul[i, 0, i] = 1
    mul[1, 1, 2] = 1
    mul[2, 2, 1] = 1
    with pytest.raises(NonAssociative) as exc:
        make_algebra(5, mul, [1, 0, 0])
    assert exc.value.witness is not None


def test_find_unit():
    a = product_algebra(5, 3)
    assert find_unit(5, a.mul).tolist() == [1, 1, 1]


def test_algebra_hom_checks_against_oracle():
    a = truncated_polynomial(3, 2)
    good = [[1, 0], [0, 2]]      # x -> 2x
    bad = [[1, 1], [0, 1]]       # x -> 1 + x, fails x^2 = 0
    for m, ok in ((good, True), (bad, False)):
        assert is_algebra_hom(a.mul.tolist(), a.unit.tolist(), a.mul.tolist(), a.unit.tolist(), m, 3) == ok
        if ok:
            AlgebraHom(a, a, m)
        else:
            with pytest.raises(NotAlgebraHom):
                AlgebraHom(a, a, m)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_all_endomorphisms_of_f3_squared_agree_with_oracle(a, b, c, d):
    alg = product_algebra(3, 2)
    m = [[a, b], [c, d]]
    expected = is_algebra_hom(alg.mul.tolist(), alg.unit.tolist(), alg.mul.tolist(), alg.unit.tolist(), m, 3)
    assert (AlgebraHom(alg, alg, m, check=False).violation() is None) == expected


def test_quotient_algebra():
    a = truncated_polynomial(2, 3)
    q, hom = quotient_algebra(a, [[0, 1, 0]])
    assert q.dim == 1
    assert hom(a.unit).tolist() == q.unit.tolist()
    q2, hom2 = quotient_algebra(a, [[0, 0, 1]])
    assert q2.dim == 2
    assert is_algebra_hom(a.mul.tolist(), a.unit.tolist(), q2.mul.tolist(), q2.unit.tolist(), hom2.matrix.tolist(), 2)
    with pytest.raises(ShapeError):
        quotient_algebra(a, [[1, 0, 0]])


def test_tensor_and_unit_maps():
    t = tensor_algebras(product_algebra(3, 2), truncated_polynomial(3, 2))
    assert t.dim == 4
    u = unit_map(t)
    assert u.src.dim == 1 and u.violation() is None
    i = identity_hom(t)
    assert i.then(i) == i


def test_generators_generate():
    a = truncated_polynomial(5, 4)
    assert len(a.generators) == 1
    assert len(product_algebra(2, 3).generators) >= 1
