"""Ring maps and module corpora for the flat descent checks."""

import itertools

import numpy as np

from algebroids import linalg as la
from algebroids.algebra import (AlgebraHom, direct_product, field_algebra, identity_hom, polynomial_quotient,
                                product_algebra, quotient_algebra, truncated_polynomial)
from algebroids.modules import FModule, direct_sum, ideal_module, regular_module


def _conjugate(mats, p, rng):
    n = mats[0].shape[0]
    while True:
        P = rng.integers(0, p, (n, n))
        inv = la.inverse(P, p)
        if inv is not None:
            return [la.chain(p, P, m, inv) for m in mats]


def indecomposables(C):
    """Indecomposable modules over a field, a split product or
    ``F_p[x]/x^2``: the regular module and its proper principal ideals."""
    split = C.dim > 1 and all(C.mul[i, i, i] == 1 for i in range(C.dim))
    out = [] if split else [regular_module(C)]
    for row in la.eye(C.dim):
        m = ideal_module(C, [row])
        if 0 < m.dim < C.dim and m not in out:
            out.append(m)
    return out


def modules_up_to(C, max_dim, rng):
    """One module in every isomorphism class of dimension at most
    ``max_dim`` (as sums of indecomposables), plus a random conjugate of each."""
    pieces = indecomposables(C)
    mods = []
    for counts in itertools.product(*(range(max_dim // m.dim + 1) for m in pieces)):
        parts = [m for m, c in zip(pieces, counts) for _ in range(c)]
        n = sum(m.dim for m in parts)
        if 0 < n <= max_dim:
            base = direct_sum(*parts)
            mods += [base, FModule(C, np.stack(_conjugate(list(base.action), C.p, rng)))]
    return mods


def diagonal(p, n):
    return AlgebraHom(field_algebra(p), product_algebra(p, n), np.ones((n, 1), dtype=np.int64))


def positive_maps():
    t2 = truncated_polynomial(3, 2)
    return {
        "F2 -> F2xF2": diagonal(2, 2),
        "F2 -> F4": AlgebraHom(field_algebra(2), polynomial_quotient(2, [1, 1]), [[1], [0]]),
        "F3 -> F3[x]/x^2": AlgebraHom(field_algebra(3), t2, [[1], [0]]),
        "F5 -> F5^3": diagonal(5, 3),
        "F3[x]/x^2 diagonal": AlgebraHom(t2, direct_product(t2, t2), np.vstack([la.eye(2), la.eye(2)])),
        "F5xF5 -> F5^3": AlgebraHom(product_algebra(5, 2), product_algebra(5, 3), [[1, 0], [1, 0], [0, 1]]),
        "identity F2[x]/x^2": identity_hom(truncated_polynomial(2, 2)),
    }


def negative_maps():
    return {
        "F2[x]/x^2 -> F2": quotient_algebra(truncated_polynomial(2, 2), [[0, 1]])[1],
        "F3xF3 -> F3": AlgebraHom(product_algebra(3, 2), field_algebra(3), [[1, 0]]),
        "F5[x]/x^2 -> F5": quotient_algebra(truncated_polynomial(5, 2), [[0, 1]])[1],
        "F3[x]/x^3 -> F3[x]/x^2": quotient_algebra(truncated_polynomial(3, 3), [[0, 0, 1]])[1],
    }
