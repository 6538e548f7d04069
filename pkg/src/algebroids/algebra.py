"""Finite-dimensional commutative algebras over prime fields and their
homomorphisms, given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .errors import (BadUnit, NonAssociative, NonCommutative, NotAlgebraHom,
                     NotPrime, ShapeError)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2**31) or not is_prime(self.p):
            raise NotPrime(f"{self.p} is not a prime in [2, 2**31)", self.p)

    def inv(self, x: int) -> int:
        return pow(int(x) % self.p, -1, self.p)


class FiniteAlgebra:
    """Commutative unital algebra with basis ``e_0..e_{n-1}``.

    ``mul[i, j, k]`` is the coefficient of ``e_k`` in ``e_i e_j``.
    """

    def __init__(self, field: PrimeField, mul, unit, labels: Optional[Sequence[str]] = None,
                 *, _trusted: bool = False):
        self.field = field
        p = field.p
        mul = la.asmat(mul, p)
        if mul.ndim != 3 or len(set(mul.shape)) != 1 or mul.shape[0] == 0:
            raise ShapeError(f"structure constants must be n x n x n with n > 0, got {mul.shape}")
        self.dim = mul.shape[0]
        self.mul = mul
        self.unit = la.asmat(unit, p).reshape(-1)
        if self.unit.shape != (self.dim,):
            raise ShapeError("unit vector has the wrong length")
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(self.dim))
        if len(self.labels) != self.dim:
            raise ShapeError("wrong number of labels")
        self.mul.setflags(write=False)
        self.unit.setflags(write=False)
        if not _trusted:
            self._verify()

    @property
    def p(self) -> int:
        return self.field.p

    def _verify(self):
        p, n, c = self.p, self.dim, self.mul
        bad = np.argwhere(np.any(c != c.transpose(1, 0, 2), axis=2))
        if bad.size:
            i, j = map(int, bad[0])
            raise NonCommutative(f"e{i} e{j} != e{j} e{i}", (i, j))
        # (e_i e_j) e_l  versus  e_i (e_j e_l)
        lhs = la.tdot(c, c, ([2], [0]), p)                      # i j l m
        rhs = la.tdot(c, c, ([1], [2]), p).transpose(0, 2, 3, 1)  # i (j l) -> i j l m
        bad = np.argwhere(np.any(lhs != rhs, axis=3))
        if bad.size:
            i, j, l = map(int, bad[0])
            raise NonAssociative(f"(e{i} e{j}) e{l} != e{i} (e{j} e{l})", (i, j, l))
        got = la.tdot(self.unit, c, ([0], [0]), p)
        bad = np.flatnonzero(np.any(got != la.eye(n), axis=1))
        if bad.size:
            raise BadUnit(f"unit * e{int(bad[0])} != e{int(bad[0])}", int(bad[0]))

    # -- arithmetic ---------------------------------------------------------
    def mult(self, x, y) -> np.ndarray:
        z = la.tdot(np.asarray(x, dtype=np.int64), self.mul, ([0], [0]), self.p)
        return la.tdot(np.asarray(y, dtype=np.int64), z, ([0], [0]), self.p)

    @cached_property
    def left_mults(self) -> np.ndarray:
        """``L[i]`` is the matrix of multiplication by ``e_i``."""
        out = self.mul.transpose(0, 2, 1).copy()
        out.setflags(write=False)
        return out

    def left_mult(self, x) -> np.ndarray:
        return la.tdot(np.asarray(x, dtype=np.int64), self.left_mults, ([0], [0]), self.p)

    def pair_products(self, f: np.ndarray) -> np.ndarray:
        """``out[i, j] = f[:, i] * f[:, j]`` for the columns of ``f``."""
        z = la.tdot(f, self.mul, ([0], [0]), self.p)        # i b k
        return la.tdot(z, f, ([1], [0]), self.p).transpose(0, 2, 1)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    @cached_property
    def generators(self) -> list[np.ndarray]:
        """Basis elements generating the algebra, chosen greedily by index."""
        gens: list[np.ndarray] = []
        span = la.Echelon(self.dim, self.p)
        span.add(self.unit)
        for i in range(self.dim):
            e = self.basis_vector(i)
            if span.contains(e):
                continue
            gens.append(e)
            self._close(span, gens)
            if span.dim == self.dim:
                break
        return gens

    def _close(self, span: la.Echelon, gens):
        for g in gens:
            span.add(g)
        frontier = list(span.rows)
        while frontier:
            new = []
            for v in frontier:
                for g in gens:
                    w = self.mult(v, g)
                    if span.add(w):
                        new.append(w)
            frontier = new

    # -- identity -----------------------------------------------------------
    @cached_property
    def key(self) -> bytes:
        return b"%d|" % self.p + self.mul.tobytes() + b"|" + self.unit.tobytes()

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FiniteAlgebra(p={self.p}, dim={self.dim})"


def make_algebra(p: int, mul, unit=None, labels=None) -> FiniteAlgebra:
    """Validated constructor; ``unit=None`` solves for the unit."""
    field = PrimeField(p)
    mul = la.asmat(mul, p)
    if unit is None:
        unit = find_unit(p, mul)
        if unit is None:
            n = mul.shape[0]
            raise BadUnit("no vector satisfies the unit law", tuple(range(n)))
    return FiniteAlgebra(field, mul, unit, labels)


def find_unit(p: int, mul) -> Optional[np.ndarray]:
    mul = la.asmat(mul, p)
    n = mul.shape[0]
    # sum_i u_i c[i, j, k] = delta_jk
    a = mul.reshape(n, n * n).T
    return la.solve(a, la.eye(n).reshape(-1), p)


class AlgebraHom:
    """Unital algebra homomorphism; ``matrix`` is ``dst.dim x src.dim``."""

    def __init__(self, src: FiniteAlgebra, dst: FiniteAlgebra, matrix, *, check: bool = True):
        if src.p != dst.p:
            raise ShapeError("algebras over different primes")
        self.src = src
        self.dst = dst
        self.matrix = la.asmat(matrix, src.p).reshape(dst.dim, src.dim)
        self.matrix.setflags(write=False)
        if check:
            bad = self.violation()
            if bad is not None:
                raise NotAlgebraHom(f"{bad[0]} fails at {bad[1]}", bad[1])

    @property
    def p(self) -> int:
        return self.src.p

    def violation(self):
        """First failing law as ``(name, witness)``, or None."""
        p = self.p
        if np.any(la.mm(self.matrix, self.src.unit, p) != self.dst.unit):
            return ("unital", None)
        lhs = la.tdot(self.src.mul, self.matrix, ([2], [1]), p)   # i j k'
        rhs = self.dst.pair_products(self.matrix)
        bad = np.argwhere(np.any(lhs != rhs, axis=2))
        if bad.size:
            return ("multiplicative", tuple(map(int, bad[0])))
        return None

    def __call__(self, x) -> np.ndarray:
        return la.mm(self.matrix, np.asarray(x, dtype=np.int64), self.p)

    def then(self, other: "AlgebraHom") -> "AlgebraHom":
        """``other ∘ self``."""
        if other.src != self.dst:
            raise ShapeError("composition of non-composable homs")
        return AlgebraHom(self.src, other.dst, la.mm(other.matrix, self.matrix, self.p), check=False)

    def __eq__(self, other):
        return (isinstance(other, AlgebraHom) and self.src == other.src and self.dst == other.dst
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.src, self.dst, self.matrix.tobytes()))

    def __repr__(self):
        return f"AlgebraHom({self.src!r} -> {self.dst!r})"


def identity_hom(a: FiniteAlgebra) -> AlgebraHom:
    return AlgebraHom(a, a, la.eye(a.dim), check=False)


def unit_map(a: FiniteAlgebra) -> AlgebraHom:
    """The structure map ``F_p -> A``."""
    return AlgebraHom(field_algebra(a.p), a, a.unit.reshape(-1, 1), check=False)


# -- builders ---------------------------------------------------------------

def field_algebra(p: int) -> FiniteAlgebra:
    return FiniteAlgebra(PrimeField(p), [[[1]]], [1], ["1"])


def truncated_polynomial(p: int, n: int) -> FiniteAlgebra:
    """``F_p[x]/(x^n)`` on the monomial basis."""
    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i):
            mul[i, j, i + j] = 1
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, n)]
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return FiniteAlgebra(PrimeField(p), mul, unit, labels)


def polynomial_quotient(p: int, coeffs: Sequence[int]) -> FiniteAlgebra:
    """``F_p[x]/(f)`` for monic ``f = x^n + coeffs[n-1] x^(n-1) + ... + coeffs[0]``."""
    n = len(coeffs)
    if n == 0:
        raise ShapeError("need a polynomial of positive degree")
    # x^n = -sum coeffs[i] x^i
    red = [(-int(c)) % p for c in coeffs]
    powers = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    top = np.array(red, dtype=np.int64)
    for _ in range(n, 2 * n - 1):
        powers.append(top)
        prev = top
        top = np.zeros(n, dtype=np.int64)
        top[1:] = prev[:-1]
        top = (top + prev[-1] * np.array(red)) % p
    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mul[i, j] = powers[i + j]
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, n)]
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return FiniteAlgebra(PrimeField(p), mul, unit, labels)


def product_algebra(p: int, n: int) -> FiniteAlgebra:
    """``F_p^n`` on its basis of primitive idempotents."""
    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        mul[i, i, i] = 1
    return FiniteAlgebra(PrimeField(p), mul, np.ones(n, dtype=np.int64), [f"e{i}" for i in range(n)])


def direct_product(*algebras: FiniteAlgebra) -> FiniteAlgebra:
    p = algebras[0].p
    n = sum(a.dim for a in algebras)
    mul = np.zeros((n, n, n), dtype=np.int64)
    unit = np.zeros(n, dtype=np.int64)
    labels = []
    off = 0
    for idx, a in enumerate(algebras):
        d = a.dim
        mul[off:off + d, off:off + d, off:off + d] = a.mul
        unit[off:off + d] = a.unit
        labels += [f"{lab}_{idx}" for lab in a.labels]
        off += d
    return FiniteAlgebra(PrimeField(p), mul, unit, labels, _trusted=True)


def tensor_algebras(a: FiniteAlgebra, b: FiniteAlgebra) -> FiniteAlgebra:
    """``A ⊗_{F_p} B`` with basis ``a_i ⊗ b_j`` at index ``i * dim B + j``."""
    na, nb = a.dim, b.dim
    mul = np.einsum("ikm,jln->ijklmn", a.mul, b.mul).reshape(na * nb, na * nb, na * nb)
    unit = np.kron(a.unit, b.unit)
    labels = [f"{x}*{y}" for x in a.labels for y in b.labels]
    return FiniteAlgebra(a.field, mul % a.p, unit, labels, _trusted=True)


def quotient_algebra(a: FiniteAlgebra, ideal_generators) -> tuple[FiniteAlgebra, AlgebraHom]:
    """``A/I`` for the ideal generated by the given vectors, with the quotient map."""
    p, n = a.p, a.dim
    cols = [la.mm(a.left_mults[i], np.asarray(g, dtype=np.int64) % p, p)
            for g in ideal_generators for i in range(n)]
    ideal = np.stack(cols, axis=1) if cols else la.zeros(n, 0)
    q, sec = _quotient_coordinates(ideal, n, p)
    d = q.shape[0]
    if d == 0:
        raise ShapeError("quotient by the unit ideal is the zero ring")
    prods = a.pair_products(sec)                         # s t k
    mul = la.tdot(prods, q, ([2], [1]), p)
    qa = FiniteAlgebra(a.field, mul, la.mm(q, a.unit, p), _trusted=True)
    return qa, AlgebraHom(a, qa, q)


def _quotient_coordinates(sub: np.ndarray, n: int, p: int):
    """Projection ``F_p^n -> F_p^n / span(sub)`` and a section, using the
    non-pivot coordinates of the RREF of ``sub`` as the quotient basis."""
    if sub.shape[1]:
        r, piv = la.rref(sub.T, p)
    else:
        r, piv = la.zeros(0, n), []
    free = [c for c in range(n) if c not in set(piv)]
    q = la.zeros(len(free), n)
    for t, f in enumerate(free):
        q[t, f] = 1
    # v -> v - sum_i v[piv_i] r_i, then read free coordinates
    for i, c in enumerate(piv):
        q[:, c] = (-r[i, free]) % p
    sec = la.zeros(n, len(free))
    for t, f in enumerate(free):
        sec[f, t] = 1
    return q, sec
