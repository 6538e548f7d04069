"""Finite groups given by Cayley tables, and their actions on algebras by
algebra automorphisms."""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg as la
from .algebra import AlgebraHom, FiniteAlgebra, product_algebra
from .errors import NotAGroup, NotAHomomorphismAction, NotAlgebraHom, NotAutomorphism, ShapeError


class FiniteGroup:
    """Group on ``0..order-1`` with ``table[g, h] = g h``."""

    def __init__(self, table, labels: Sequence[str] | None = None):
        t = np.array(table, dtype=np.int64)
        n = t.shape[0] if t.ndim == 2 else 0
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise NotAGroup("Cayley table must be a nonempty square array", None)
        if t.min() < 0 or t.max() >= n:
            raise NotAGroup("table entries out of range", None)
        self.order = n
        self.table = t
        self.table.setflags(write=False)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        # associativity: (gh)k == g(hk)
        lhs = t[t, :]                      # lhs[g, h, k] = (gh)k
        rhs = t[:, t]                      # rhs[g, h, k] = g(hk)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            raise NotAGroup("table is not associative", tuple(map(int, bad[0])))
        ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))]
        if not ids:
            raise NotAGroup("no identity element", None)
        self.identity = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hit = np.flatnonzero(t[g] == self.identity)
            if hit.size != 1 or t[hit[0], g] != self.identity:
                raise NotAGroup(f"element {g} has no inverse", g)
            inv[g] = hit[0]
        self.inverse = inv
        self.inverse.setflags(write=False)

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["1"])


def cyclic_group(n: int) -> FiniteGroup:
    i = np.arange(n)
    return FiniteGroup((i[:, None] + i[None, :]) % n)


def group_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """``G x H`` with ``(a, b)`` at index ``a * |H| + b``."""
    n, m = g.order, h.order
    t = np.empty((n * m, n * m), dtype=np.int64)
    for (a, b), (c, d) in itertools.product(itertools.product(range(n), range(m)), repeat=2):
        t[a * m + b, c * m + d] = g.table[a, c] * m + h.table[b, d]
    labels = [f"({x},{y})" for x in g.labels for y in h.labels]
    return FiniteGroup(t, labels)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` in lexicographic order; ``(s t)(i) = s(t(i))``."""
    perms = list(itertools.permutations(range(n)))
    index = {s: i for i, s in enumerate(perms)}
    t = [[index[tuple(s[x] for x in u)] for u in perms] for s in perms]
    return FiniteGroup(t, ["".join(map(str, s)) for s in perms])


class GroupAction:
    """Left action of ``group`` on ``algebra``: ``rho[g]`` is the matrix of
    ``b -> g.b`` and ``rho[g] @ rho[h] == rho[gh]``."""

    def __init__(self, group: FiniteGroup, algebra: FiniteAlgebra, rho, *, check: bool = True):
        self.group = group
        self.algebra = algebra
        n = algebra.dim
        r = la.asmat(rho, algebra.p)
        if r.shape != (group.order, n, n):
            raise ShapeError(f"expected {group.order} matrices of size {n}x{n}", r.shape)
        self.rho = r
        self.rho.setflags(write=False)
        if check:
            self._verify()

    def _verify(self):
        p, g = self.algebra.p, self.group
        for x in range(g.order):
            try:
                AlgebraHom(self.algebra, self.algebra, self.rho[x])
            except NotAlgebraHom as exc:
                raise NotAutomorphism(f"rho({x}) is not an algebra map", (x, exc.witness)) from None
            if la.inverse(self.rho[x], p) is None:
                raise NotAutomorphism(f"rho({x}) is not invertible", (x, None))
        if np.any(self.rho[g.identity] != la.eye(self.algebra.dim)):
            raise NotAHomomorphismAction("identity does not act trivially", g.identity)
        for x, y in itertools.product(range(g.order), repeat=2):
            if np.any(la.mm(self.rho[x], self.rho[y], p) != self.rho[g.mul(x, y)]):
                raise NotAHomomorphismAction(f"rho({x}) rho({y}) != rho({x}{y})", (x, y))

    @cached_property
    def homs(self) -> list[AlgebraHom]:
        return [AlgebraHom(self.algebra, self.algebra, m, check=False) for m in self.rho]

    def __repr__(self):
        return f"GroupAction({self.group!r} on {self.algebra!r})"


def make_group_action(group: FiniteGroup, algebra: FiniteAlgebra, rho) -> GroupAction:
    return GroupAction(group, algebra, rho)


def trivial_action(group: FiniteGroup, algebra: FiniteAlgebra) -> GroupAction:
    rho = np.broadcast_to(la.eye(algebra.dim), (group.order, algebra.dim, algebra.dim))
    return GroupAction(group, algebra, rho)


def permutation_action(group: FiniteGroup, p: int, perms: Sequence[Sequence[int]]) -> GroupAction:
    """``group`` acting on ``F_p^n`` (idempotent basis) by ``g.e_i = e_{perms[g][i]}``."""
    n = len(perms[0])
    b = product_algebra(p, n)
    rho = np.zeros((group.order, n, n), dtype=np.int64)
    for g, s in enumerate(perms):
        rho[g, list(s), list(range(n))] = 1
    return GroupAction(group, b, rho)


def subgroup(group: FiniteGroup, elements: Sequence[int]) -> FiniteGroup:
    """The subgroup on ``elements`` (in that order), re-indexed ``0..k-1``."""
    pos = {int(g): i for i, g in enumerate(elements)}
    try:
        t = [[pos[group.mul(a, b)] for b in elements] for a in elements]
    except KeyError:
        raise NotAGroup("elements are not closed under multiplication", None) from None
    return FiniteGroup(t, [group.labels[g] for g in elements])


def restrict_action(act: GroupAction, elements: Sequence[int]) -> GroupAction:
    return GroupAction(subgroup(act.group, elements), act.algebra, act.rho[list(elements)])
