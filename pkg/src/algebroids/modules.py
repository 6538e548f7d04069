"""Finite-dimensional modules over a ``FiniteAlgebra`` and their morphisms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import AlgebraHom, FiniteAlgebra, _quotient_coordinates
from .errors import NotAModule, NotModuleHom, ShapeError


class FModule:
    """An ``A``-module structure on ``F_p^m``: one ``m x m`` matrix per basis
    element of ``A``."""

    def __init__(self, algebra: FiniteAlgebra, action, *, dim: Optional[int] = None,
                 _trusted: bool = False):
        self.algebra = algebra
        p, n = algebra.p, algebra.dim
        if dim is None:
            arr = np.asarray(action)
            dim = arr.shape[-1] if arr.ndim == 3 else 0
        self.dim = dim
        self.action = la.asmat(action, p).reshape(n, dim, dim) if dim else la.zeros(n, 0).reshape(n, 0, 0)
        self.action.setflags(write=False)
        if not _trusted:
            self._verify()

    @property
    def p(self) -> int:
        return self.algebra.p

    def _verify(self):
        p, a = self.p, self.algebra
        if np.any(self.act(a.unit) != la.eye(self.dim)):
            raise NotAModule("the unit does not act as the identity", None)
        # rho_i rho_j == sum_k c_ijk rho_k
        lhs = la.tdot(self.action, self.action, ([2], [1]), p).transpose(0, 2, 1, 3)
        rhs = la.tdot(a.mul, self.action, ([2], [0]), p)
        bad = np.argwhere(np.any(lhs != rhs, axis=(2, 3)))
        if bad.size:
            raise NotAModule("action is not multiplicative", tuple(map(int, bad[0])))

    def act(self, a) -> np.ndarray:
        """Matrix of the action of the algebra element ``a``."""
        return la.tdot(np.asarray(a, dtype=np.int64), self.action, ([0], [0]), self.p)

    @cached_property
    def generator_actions(self) -> list[np.ndarray]:
        return [self.act(g) for g in self.algebra.generators]

    @cached_property
    def key(self) -> bytes:
        return self.algebra.key + b"|M%d|" % self.dim + self.action.tobytes()

    def __eq__(self, other):
        return isinstance(other, FModule) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FModule(dim={self.dim} over {self.algebra!r})"


class ModuleHom:
    """``A``-linear map; ``matrix`` is ``dst.dim x src.dim``."""

    def __init__(self, src: FModule, dst: FModule, matrix, *, check: bool = True):
        if src.algebra != dst.algebra:
            raise ShapeError("module maps must be over one algebra")
        self.src = src
        self.dst = dst
        self.matrix = la.asmat(matrix, src.p).reshape(dst.dim, src.dim)
        self.matrix.setflags(write=False)
        if check:
            w = self.violation()
            if w is not None:
                raise NotModuleHom("map does not commute with the action", w)

    def violation(self):
        p = self.src.p
        for t, (ra, rb) in enumerate(zip(self.src.generator_actions, self.dst.generator_actions)):
            if np.any(la.mm(self.matrix, ra, p) != la.mm(rb, self.matrix, p)):
                return t
        return None

    def then(self, other: "ModuleHom") -> "ModuleHom":
        """``other ∘ self``."""
        return ModuleHom(self.src, other.dst, la.mm(other.matrix, self.matrix, self.src.p), check=False)

    def __repr__(self):
        return f"ModuleHom({self.src.dim} -> {self.dst.dim})"


# -- builders ---------------------------------------------------------------

def regular_module(a: FiniteAlgebra) -> FModule:
    return FModule(a, a.left_mults, _trusted=True)


def zero_module(a: FiniteAlgebra) -> FModule:
    return FModule(a, None, dim=0, _trusted=True)


def direct_sum(*mods: FModule) -> FModule:
    a = mods[0].algebra
    m = sum(x.dim for x in mods)
    act = np.zeros((a.dim, m, m), dtype=np.int64)
    off = 0
    for x in mods:
        act[:, off:off + x.dim, off:off + x.dim] = x.action
        off += x.dim
    return FModule(a, act, dim=m, _trusted=True)


def free_module(a: FiniteAlgebra, rank: int) -> FModule:
    if rank == 0:
        return zero_module(a)
    return direct_sum(*([regular_module(a)] * rank))


def restrict_scalars(f: AlgebraHom, m: FModule) -> FModule:
    """View a ``B``-module as an ``A``-module along ``f: A -> B``."""
    if f.dst != m.algebra:
        raise ShapeError("restriction along a map into the wrong algebra")
    act = la.tdot(f.matrix, m.action, ([0], [0]), m.p) if m.dim else None
    return FModule(f.src, act, dim=m.dim, _trusted=True)


def identity_map(m: FModule) -> ModuleHom:
    return ModuleHom(m, m, la.eye(m.dim), check=False)


def zero_map(m: FModule, n: FModule) -> ModuleHom:
    return ModuleHom(m, n, la.zeros(n.dim, m.dim), check=False)


def span_closure(m: FModule, vectors) -> np.ndarray:
    """Basis (columns) of the ``A``-submodule generated by ``vectors``."""
    ech = la.Echelon(m.dim, m.p)
    for v in vectors:
        for t in range(m.algebra.dim):
            ech.add(la.mm(m.action[t], np.asarray(v, dtype=np.int64), m.p))
    return ech.rows.T.copy() if ech.dim else la.zeros(m.dim, 0)


def submodule(m: FModule, vectors) -> tuple[FModule, ModuleHom]:
    basis = span_closure(m, vectors)
    return _sub_from_basis(m, basis)


def _sub_from_basis(m: FModule, basis: np.ndarray) -> tuple[FModule, ModuleHom]:
    p = m.p
    k = basis.shape[1]
    linv = la.left_inverse(basis, p)
    act = np.stack([la.chain(p, linv, m.action[t], basis) for t in range(m.algebra.dim)]) if k else None
    sub = FModule(m.algebra, act, dim=k, _trusted=True)
    return sub, ModuleHom(sub, m, basis, check=False)


def quotient_module(m: FModule, vectors) -> tuple[FModule, ModuleHom]:
    """``M / <vectors>`` with the quotient map."""
    basis = span_closure(m, vectors)
    return _quotient_from_basis(m, basis)


def _quotient_from_basis(m: FModule, basis: np.ndarray) -> tuple[FModule, ModuleHom]:
    p = m.p
    q, sec = _quotient_coordinates(basis, m.dim, p)
    d = q.shape[0]
    act = np.stack([la.chain(p, q, m.action[t], sec) for t in range(m.algebra.dim)]) if d else None
    quo = FModule(m.algebra, act, dim=d, _trusted=True)
    return quo, ModuleHom(m, quo, q, check=False)


def cyclic_quotient(a: FiniteAlgebra, ideal_generators) -> FModule:
    """``A / I`` as an ``A``-module."""
    return quotient_module(regular_module(a), ideal_generators)[0]


def ideal_module(a: FiniteAlgebra, generators) -> FModule:
    return submodule(regular_module(a), generators)[0]


# -- kernels, cokernels, Hom ------------------------------------------------

def kernel(h: ModuleHom) -> tuple[FModule, ModuleHom]:
    basis = la.nullspace(h.matrix, h.src.p) if h.src.dim else la.zeros(0, 0)
    return _sub_from_basis(h.src, basis)


def cokernel(h: ModuleHom) -> tuple[FModule, ModuleHom]:
    img = la.column_space(h.matrix, h.src.p) if h.src.dim else la.zeros(h.dst.dim, 0)
    return _quotient_from_basis(h.dst, img)


def image(h: ModuleHom) -> tuple[FModule, ModuleHom]:
    img = la.column_space(h.matrix, h.src.p) if h.src.dim else la.zeros(h.dst.dim, 0)
    return _sub_from_basis(h.dst, img)


def factor_through_kernel(inclusion: ModuleHom, g: ModuleHom) -> Optional[ModuleHom]:
    """The unique ``u`` with ``inclusion ∘ u = g``, or None if none exists."""
    u = la.solve(inclusion.matrix, g.matrix, g.src.p)
    if u is None:
        return None
    return ModuleHom(g.src, inclusion.src, u, check=False)


def factor_through_cokernel(surjection: ModuleHom, g: ModuleHom) -> Optional[ModuleHom]:
    """The unique ``u`` with ``u ∘ surjection = g``, or None."""
    p = g.src.p
    ut = la.solve(surjection.matrix.T, g.matrix.T, p)
    if ut is None:
        return None
    return ModuleHom(surjection.dst, g.dst, ut.T, check=False)


def linearity_constraints(m: FModule, n: FModule) -> np.ndarray:
    """Rows cutting out ``Hom_A(M, N)`` inside all ``n x m`` matrices
    (row-major vectorisation)."""
    p = m.p
    blocks = []
    for ra, rb in zip(m.generator_actions, n.generator_actions):
        blocks.append((np.kron(la.eye(n.dim), ra.T) - np.kron(rb, la.eye(m.dim))) % p)
    if not blocks:
        return la.zeros(0, n.dim * m.dim)
    return np.vstack(blocks)


def hom_space(m: FModule, n: FModule) -> list[ModuleHom]:
    """A basis of ``Hom_A(M, N)``."""
    if m.algebra != n.algebra:
        raise ShapeError("Hom between modules over different algebras")
    if m.dim == 0 or n.dim == 0:
        return []
    ns = la.nullspace(linearity_constraints(m, n), m.p)
    return [ModuleHom(m, n, ns[:, j].reshape(n.dim, m.dim), check=False) for j in range(ns.shape[1])]


# -- projectivity and faithful flatness --------------------------------------

def module_generators(m: FModule) -> list[int]:
    """Basis indices of ``M`` generating it as an ``A``-module (greedy)."""
    ech = la.Echelon(m.dim, m.p)
    gens = []
    for i in range(m.dim):
        if ech.dim == m.dim:
            break
        e = np.zeros(m.dim, dtype=np.int64)
        e[i] = 1
        if ech.contains(e):
            continue
        gens.append(i)
        for t in range(m.algebra.dim):
            ech.add(m.action[t][:, i])
    return gens


def presentation_map(m: FModule, gens: Sequence[int]) -> ModuleHom:
    """``A^g -> M`` sending the j-th free generator to ``e_{gens[j]}``."""
    a = m.algebra
    free = free_module(a, len(gens))
    cols = [m.action[t][:, i] for i in gens for t in range(a.dim)]
    mat = np.stack(cols, axis=1) if cols else la.zeros(m.dim, 0)
    return ModuleHom(free, m, mat, check=False)


@dataclass
class ProjectivityResult:
    projective: bool
    generators: int
    section: Optional[ModuleHom]

    def __bool__(self):
        return self.projective


def is_projective(m: FModule) -> ProjectivityResult:
    """Whether ``A^g -> M`` (g greedy generators) splits ``A``-linearly;
    the splitting is returned as the witness."""
    p = m.p
    gens = module_generators(m)
    pi = presentation_map(m, gens)
    if m.dim == 0:
        return ProjectivityResult(True, 0, ModuleHom(m, pi.src, la.zeros(pi.src.dim, 0), check=False))
    homs = hom_space(m, pi.src)
    if not homs:
        return ProjectivityResult(False, len(gens), None)
    # sum_i c_i (pi X_i) = I
    cols = np.stack([la.mm(pi.matrix, h.matrix, p).reshape(-1) for h in homs], axis=1)
    c = la.solve(cols, la.eye(m.dim).reshape(-1), p)
    if c is None:
        return ProjectivityResult(False, len(gens), None)
    sec = la.tdot(c, np.stack([h.matrix for h in homs]), ([0], [0]), p)
    return ProjectivityResult(True, len(gens), ModuleHom(m, pi.src, sec, check=False))


def trace_ideal(m: FModule) -> np.ndarray:
    """Basis (columns) of the span of ``g(x)`` over ``g: M -> A`` and ``x ∈ M``."""
    a = m.algebra
    homs = hom_space(m, regular_module(a))
    if not homs:
        return la.zeros(a.dim, 0)
    return la.column_space(np.concatenate([h.matrix for h in homs], axis=1), a.p)


@dataclass
class FlatnessReport:
    """``presentation_size`` is the number of greedy generators used for the
    projectivity test; ``rank`` is ``dim B / dim A`` when that is integral
    (the rank of a free module, checked separately by exhibiting a basis)."""

    projective: bool
    trace_rank: int
    algebra_dim: int
    presentation_size: int
    module_dim: int = 0

    @property
    def faithfully_flat(self) -> bool:
        return self.projective and self.trace_rank == self.algebra_dim

    @property
    def rank(self) -> Optional[int]:
        q, r = divmod(self.module_dim, self.algebra_dim)
        return q if r == 0 else None

    def __bool__(self):
        return self.faithfully_flat


def flatness_report(f: AlgebraHom) -> FlatnessReport:
    m = restrict_scalars(f, regular_module(f.dst))
    proj = is_projective(m)
    tr = trace_ideal(m).shape[1]
    return FlatnessReport(proj.projective, tr, f.src.dim, proj.generators, m.dim)


def is_faithfully_flat(f: AlgebraHom) -> bool:
    return flatness_report(f).faithfully_flat
