"""Balanced tensor products ``M ⊗_A N`` of twisted modules, induced maps
between them, associators and tensor products of algebras.

A ``TensorSpace`` is computed from a free presentation of the left factor:
with ``g`` generators ``A^g -> M`` and relation space ``K``, right exactness
gives ``M ⊗_A N = N^g / K·N``.  The quotient basis consists of classes of pure
tensors ``e_{gen_j} ⊗ f_k`` (lowest-index pivoting throughout), so the section
is a selection of pure-tensor coordinates and ``projection @ section = I``
holds exactly.
"""

from __future__ import annotations

import hashlib
import threading
from contextlib import contextmanager
from functools import cached_property
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import AlgebraHom, FiniteAlgebra, _quotient_coordinates, identity_hom
from .errors import BaseMismatch, InternalError, SizeExceeded, WellDefinednessViolation
from .modules import FModule, module_generators, regular_module, restrict_scalars

DEFAULT_CEILING = 4096
_ceiling = DEFAULT_CEILING


def size_ceiling() -> int:
    return _ceiling


def set_size_ceiling(n: int) -> None:
    global _ceiling
    _ceiling = int(n)


@contextmanager
def ceiling(n: int):
    old = _ceiling
    set_size_ceiling(n)
    try:
        yield
    finally:
        set_size_ceiling(old)


def _digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
        h.update(b"/")
    return h.hexdigest()


class TwistedModule:
    """A ``B``-module viewed over ``A`` through ``twist: A -> B``."""

    def __init__(self, module: FModule, twist: Optional[AlgebraHom] = None):
        if twist is None:
            twist = identity_hom(module.algebra)
        if twist.dst != module.algebra:
            raise BaseMismatch("twist does not land in the module's algebra")
        self.module = module
        self.twist = twist

    @property
    def base(self) -> FiniteAlgebra:
        return self.twist.src

    @property
    def dim(self) -> int:
        return self.module.dim

    @cached_property
    def over_base(self) -> FModule:
        return restrict_scalars(self.twist, self.module)

    @cached_property
    def digest(self) -> str:
        return _digest(self.module.key, self.twist.matrix.tobytes(), self.twist.src.key)


class TensorSpace:
    """``left ⊗_base right`` with projection from, and section into, the
    ambient vector-space tensor product ``F_p^(l*r)`` (index ``i*r + k``)."""

    def __init__(self, base: FiniteAlgebra, left: TwistedModule, right: TwistedModule):
        if left.base != base or right.base != base:
            raise BaseMismatch("tensor factors are not modules over the declared base")
        self.base = base
        self.left = left
        self.right = right
        self.p = base.p
        l, r = left.dim, right.dim
        self.ambient = l * r
        if self.ambient > _ceiling:
            raise SizeExceeded(f"ambient tensor dimension {self.ambient} exceeds ceiling {_ceiling}",
                               self.ambient)
        self._build()

    def _build(self):
        p, a = self.p, self.base
        l, r, na = self.left.dim, self.right.dim, a.dim
        if l == 0 or r == 0:
            self.dim = 0
            self.projection = la.zeros(0, l * r)
            self.section = la.zeros(l * r, 0)
            self.section_left = np.zeros(0, dtype=np.int64)
            self.section_right = np.zeros(0, dtype=np.int64)
            return
        lm = self.left.over_base
        rho_n = self.right.over_base.action                      # t k' k
        gens = module_generators(lm)
        g = len(gens)
        # presentation A^g -> M, column (j, t) -> e_t . m_{gens_j}
        pi = np.stack([lm.action[t][:, i] for i in gens for t in range(na)], axis=1)
        lift = self._lift(pi, gens, g, na, l)                    # (g*na) x l
        rel = la.nullspace(pi, p)                                # (g*na) x kk
        pre = la.tdot(lift.reshape(g, na, l), rho_n, ([1], [0]), p)   # j i k' k
        pre = pre.transpose(0, 2, 1, 3).reshape(g * r, l * r)
        if rel.shape[1]:
            q = la.tdot(rel.reshape(g, na, -1), rho_n, ([1], [0]), p)  # j c k' k
            q = q.transpose(0, 2, 1, 3).reshape(g * r, -1)
        else:
            q = la.zeros(g * r, 0)
        quo, sec = _quotient_coordinates(q, g * r, p)
        self.dim = quo.shape[0]
        self.projection = la.mm(quo, pre, p)
        free = np.flatnonzero(sec.any(axis=1))                   # free coords (j, k')
        self.section_left = np.array([gens[f // r] for f in free], dtype=np.int64)
        self.section_right = np.array([f % r for f in free], dtype=np.int64)
        cols = self.section_left * r + self.section_right
        self.section = la.zeros(l * r, self.dim)
        self.section[cols, np.arange(self.dim)] = 1
        if np.any(self.projection[:, cols] != la.eye(self.dim)):
            raise InternalError("projection @ section != identity")
        self.projection.setflags(write=False)
        self.section.setflags(write=False)

    def _lift(self, pi, gens, g, na, l):
        """Linear right inverse of ``pi`` sending ``m_{gens_j}`` to ``1`` in slot j."""
        p, unit = self.p, self.base.unit
        chosen = []
        ech = la.Echelon(l, p)
        for j in range(g):
            v = np.zeros(g * na, dtype=np.int64)
            v[j * na:(j + 1) * na] = unit
            chosen.append(v)
            ech.add(la.mm(pi, v, p))
        for c in range(g * na):
            if ech.dim == l:
                break
            if ech.add(pi[:, c]):
                v = np.zeros(g * na, dtype=np.int64)
                v[c] = 1
                chosen.append(v)
        cmat = np.stack(chosen, axis=1)
        inv = la.inverse(la.mm(pi, cmat, p), p)
        if inv is None:
            raise InternalError("presentation does not span the module")
        return la.mm(cmat, inv, p)

    # -- elements -----------------------------------------------------------
    @property
    def section_columns(self) -> np.ndarray:
        return self.section_left * self.right.dim + self.section_right

    def pure(self, x, y) -> np.ndarray:
        """Coordinates of ``x ⊗ y``."""
        return la.mm(self.projection, np.kron(np.asarray(x, np.int64), np.asarray(y, np.int64)), self.p)

    def pure_columns(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Columns ``xs[:, c] ⊗ ys[:, c]``."""
        amb = np.einsum("ic,kc->ikc", xs, ys).reshape(-1, xs.shape[1]) % self.p
        return la.mm(self.projection, amb, self.p)

    # -- maps out of the tensor space ---------------------------------------
    def balancing_defect(self, w: np.ndarray):
        """First balancing relation not killed by ``w`` (a map on the ambient
        space) as ``(generator, i, k)``, or None."""
        p = self.p
        l, r = self.left.dim, self.right.dim
        if self.ambient == 0 or w.shape[0] == 0:
            return None
        wr = w.reshape(w.shape[0], l, r)
        for t, gen in enumerate(self.base.generators):
            x = self.left.over_base.act(gen)
            y = self.right.over_base.act(gen)
            lhs = la.tdot(wr, x, ([1], [0]), p).transpose(0, 2, 1)
            rhs = la.tdot(wr, y, ([2], [0]), p)
            bad = np.argwhere(np.any(lhs != rhs, axis=0))
            if bad.size:
                return (t, int(bad[0][0]), int(bad[0][1]))
        return None

    def descend(self, w: np.ndarray, what: str = "map") -> np.ndarray:
        """Matrix on this space of the map given by ``w`` on the ambient
        space; raises unless ``w`` kills every balancing relation."""
        bad = self.balancing_defect(w)
        if bad is not None:
            raise WellDefinednessViolation(f"{what} is not balanced over the base", bad)
        return np.ascontiguousarray(w[:, self.section_columns])

    @cached_property
    def left_module(self) -> FModule:
        """The left factor's algebra acting on the left factor."""
        lm = self.left.module
        act = [tensor_map(self, self, lm.action[t], None) for t in range(lm.algebra.dim)]
        return FModule(lm.algebra, np.stack(act) if self.dim else None, dim=self.dim, _trusted=True)

    @cached_property
    def right_module(self) -> FModule:
        rm = self.right.module
        act = [tensor_map(self, self, None, rm.action[t]) for t in range(rm.algebra.dim)]
        return FModule(rm.algebra, np.stack(act) if self.dim else None, dim=self.dim, _trusted=True)

    @cached_property
    def digest(self) -> str:
        return _digest(self.base.key, self.left.digest.encode(), self.right.digest.encode())

    def __repr__(self):
        return f"TensorSpace(dim={self.dim}, ambient={self.left.dim}x{self.right.dim})"


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def tensor_over(base: FiniteAlgebra, left: TwistedModule, right: TwistedModule) -> TensorSpace:
    """``left ⊗_base right``; cached by structural key."""
    if left.base != base or right.base != base:
        raise BaseMismatch("tensor factors are not modules over the declared base")
    key = (base.key, left.digest, right.digest, _ceiling >= left.dim * right.dim)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    space = TensorSpace(base, left, right)
    with _CACHE_LOCK:
        return _CACHE.setdefault(key, space)


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def kron_apply(proj: np.ndarray, shape, f: Optional[np.ndarray], g: Optional[np.ndarray], p: int) -> np.ndarray:
    """``proj @ kron(f, g)`` without forming the Kronecker product.

    ``proj`` acts on an ambient space of shape ``(l', r')``; ``None`` stands
    for an identity factor."""
    lt, rt = shape
    d = proj.shape[0]
    z = proj.reshape(d, lt, rt)
    if g is not None:
        z = la.tdot(z, g, ([2], [0]), p)                      # d l' r
    if f is not None:
        z = la.tdot(z, f, ([1], [0]), p).transpose(0, 2, 1)   # d l r
    return z.reshape(d, z.shape[1] * z.shape[2])


def tensor_map(src: TensorSpace, dst: TensorSpace, f: Optional[np.ndarray], g: Optional[np.ndarray],
               what: str = "f ⊗ g") -> np.ndarray:
    """Matrix of ``f ⊗ g : src -> dst``; verified well defined."""
    p = src.p
    if dst.dim == 0 or src.dim == 0:
        if src.ambient and dst.dim:
            w = kron_apply(dst.projection, (dst.left.dim, dst.right.dim), f, g, p)
            src.descend(w, what)
        return la.zeros(dst.dim, src.dim)
    w = kron_apply(dst.projection, (dst.left.dim, dst.right.dim), f, g, p)
    return src.descend(w, what)


def associator(src: TensorSpace, dst: TensorSpace, inner_left: TensorSpace,
               inner_right: TensorSpace) -> np.ndarray:
    """``(L ⊗ M) ⊗ N -> L ⊗ (M ⊗ N)``, ``(x ⊗ y) ⊗ z ↦ x ⊗ (y ⊗ z)``.

    ``src`` has left factor with the coordinates of ``inner_left`` (= L ⊗ M);
    ``dst`` has right factor with the coordinates of ``inner_right`` (= M ⊗ N).
    """
    p = src.p
    if src.dim == 0 or dst.dim == 0:
        return la.zeros(dst.dim, src.dim)
    dil, rn = inner_left.dim, src.right.dim
    ls, ms = inner_left.section_left, inner_left.section_right
    py = dst.projection.reshape(dst.dim, dst.left.dim, inner_right.dim)[:, ls, :]      # y s t
    pr = inner_right.projection.reshape(inner_right.dim, inner_right.left.dim, rn)[:, ms, :]  # t s n
    w = bmm(py.transpose(1, 0, 2), pr.transpose(1, 0, 2), p)                          # s y n
    w = w.transpose(1, 0, 2).reshape(dst.dim, dil * rn)
    out = src.descend(w, "associator")
    if out.shape[0] != out.shape[1] or la.rank(out, p) != out.shape[0]:
        raise InternalError("associator is not an isomorphism")
    return out


def bmm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Batched matrix product mod p."""
    k = a.shape[-1]
    if k == 0:
        return np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
    if k * (p - 1) ** 2 < 2**53:
        return np.mod(np.matmul(a.astype(np.float64), b.astype(np.float64)), p).astype(np.int64)
    return np.stack([la.mm(x, y, p) for x, y in zip(a, b)])


class AlgebraTensor:
    """``B ⊗_A C`` for algebra maps ``f: A -> B`` and ``g: A -> C``, with its
    componentwise product and the insertions ``j1(b) = b ⊗ 1``, ``j2(c) = 1 ⊗ c``."""

    def __init__(self, f: AlgebraHom, g: AlgebraHom):
        if f.src != g.src:
            raise BaseMismatch("algebra maps from different bases")
        b, c = f.dst, g.dst
        self.space = tensor_over(f.src, TwistedModule(regular_module(b), f),
                                 TwistedModule(regular_module(c), g))
        sp, p = self.space, f.p
        ls, rs = sp.section_left, sp.section_right
        x1 = b.mul[ls][:, ls]                                    # s s' nb
        x2 = c.mul[rs][:, rs]                                    # s s' nc
        amb = np.einsum("sta,stb->stab", x1, x2).reshape(sp.dim * sp.dim, b.dim * c.dim) % p
        mul = la.mm(amb, sp.projection.T, p).reshape(sp.dim, sp.dim, sp.dim)
        self.algebra = FiniteAlgebra(b.field, mul, sp.pure(b.unit, c.unit), _trusted=True)
        self.j1 = AlgebraHom(b, self.algebra, kron_apply(sp.projection, (b.dim, c.dim), None,
                                                         c.unit.reshape(-1, 1), p))
        self.j2 = AlgebraHom(c, self.algebra, kron_apply(sp.projection, (b.dim, c.dim),
                                                         b.unit.reshape(-1, 1), None, p))


_ALG_CACHE: dict = {}


def algebra_tensor(f: AlgebraHom, g: AlgebraHom) -> AlgebraTensor:
    key = (f.src.key, f.dst.key, f.matrix.tobytes(), g.dst.key, g.matrix.tobytes())
    hit = _ALG_CACHE.get(key)
    if hit is None:
        hit = _ALG_CACHE.setdefault(key, AlgebraTensor(f, g))
    return hit
