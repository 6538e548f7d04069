"""Comodules over a Hopf algebroid, their morphisms, extended comodules,
kernels, cokernels and images, the counit retraction and generator witnesses."""

from __future__ import annotations

import threading
from functools import cached_property
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import identity_hom
from .errors import (NotCoassociative, NotComoduleHom, NotCounital, NotLinear, ShapeError,
                     StructureDoesNotRestrict, ZeroVector)
from .hopf import CheckReport, HopfAlgebroid
from .modules import (FModule, ModuleHom, free_module, image, kernel, cokernel, linearity_constraints,
                      presentation_map, restrict_scalars, _sub_from_basis)
from .tensor import TensorSpace, TwistedModule, associator, tensor_map, tensor_over

_LOCK = threading.Lock()


def _memo(h: HopfAlgebroid, key, build):
    """Per-algebroid cache with insert-if-absent semantics."""
    store = h.__dict__.setdefault("_memo", {})
    hit = store.get(key)
    if hit is None:
        value = build()
        with _LOCK:
            hit = store.setdefault(key, value)
    return hit


def base_change(h: HopfAlgebroid, m: FModule) -> TensorSpace:
    """``A1 ⊗_{A0} M`` with ``A1`` over ``A0`` through ``etaR``."""
    return h.tensor_with(m)


def base_change_left(h: HopfAlgebroid, m: FModule) -> TensorSpace:
    """``A1 ⊗_{A0} M`` with ``A1`` over ``A0`` through ``etaL``."""
    return tensor_over(h.A0, h.A1_left, TwistedModule(m, identity_hom(h.A0)))


def as_A0_module(h: HopfAlgebroid, e: TensorSpace) -> FModule:
    """A tensor space with ``A1`` on the left viewed over ``A0`` through ``etaL``."""
    return restrict_scalars(h.etaL, e.left_module)


class Spaces:
    """Tensor spaces and comparison maps attached to an ``A0``-module ``M``:
    ``E = A1 ⊗ M``, ``EE = A1 ⊗ E`` and ``TM = (A1 ⊗ A1) ⊗ M`` with the
    associator ``TM -> EE``."""

    def __init__(self, h: HopfAlgebroid, m: FModule):
        self.h = h
        self.m = m
        self.E = base_change(h, m)
        self.E_module = as_A0_module(h, self.E)

    @cached_property
    def EE(self) -> TensorSpace:
        return base_change(self.h, self.E_module)

    @cached_property
    def TM(self) -> TensorSpace:
        h = self.h
        return tensor_over(h.A0, TwistedModule(h.T.right_module, h.etaR), TwistedModule(self.m, identity_hom(h.A0)))

    @cached_property
    def assoc(self) -> np.ndarray:
        return associator(self.TM, self.EE, self.h.T, self.E)

    @cached_property
    def nabla_id(self) -> np.ndarray:
        """``nabla ⊗ id : E -> EE`` (through the associator)."""
        h = self.h
        return la.mm(self.assoc, tensor_map(self.E, self.TM, h.nabla, None, "nabla ⊗ id"), h.p)

    @cached_property
    def eps_id(self) -> np.ndarray:
        """``eps ⊗ id : E -> M``, ``x ⊗ m -> eps(x) m``."""
        h, m = self.h, self.m
        if m.dim == 0:
            return la.zeros(0, self.E.dim)
        w = la.tdot(h.eps.matrix, m.action, ([0], [0]), h.p)       # i m' k
        w = w.transpose(1, 0, 2).reshape(m.dim, -1)
        return self.E.descend(w, "eps ⊗ id")

    def id_tensor(self, f: np.ndarray, other: "Spaces") -> np.ndarray:
        """``id ⊗ f : A1 ⊗ M -> A1 ⊗ N`` for ``f: M -> N`` (``other`` = N's spaces)."""
        return tensor_map(self.E, other.E, None, f, "id ⊗ f")


def spaces(h: HopfAlgebroid, m: FModule) -> Spaces:
    return _memo(h, ("spaces", m.key), lambda: Spaces(h, m))


class Comodule:
    """``(M, psi)`` with ``psi: M -> A1 ⊗_{A0} M`` given in the basis of the
    computed tensor space."""

    def __init__(self, H: HopfAlgebroid, M: FModule, psi: np.ndarray, report: Optional[CheckReport] = None,
                 extended_from: Optional[FModule] = None):
        self.H = H
        self.M = M
        self.psi = psi
        self.report = report
        self.extended_from = extended_from

    @property
    def dim(self) -> int:
        return self.M.dim

    @property
    def spaces(self) -> Spaces:
        return spaces(self.H, self.M)

    @property
    def E(self) -> TensorSpace:
        return self.spaces.E

    def __eq__(self, other):
        return (isinstance(other, Comodule) and self.H is other.H and self.M == other.M
                and np.array_equal(self.psi, other.psi))

    def __hash__(self):
        return hash((id(self.H), self.M.key, self.psi.tobytes()))

    def __repr__(self):
        return f"Comodule(dim={self.dim})"


def check_comodule(h: HopfAlgebroid, m: FModule, psi: np.ndarray) -> CheckReport:
    rep = CheckReport()
    sp = spaces(h, m)
    p = h.p
    # twisted A0-linearity, on algebra generators of A0
    w = None
    for t, gen in enumerate(h.A0.generators):
        lhs = la.mm(psi, m.act(gen), p)
        rhs = la.mm(sp.E_module.act(gen), psi, p)
        d = la.first_difference(lhs, rhs)
        if d is not None:
            w = (t, d)
            break
    rep.record("linear", w)
    rep.record("counit", la.first_difference(la.mm(sp.eps_id, psi, p), la.eye(m.dim)))
    if w is None:
        lhs = la.mm(sp.nabla_id, psi, p)
        rhs = la.mm(tensor_map(sp.E, sp.EE, None, psi, "id ⊗ psi"), psi, p)
        rep.record("coassociative", la.first_difference(lhs, rhs))
    else:
        rep.record("coassociative", "skipped: psi is not A0-linear")
    return rep


def make_comodule(H: HopfAlgebroid, M: FModule, psi, *, lenient: bool = False,
                  extended_from: Optional[FModule] = None):
    """Validated constructor; raises ``NotLinear``, ``NotCounital`` or
    ``NotCoassociative`` with the witnessing basis vector."""
    if M.algebra != H.A0:
        raise ShapeError("comodule module must be over A0")
    sp = spaces(H, M)
    psi = la.asmat(psi, H.p)
    if psi.shape != (sp.E.dim, M.dim):
        psi = psi.reshape(sp.E.dim, M.dim)
    psi.setflags(write=False)
    rep = check_comodule(H, M, psi)
    if lenient:
        return rep
    for name, exc in (("linear", NotLinear), ("counit", NotCounital), ("coassociative", NotCoassociative)):
        passed, w = rep.results[name]
        if not passed:
            raise exc(f"psi is not {name}", w)
    return Comodule(H, M, psi, rep, extended_from)


def extended_comodule(H: HopfAlgebroid, N: FModule) -> Comodule:
    """``A1 ⊗_{A0} N`` with coaction ``nabla ⊗ id``."""
    sp_n = spaces(H, N)
    M = sp_n.E_module
    psi = sp_n.nabla_id
    # the target of nabla ⊗ id is ``A1 ⊗ M`` for M the underlying module
    return make_comodule(H, M, psi, extended_from=N)


def canonical_unit_coaction(H: HopfAlgebroid, M: FModule) -> np.ndarray:
    """``m -> 1 ⊗ m``; the coaction of the unit algebroid."""
    e = spaces(H, M).E
    one = H.A1.unit
    return np.stack([e.pure(one, M_basis) for M_basis in la.eye(M.dim)], axis=1) if M.dim else la.zeros(e.dim, 0)


class ComoduleHom:
    def __init__(self, src: Comodule, dst: Comodule, map: ModuleHom):
        self.src = src
        self.dst = dst
        self.map = map

    @property
    def matrix(self) -> np.ndarray:
        return self.map.matrix

    def then(self, other: "ComoduleHom") -> "ComoduleHom":
        return ComoduleHom(self.src, other.dst, self.map.then(other.map))

    def __repr__(self):
        return f"ComoduleHom({self.src.dim} -> {self.dst.dim})"


def comodule_hom_defect(src: Comodule, dst: Comodule, matrix: np.ndarray):
    p = src.H.p
    idf = tensor_map(src.E, dst.E, None, matrix, "id ⊗ f")
    return la.first_difference(la.mm(idf, src.psi, p), la.mm(dst.psi, matrix, p))


def make_comodule_hom(src: Comodule, dst: Comodule, matrix) -> ComoduleHom:
    if src.H is not dst.H:
        raise ShapeError("comodules over different algebroids")
    f = matrix if isinstance(matrix, ModuleHom) else ModuleHom(src.M, dst.M, matrix)
    w = comodule_hom_defect(src, dst, f.matrix)
    if w is not None:
        raise NotComoduleHom("map does not commute with the coactions", w)
    return ComoduleHom(src, dst, f)


def identity_comodule_hom(c: Comodule) -> ComoduleHom:
    return ComoduleHom(c, c, ModuleHom(c.M, c.M, la.eye(c.dim), check=False))


def comodule_hom_constraints(src: Comodule, dst: Comodule) -> np.ndarray:
    """Linear conditions on ``vec(X)`` (row-major, ``X`` of shape
    ``dst.dim x src.dim``) for ``X`` to be a comodule map."""
    p = src.H.p
    a, b = dst.dim, src.dim
    lin = linearity_constraints(src.M, dst.M)
    if a == 0 or b == 0:
        return lin
    es, ed = src.E, dst.E
    n1 = es.left.dim
    y = la.mm(es.section, src.psi, p).reshape(n1, b, b)            # i b c
    pd = ed.projection.reshape(ed.dim, n1, a)                       # e i a
    coef = la.tdot(pd, y, ([1], [0]), p)                            # e a b c
    coef = coef.transpose(0, 3, 1, 2).copy()                        # e c a b
    for c in range(b):
        coef[:, c, :, c] = (coef[:, c, :, c] - dst.psi) % p
    return np.concatenate([lin, coef.reshape(ed.dim * b, a * b)], axis=0)


def comodule_hom_space(src: Comodule, dst: Comodule) -> list[ComoduleHom]:
    """Basis of the comodule maps ``src -> dst``, by solving the linear system."""
    p = src.H.p
    a, b = dst.dim, src.dim
    if a == 0 or b == 0:
        return []
    ns = la.nullspace(comodule_hom_constraints(src, dst), p)
    return [ComoduleHom(src, dst, ModuleHom(src.M, dst.M, ns[:, j].reshape(a, b), check=False))
            for j in range(ns.shape[1])]


def _restrict_coaction(c: Comodule, sub: FModule, incl: ModuleHom) -> np.ndarray:
    """``psi_K`` with ``(id ⊗ incl) psi_K = psi incl``."""
    p = c.H.p
    sp_k = spaces(c.H, sub)
    j = tensor_map(sp_k.E, c.E, None, incl.matrix, "id ⊗ incl")
    target = la.mm(c.psi, incl.matrix, p)
    sol = la.solve(j, target, p) if sub.dim else la.zeros(sp_k.E.dim, 0)
    if sol is None:
        raise StructureDoesNotRestrict("coaction does not restrict to the submodule", None)
    return sol


def subcomodule(c: Comodule, basis: np.ndarray) -> tuple[Comodule, ComoduleHom]:
    """The subcomodule on the span of the columns of ``basis``."""
    sub, incl = _sub_from_basis(c.M, la.column_space(basis, c.H.p) if basis.size else la.zeros(c.dim, 0))
    return _as_sub(c, sub, incl)


def _as_sub(c, sub, incl):
    psi = _restrict_coaction(c, sub, incl)
    k = make_comodule(c.H, sub, psi)
    return k, make_comodule_hom(k, c, incl)


def quotient_comodule(c: Comodule, surj: ModuleHom) -> tuple[Comodule, ComoduleHom]:
    """Comodule structure on the target of a module surjection out of ``c``."""
    p = c.H.p
    q = surj.dst
    sp_q = spaces(c.H, q)
    pushed = la.mm(tensor_map(c.E, sp_q.E, None, surj.matrix, "id ⊗ proj"), c.psi, p)
    sec = la.solve(surj.matrix, la.eye(q.dim), p) if q.dim else la.zeros(c.dim, 0)
    if sec is None:
        raise StructureDoesNotRestrict("map is not surjective", None)
    psi_q = la.mm(pushed, sec, p)
    if np.any(la.mm(psi_q, surj.matrix, p) != pushed):
        raise StructureDoesNotRestrict("coaction does not descend to the quotient",
                                       la.first_difference(la.mm(psi_q, surj.matrix, p), pushed))
    k = make_comodule(c.H, q, psi_q)
    return k, make_comodule_hom(c, k, surj)


def comodule_kernel(f: ComoduleHom) -> tuple[Comodule, ComoduleHom]:
    sub, incl = kernel(f.map)
    return _as_sub(f.src, sub, incl)


def comodule_cokernel(f: ComoduleHom) -> tuple[Comodule, ComoduleHom]:
    _, surj = cokernel(f.map)
    return quotient_comodule(f.dst, surj)


def comodule_image(f: ComoduleHom) -> tuple[Comodule, ComoduleHom]:
    sub, incl = image(f.map)
    return _as_sub(f.dst, sub, incl)


def counit_retraction(c: Comodule) -> ModuleHom:
    """``eps ⊗ id : A1 ⊗ M -> M``, an ``A0``-linear left inverse of ``psi``."""
    sp = c.spaces
    r = ModuleHom(sp.E_module, c.M, sp.eps_id)
    if np.any(la.mm(r.matrix, c.psi, c.H.p) != la.eye(c.dim)):
        raise NotCounital("retraction fails", la.first_difference(la.mm(r.matrix, c.psi, c.H.p), la.eye(c.dim)))
    return r


class GeneratorWitness:
    """``q: K -> C`` with ``K`` a subcomodule of the extended comodule on a
    free module of rank ``n`` and ``q(preimage) = x``."""

    def __init__(self, K: Comodule, q: ComoduleHom, preimage: np.ndarray, n: int, ambient: Comodule):
        self.K = K
        self.q = q
        self.preimage = preimage
        self.n = n
        self.ambient = ambient

    def __iter__(self):
        return iter((self.K, self.q, self.preimage))


def generator_witness(c: Comodule, x) -> GeneratorWitness:
    """Exhibit ``x`` in the image of a comodule map from a subcomodule of a
    finite free extended comodule ``A1 ⊗ A0^n``."""
    h, p = c.H, c.H.p
    x = la.asmat(x, p).reshape(-1)
    if not np.any(x):
        raise ZeroVector("x must be nonzero", None)
    n = c.dim
    free = free_module(h.A0, n)
    pres = presentation_map(c.M, list(range(n)))
    ext = extended_comodule(h, free)
    # pbar = id ⊗ p : A1 ⊗ A0^n -> A1 ⊗ M, written on the coordinates of ext
    pbar = tensor_map(spaces(h, free).E, c.E, None, pres.matrix, "id ⊗ p")
    ns = la.nullspace(np.concatenate([pbar, (-c.psi) % p], axis=1), p)
    kbasis = la.column_space(ns[:ext.dim], p) if ns.size else la.zeros(ext.dim, 0)
    K, incl = subcomodule(ext, kbasis)
    r = counit_retraction(c)
    qmat = la.chain(p, r.matrix, pbar, incl.matrix)
    q = make_comodule_hom(K, c, qmat)
    v = la.solve(pbar, la.mm(c.psi, x, p), p)
    coords = la.solve(incl.matrix, v, p)
    if coords is None or np.any(la.mm(qmat, coords, p) != x):
        raise StructureDoesNotRestrict("preimage of x not found", None)
    return GeneratorWitness(K, q, coords, n, ext)
