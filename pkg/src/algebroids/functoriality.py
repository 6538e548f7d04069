"""Induction ``B0 ⊗_{A0} -`` and co-induction ``U`` along a morphism of Hopf
algebroids ``phi: A -> B``, and an explicit check of their adjunction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg as la
from .comodule import (Comodule, ComoduleHom, comodule_hom_space, comodule_kernel, extended_comodule,
                       make_comodule, make_comodule_hom, quotient_comodule, spaces)
from .errors import InternalError, NotExtendedSource, ShapeError
from .hopf import AlgebroidHom
from .modules import FModule, ModuleHom, cokernel, regular_module, restrict_scalars
from .tensor import TensorSpace, TwistedModule, tensor_map, tensor_over


# -- induction ----------------------------------------------------------------

def induced_space(f: AlgebroidHom, M: FModule) -> TensorSpace:
    """``B0 ⊗_{A0} M``."""
    return tensor_over(f.src.A0, TwistedModule(regular_module(f.dst.A0), f.phi0), TwistedModule(M))


def induced_module(f: AlgebroidHom, M: FModule) -> FModule:
    return induced_space(f, M).left_module


def unit_insertion(f: AlgebroidHom, M: FModule) -> np.ndarray:
    """``m -> 1 ⊗ m`` from ``M`` into ``B0 ⊗ M``."""
    s = induced_space(f, M)
    if M.dim == 0:
        return la.zeros(s.dim, 0)
    return np.stack([s.pure(f.dst.A0.unit, e) for e in la.eye(M.dim)], axis=1)


def _extend_b0_linearly(f: AlgebroidHom, M: FModule, target_action: np.ndarray, h: np.ndarray,
                        what: str) -> np.ndarray:
    """``b ⊗ m -> b . h(m)`` on ``B0 ⊗ M``; ``target_action[b]`` is the
    action of the basis element ``b`` of ``B0`` on the target."""
    s = induced_space(f, M)
    p = f.src.p
    if s.dim == 0 or target_action.shape[1] == 0:
        return la.zeros(target_action.shape[1], s.dim)
    w = la.tdot(target_action, h, ([2], [0]), p).transpose(1, 0, 2)    # e b k
    return s.descend(w.reshape(target_action.shape[1], -1), what)


def induce(f: AlgebroidHom, C: Comodule) -> Comodule:
    """``(B0 ⊗ M, psi')`` with ``psi'(b ⊗ m) = sum etaL(b) phi1(c_i) ⊗ (1 ⊗ m_i)``."""
    if C.H is not f.src:
        raise ShapeError("comodule is not over the source algebroid")
    B, p = f.dst, f.src.p
    Mb = induced_module(f, C.M)
    Eb = spaces(B, Mb).E
    g = tensor_map(C.E, Eb, f.phi1.matrix, unit_insertion(f, C.M), "phi1 ⊗ (1 ⊗ -)")
    gpsi = la.mm(g, C.psi, p)
    act = la.tdot(B.etaL.matrix, Eb.left_module.action, ([0], [0]), p)     # b e f
    psi = _extend_b0_linearly(f, C.M, act, gpsi, "induced coaction")
    return make_comodule(B, Mb, psi)


def induce_map(f: AlgebroidHom, g: ComoduleHom) -> ComoduleHom:
    """``id ⊗ g`` between induced comodules."""
    src, dst = induce(f, g.src), induce(f, g.dst)
    m = tensor_map(induced_space(f, g.src.M), induced_space(f, g.dst.M), None, g.matrix, "id ⊗ g")
    return make_comodule_hom(src, dst, m)


# -- co-induction -------------------------------------------------------------

def coinduce_extended(f: AlgebroidHom, N: FModule) -> Comodule:
    """``A1 ⊗_{A0} N`` for a ``B0``-module ``N`` viewed over ``A0``."""
    return extended_comodule(f.src, restrict_scalars(f.phi0, N))


def coinduce_map(f: AlgebroidHom, lam: ComoduleHom) -> ComoduleHom:
    """``U(lam) = (id ⊗ eps ⊗ id)(id ⊗ lam)(id ⊗ phi1 ⊗ id)(nabla ⊗ id)`` for a
    map ``lam: B1 ⊗ N -> B1 ⊗ N'`` of extended comodules."""
    A, B, p = f.src, f.dst, f.src.p
    N, N2 = lam.src.extended_from, lam.dst.extended_from
    if N is None or N2 is None:
        raise NotExtendedSource("coinduce_map needs a map between extended comodules", None)
    if lam.src.H is not B:
        raise ShapeError("map is not over the target algebroid")
    Na, N2a = restrict_scalars(f.phi0, N), restrict_scalars(f.phi0, N2)
    sa, sa2 = spaces(A, Na), spaces(A, N2a)
    step1 = sa.nabla_id                                            # A1⊗N -> A1⊗(A1⊗N)
    inner1 = tensor_map(sa.E, spaces(B, N).E, f.phi1.matrix, None, "phi1 ⊗ id")
    x1 = tensor_over(A.A0, A.A1_right, TwistedModule(lam.src.M, f.phi0))
    x2 = tensor_over(A.A0, A.A1_right, TwistedModule(lam.dst.M, f.phi0))
    step2 = tensor_map(sa.EE, x1, None, inner1, "id ⊗ phi1 ⊗ id")
    step3 = tensor_map(x1, x2, None, lam.matrix, "id ⊗ lam")
    step4 = tensor_map(x2, sa2.E, None, spaces(B, N2).eps_id, "id ⊗ eps ⊗ id")
    u = la.chain(p, step4, step3, step2, step1)
    return make_comodule_hom(coinduce_extended(f, N), coinduce_extended(f, N2), u)


@dataclass
class Coinduction:
    """``U(P)`` as the kernel of ``U(psi' lam')`` inside ``A1 ⊗ P``."""

    comodule: Comodule
    inclusion: ComoduleHom
    ambient: Comodule
    presentation: ComoduleHom


def coinduce_data(f: AlgebroidHom, P: Comodule) -> Coinduction:
    B, p = f.dst, f.src.p
    if P.H is not B:
        raise ShapeError("comodule is not over the target algebroid")
    ext = extended_comodule(B, P.M)
    psi = ModuleHom(P.M, ext.M, P.psi, check=False)
    _, lam_prime = cokernel(psi)
    quo, _ = quotient_comodule(ext, lam_prime)        # verifies image(psi) is a subcomodule
    ext2 = extended_comodule(B, quo.M)
    lam = make_comodule_hom(ext, ext2, la.mm(quo.psi, lam_prime.matrix, p))
    u = coinduce_map(f, lam)
    k, incl = comodule_kernel(u)
    return Coinduction(k, incl, u.src, lam)


def coinduce(f: AlgebroidHom, P: Comodule) -> Comodule:
    return coinduce_data(f, P).comodule


def coinduce_morphism(f: AlgebroidHom, g: ComoduleHom) -> ComoduleHom:
    """``U(g)`` restricted from ``id ⊗ g`` on the ambient extended comodules."""
    A, p = f.src, f.src.p
    d1, d2 = coinduce_data(f, g.src), coinduce_data(f, g.dst)
    Pa, P2a = restrict_scalars(f.phi0, g.src.M), restrict_scalars(f.phi0, g.dst.M)
    amb = tensor_map(spaces(A, Pa).E, spaces(A, P2a).E, None, g.matrix, "id ⊗ g")
    m = la.solve(d2.inclusion.matrix, la.mm(amb, d1.inclusion.matrix, p), p)
    if m is None:
        raise ShapeError("id ⊗ g does not preserve the co-induced subcomodules")
    return make_comodule_hom(d1.comodule, d2.comodule, m)


def coinduced_extended_iso(f: AlgebroidHom, N: FModule) -> ComoduleHom:
    """The canonical isomorphism ``A1 ⊗ N -> U(B1 ⊗ N)``,
    ``x -> (id ⊗ phi1 ⊗ id)(nabla ⊗ id)(x)``, onto the kernel computed by
    ``coinduce_data``."""
    A, B, p = f.src, f.dst, f.src.p
    P = extended_comodule(B, N)
    data = coinduce_data(f, P)
    src = coinduce_extended(f, N)
    sa = spaces(A, restrict_scalars(f.phi0, N))
    inner = tensor_map(sa.E, spaces(B, N).E, f.phi1.matrix, None, "phi1 ⊗ id")
    x1 = tensor_over(A.A0, A.A1_right, TwistedModule(P.M, f.phi0))
    step = la.mm(tensor_map(sa.EE, x1, None, inner, "id ⊗ phi1 ⊗ id"), sa.nabla_id, p)
    target = spaces(A, restrict_scalars(f.phi0, P.M)).E
    into = la.chain(p, target.projection, x1.section, step)
    m = la.solve(data.inclusion.matrix, into, p)
    if m is None or m.shape[0] != m.shape[1] or la.rank(m, p) != m.shape[0]:
        raise InternalError("A1 ⊗ N -> U(B1 ⊗ N) is not an isomorphism")
    return make_comodule_hom(src, data.comodule, m)


# -- the adjunction -----------------------------------------------------------

@dataclass
class AdjunctionReport:
    hom: AlgebroidHom
    M: Comodule
    P: Comodule
    dim_left: int
    dim_right: int
    forward: np.ndarray
    backward: np.ndarray
    roundtrip_ok: bool
    witness: Optional[object] = None
    left_basis: list = field(default_factory=list, repr=False)
    right_basis: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.dim_left == self.dim_right and self.roundtrip_ok

    def to_dict(self) -> dict:
        return {"dim_left": self.dim_left, "dim_right": self.dim_right, "roundtrip_ok": self.roundtrip_ok,
                "ok": self.ok, "witness": self.witness,
                "forward": self.forward.tolist(), "backward": self.backward.tolist()}


class Adjunction:
    """Forward and backward maps of the adjunction for fixed ``(M, P)``."""

    def __init__(self, f: AlgebroidHom, M: Comodule, P: Comodule):
        self.f, self.M, self.P = f, M, P
        self.induced = induce(f, M)
        self.coinduced = coinduce_data(f, P)
        A = f.src
        self.Pa = restrict_scalars(f.phi0, P.M)
        self.sp = spaces(A, self.Pa)
        self.iota = unit_insertion(f, M.M)

    def forward(self, g: np.ndarray) -> Optional[np.ndarray]:
        """``g: B0 ⊗ M -> P`` to ``(id ⊗ g(1 ⊗ -)) psi_M : M -> U(P)``."""
        p = self.f.src.p
        gi = la.mm(g, self.iota, p)
        amb = la.mm(tensor_map(self.M.E, self.sp.E, None, gi, "id ⊗ g(1 ⊗ -)"), self.M.psi, p)
        return la.solve(self.coinduced.inclusion.matrix, amb, p) if amb.size else la.zeros(
            self.coinduced.comodule.dim, self.M.dim)

    def backward(self, j: np.ndarray) -> np.ndarray:
        """``j: M -> U(P)`` to ``b ⊗ m -> b (eps ⊗ id)(j(m))``."""
        p = self.f.src.p
        h = la.chain(p, self.sp.eps_id, self.coinduced.inclusion.matrix, j)
        return _extend_b0_linearly(self.f, self.M.M, self.P.M.action, h, "B0-linear extension")


def _coordinates(basis: list, mats: list, p: int):
    """Coordinates of each matrix in ``mats`` with respect to ``basis``."""
    if not basis:
        return la.zeros(0, len(mats)), all(not np.any(m) for m in mats)
    b = np.stack([x.matrix.reshape(-1) for x in basis], axis=1)
    if not mats:
        return la.zeros(len(basis), 0), True
    t = np.stack([m.reshape(-1) for m in mats], axis=1)
    c = la.solve(b, t, p)
    return c, c is not None


def adjunction_check(f: AlgebroidHom, M: Comodule, P: Comodule) -> AdjunctionReport:
    """Brute-force both hom spaces, map bases across and compare."""
    p = f.src.p
    adj = Adjunction(f, M, P)
    left = comodule_hom_space(adj.induced, P)
    right = comodule_hom_space(M, adj.coinduced.comodule)
    witness = None
    fw_imgs = []
    for i, g in enumerate(left):
        img = adj.forward(g.matrix)
        if img is None:
            witness = witness or ("forward leaves U(P)", i)
            img = la.zeros(adj.coinduced.comodule.dim, M.dim)
        fw_imgs.append(img)
    bw_imgs = [adj.backward(j.matrix) for j in right]
    F, okf = _coordinates(right, fw_imgs, p)
    Bm, okb = _coordinates(left, bw_imgs, p)
    if not okf:
        witness = witness or ("forward image is not a comodule map", None)
    if not okb:
        witness = witness or ("backward image is not a comodule map", None)
    roundtrip = okf and okb and witness is None
    if roundtrip:
        FB, BF = la.mm(F, Bm, p), la.mm(Bm, F, p)
        if FB.shape != (len(right), len(right)) or np.any(FB != la.eye(len(right))):
            roundtrip, witness = False, ("forward ∘ backward != id", la.first_difference(FB, la.eye(FB.shape[0])))
        elif np.any(BF != la.eye(len(left))):
            roundtrip, witness = False, ("backward ∘ forward != id", la.first_difference(BF, la.eye(len(left))))
    if F is None:
        F = la.zeros(len(right), len(left))
    if Bm is None:
        Bm = la.zeros(len(left), len(right))
    return AdjunctionReport(f, M, P, len(left), len(right), F, Bm, roundtrip, witness, left, right)


def adjunction_unit(f: AlgebroidHom, M: Comodule) -> ComoduleHom:
    """``M -> U(B0 ⊗ M)``, the image of the identity under the forward map."""
    ind = induce(f, M)
    adj = Adjunction(f, M, ind)
    u = adj.forward(la.eye(ind.dim))
    if u is None:
        raise ShapeError("unit does not land in the co-induced comodule")
    return make_comodule_hom(M, adj.coinduced.comodule, u)
