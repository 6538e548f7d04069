"""Descent along a single ring map: the Amitsur equalizer and Cartesian
presheaves on a finite diagram of algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import AlgebraHom, FiniteAlgebra, identity_hom
from .errors import NotSemilinear, ShapeError
from .modules import FModule, flatness_report, regular_module, restrict_scalars
from .tensor import TensorSpace, TwistedModule, kron_apply, tensor_map, tensor_over


def base_change_space(f: AlgebraHom, M: FModule) -> TensorSpace:
    """``B ⊗_C M`` for ``f: C -> B``."""
    return tensor_over(f.src, TwistedModule(regular_module(f.dst), f), TwistedModule(M))


def unit_map_into(space: TensorSpace, one: np.ndarray, n: int) -> np.ndarray:
    """``x -> 1 ⊗ x`` for the ``n`` basis vectors of the right factor."""
    if n == 0:
        return la.zeros(space.dim, 0)
    return kron_apply(space.projection, (space.left.dim, space.right.dim), one.reshape(-1, 1), None,
                      space.p)


@dataclass
class AmitsurReport:
    injective: bool
    image_dim: int
    agreement_dim: int
    equalizer: bool
    faithfully_flat: bool
    witness: Optional[list] = None
    dims: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.equalizer

    def to_dict(self) -> dict:
        return {"injective": self.injective, "image_dim": self.image_dim, "agreement_dim": self.agreement_dim,
                "equalizer": self.equalizer, "faithfully_flat": self.faithfully_flat,
                "witness": self.witness, "dims": self.dims}


def amitsur_maps(f: AlgebraHom, M: FModule):
    """``(l, j1 ⊗ id, j2 ⊗ id)`` for ``M -> B⊗M ⇉ B⊗B⊗M``."""
    p = f.p
    bm = base_change_space(f, M)
    bm_c = restrict_scalars(f, bm.left_module)
    bbm = tensor_over(f.src, TwistedModule(regular_module(f.dst), f), TwistedModule(bm_c))
    one = f.dst.unit
    l = unit_map_into(bm, one, M.dim)
    j1 = tensor_map(bm, bbm, None, l, "j1 ⊗ id")
    amb = kron_apply(bbm.projection, (bbm.left.dim, bbm.right.dim), one.reshape(-1, 1), bm.projection, p)
    j2 = bm.descend(amb, "j2 ⊗ id")
    return l, j1, j2


def amitsur_check(f: AlgebraHom, M: FModule) -> AmitsurReport:
    """Whether ``M -> B⊗_C M ⇉ B⊗_C B⊗_C M`` is an equalizer."""
    p = f.p
    l, j1, j2 = amitsur_maps(f, M)
    rank_l = la.rank(l, p) if l.size else 0
    injective = rank_l == M.dim
    witness = None
    if not injective:
        witness = ["kernel of l", la.nullspace(l, p)[:, 0].tolist()]
    agree = la.nullspace((j1 - j2) % p, p) if l.shape[0] else la.zeros(0, 0)
    adim = agree.shape[1]
    contained = all(la.rank(np.concatenate([l, agree[:, [c]]], axis=1), p) == rank_l for c in range(adim)) \
        if adim else True
    if injective and not contained:
        for c in range(adim):
            if la.rank(np.concatenate([l, agree[:, [c]]], axis=1), p) != rank_l:
                witness = ["agreement vector outside the image", agree[:, c].tolist()]
                break
    equalizer = injective and contained and adim == rank_l
    # image(l) always lies in the agreement locus; record it if not
    if np.any(la.mm((j1 - j2) % p, l, p)):
        equalizer = False
        witness = witness or ["image of l outside the agreement locus", None]
    return AmitsurReport(injective, rank_l, adim, equalizer, flatness_report(f).faithfully_flat, witness,
                         {"M": M.dim, "B⊗M": l.shape[0], "B⊗B⊗M": j1.shape[0]})


# -- Cartesian presheaves -----------------------------------------------------

@dataclass
class CartesianReport:
    cartesian: bool
    rank: int
    source_dim: int
    target_dim: int
    adjoint: np.ndarray

    @property
    def ok(self) -> bool:
        return self.cartesian

    def to_dict(self) -> dict:
        return {"cartesian": self.cartesian, "rank": self.rank, "source_dim": self.source_dim,
                "target_dim": self.target_dim, "adjoint": self.adjoint.tolist()}


def semilinearity_defect(f: AlgebraHom, MB: FModule, MC: FModule, rho: np.ndarray):
    p = f.p
    for t, gen in enumerate(f.src.generators):
        lhs = la.mm(rho, MB.act(gen), p)
        rhs = la.mm(MC.act(f(gen)), rho, p)
        d = la.first_difference(lhs, rhs)
        if d is not None:
            return (t, d)
    return None


def cartesian_adjoint(f: AlgebraHom, MB: FModule, MC: FModule, rho: np.ndarray) -> np.ndarray:
    """``C ⊗_B MB -> MC``, ``c ⊗ m -> c . rho(m)``."""
    p = f.p
    s = base_change_space(f, MB)
    if s.dim == 0 or MC.dim == 0:
        return la.zeros(MC.dim, s.dim)
    w = la.tdot(MC.action, rho, ([2], [0]), p).transpose(1, 0, 2)       # e c k
    return s.descend(w.reshape(MC.dim, -1), "adjoint of the restriction")


def cartesian_check(f: AlgebraHom, MB: FModule, MC: FModule, rho) -> CartesianReport:
    p = f.p
    if MB.algebra != f.src or MC.algebra != f.dst:
        raise ShapeError("modules are not over the source and target of the arrow")
    rho = la.asmat(rho, p).reshape(MC.dim, MB.dim)
    w = semilinearity_defect(f, MB, MC, rho)
    if w is not None:
        raise NotSemilinear("restriction is not semilinear over the arrow", w)
    adj = cartesian_adjoint(f, MB, MC, rho)
    r = la.rank(adj, p) if adj.size else 0
    iso = adj.shape[0] == adj.shape[1] and r == adj.shape[0]
    return CartesianReport(iso, r, adj.shape[1], adj.shape[0], adj)


@dataclass
class Arrow:
    src: int
    dst: int
    hom: AlgebraHom
    restriction: np.ndarray


class FinitePresheaf:
    """Modules over finitely many algebras under ``base`` with semilinear
    restriction maps along declared arrows."""

    def __init__(self, base: FiniteAlgebra, structure: Sequence[AlgebraHom], values: Sequence[FModule],
                 arrows: Sequence[Arrow], composites: Sequence[tuple[int, int, int]] = ()):
        self.base = base
        self.structure = list(structure)
        self.values = list(values)
        self.arrows = list(arrows)
        self.composites = list(composites)
        self._verify()

    @property
    def objects(self) -> list[FiniteAlgebra]:
        return [s.dst for s in self.structure]

    def _verify(self):
        p = self.base.p
        for s, v in zip(self.structure, self.values):
            if s.src != self.base or v.algebra != s.dst:
                raise ShapeError("object or value over the wrong algebra")
        for k, a in enumerate(self.arrows):
            under = la.mm(a.hom.matrix, self.structure[a.src].matrix, p)
            if np.any(under != self.structure[a.dst].matrix):
                raise ShapeError(f"arrow {k} is not a map under the base", k)
            w = semilinearity_defect(a.hom, self.values[a.src], self.values[a.dst], a.restriction)
            if w is not None:
                raise NotSemilinear(f"restriction along arrow {k} is not semilinear", (k, w))
        for first, second, comp in self.composites:
            a, b, c = self.arrows[first], self.arrows[second], self.arrows[comp]
            if np.any(la.mm(b.restriction, a.restriction, p) != c.restriction):
                raise ShapeError("restrictions do not compose", (first, second, comp))

    def check_arrows(self) -> list[CartesianReport]:
        return [cartesian_check(a.hom, self.values[a.src], self.values[a.dst], a.restriction)
                for a in self.arrows]

    @property
    def is_cartesian(self) -> bool:
        return all(r.cartesian for r in self.check_arrows())


def cartesianize(A: FiniteAlgebra, M: FModule, structure: Sequence[AlgebraHom],
                 arrows: Optional[Sequence[tuple[int, int, AlgebraHom]]] = None) -> FinitePresheaf:
    """``R -> R ⊗_A M`` with restrictions ``r ⊗ m -> g(r) ⊗ m``.

    By default the arrows are the structure maps out of every object that is
    ``A`` itself (identity structure map)."""
    spaces = [base_change_space(s, M) for s in structure]
    values = [s.left_module for s in spaces]
    if arrows is None:
        arrows = []
        for i, s in enumerate(structure):
            if s == identity_hom(A):
                arrows += [(i, j, t) for j, t in enumerate(structure) if j != i]
    built = []
    for i, j, g in arrows:
        rest = tensor_map(spaces[i], spaces[j], g.matrix, None, "g ⊗ id")
        built.append(Arrow(i, j, g, rest))
    return FinitePresheaf(A, structure, values, built)


def multiplication_iso(A: FiniteAlgebra, M: FModule) -> np.ndarray:
    """``A ⊗_A M -> M``, ``a ⊗ m -> a m``."""
    s = base_change_space(identity_hom(A), M)
    if s.dim == 0:
        return la.zeros(M.dim, 0)
    w = M.action.transpose(1, 0, 2).reshape(M.dim, -1)
    return s.descend(w, "multiplication")


def global_sections(P: FinitePresheaf, index: int, M: FModule) -> FModule:
    """The value at an object equal to the base, transported along
    ``A ⊗_A M -> M`` (which must be an isomorphism)."""
    A, p = P.base, P.base.p
    if P.structure[index] != identity_hom(A):
        raise ShapeError("global sections are read at the base object")
    mu = multiplication_iso(A, M)
    inv = la.inverse(mu, p)
    if inv is None:
        raise ShapeError("multiplication A ⊗ M -> M is not invertible")
    v = P.values[index]
    act = np.stack([la.chain(p, mu, v.action[t], inv) for t in range(A.dim)]) if M.dim else None
    return FModule(A, act, dim=M.dim)
