"""Equivariant modules for a finite group acting on an algebra, their
correspondence with comodules over the group-action algebroid, and
brute-force enumeration on both sides.

A comodule ``psi`` and an equivariant structure ``pi`` correspond through
``psi(m) = sum_g (e_g ⊗ 1) ⊗ pi_{g^-1}(m)``; with the compatibility
``pi_g(b m) = (g.b) pi_g(m)`` this is the orientation that makes ``psi``
linear for the left unit.
"""

from __future__ import annotations

import itertools
from typing import Optional

import numpy as np

from . import linalg as la
from .comodule import Comodule, make_comodule, spaces
from .errors import NotEquivariant, NotGroupActionAlgebroid, SearchSpaceTooLarge
from .groups import FiniteGroup, GroupAction, cyclic_group, group_product, permutation_action, symmetric_group
from .hopf import HopfAlgebroid, group_action_algebroid
from .modules import FModule

DEFAULT_SEARCH_CEILING = 10**7


class EquivariantModule:
    def __init__(self, action: GroupAction, M: FModule, pi, *, check: bool = True):
        self.action = action
        self.M = M
        self.pi = la.asmat(pi, action.algebra.p).reshape(action.group.order, M.dim, M.dim)
        self.pi.setflags(write=False)
        if check:
            w = equivariance_defect(action, M.action, self.pi)
            if w is not None:
                raise NotEquivariant(f"equivariant structure fails: {w[0]}", w[1])

    @property
    def dim(self) -> int:
        return self.M.dim

    def key(self) -> bytes:
        return self.M.action.tobytes() + b"|" + self.pi.tobytes()

    def __eq__(self, other):
        return isinstance(other, EquivariantModule) and self.M == other.M and np.array_equal(self.pi, other.pi)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"EquivariantModule(dim={self.dim})"


def equivariance_defect(action: GroupAction, rho_m: np.ndarray, pi: np.ndarray):
    """First failing law as ``(name, witness)``, or None.  Works directly on
    matrices so the enumeration does not depend on the comodule code."""
    G, B, p = action.group, action.algebra, action.algebra.p
    d = rho_m.shape[-1]
    eye = la.eye(d)
    if np.any(pi[G.identity] != eye):
        return ("identity", G.identity)
    for g, h in itertools.product(range(G.order), repeat=2):
        if np.any(la.mm(pi[g], pi[h], p) != pi[G.mul(g, h)]):
            return ("homomorphism", (g, h))
    for g in range(G.order):
        moved = la.tdot(action.rho[g], rho_m, ([0], [0]), p)     # action of g.e_b, for each b
        for b in range(B.dim):
            if np.any(la.mm(pi[g], rho_m[b], p) != la.mm(moved[b], pi[g], p)):
                return ("compatibility", (g, b))
    return None


def make_equivariant_module(action: GroupAction, M: FModule, pi) -> EquivariantModule:
    return EquivariantModule(action, M, pi)


def _algebroid_of(action: GroupAction, H: Optional[HopfAlgebroid]) -> HopfAlgebroid:
    return H if H is not None else group_action_algebroid(action)


def comodule_from_equivariant(E: EquivariantModule, H: Optional[HopfAlgebroid] = None) -> Comodule:
    """``psi(m) = sum_g (e_g ⊗ 1) ⊗ pi_{g^-1}(m)``."""
    H = _algebroid_of(E.action, H)
    G, B, p = E.action.group, E.action.algebra, H.p
    e = spaces(H, E.M).E
    d, m = B.dim, E.dim
    if m == 0:
        return make_comodule(H, E.M, la.zeros(e.dim, 0))
    psi = la.zeros(e.dim, m)
    for g in range(G.order):
        u = np.zeros(H.A1.dim, dtype=np.int64)
        u[g * d:(g + 1) * d] = B.unit
        psi = (psi + e.pure_columns(np.repeat(u[:, None], m, axis=1), E.pi[G.inv(g)])) % p
    return make_comodule(H, E.M, psi)


def evaluation_maps(H: HopfAlgebroid, M: FModule) -> list[np.ndarray]:
    """For each group element ``h``, the map ``A1 ⊗ M -> M`` sending
    ``(e_k ⊗ c) ⊗ m`` to ``[k = h] (h^-1.c) m``."""
    act = H.group_action
    if act is None:
        raise NotGroupActionAlgebroid("algebroid was not built from a group action", None)
    G, B, p = act.group, act.algebra, H.p
    e = spaces(H, M).E
    d, n = B.dim, M.dim
    out = []
    for h in range(G.order):
        w = np.zeros((n, H.A1.dim, n), dtype=np.int64)
        moved = la.tdot(act.rho[G.inv(h)], M.action, ([0], [0]), p)     # j -> action of h^-1.e_j
        for j in range(d):
            w[:, h * d + j, :] = moved[j]
        out.append(e.descend(w.reshape(n, -1), "evaluation"))
    return out


def equivariant_from_comodule(C: Comodule) -> EquivariantModule:
    """``pi_g`` is the ``g^-1`` evaluation of ``psi``."""
    H = C.H
    act = H.group_action
    if act is None:
        raise NotGroupActionAlgebroid("algebroid was not built from a group action", None)
    G, p = act.group, H.p
    if C.dim == 0:
        return EquivariantModule(act, C.M, np.zeros((G.order, 0, 0), dtype=np.int64))
    ev = evaluation_maps(H, C.M)
    pi = np.stack([la.mm(ev[G.inv(g)], C.psi, p) for g in range(G.order)])
    return EquivariantModule(act, C.M, pi)


def equivariant_hom_space(E1: EquivariantModule, E2: EquivariantModule) -> list[np.ndarray]:
    """Matrices commuting with the module actions and every ``pi_g``."""
    p = E1.action.algebra.p
    a, b = E2.dim, E1.dim
    if a == 0 or b == 0:
        return []
    blocks = []
    pairs = list(zip(E1.M.action, E2.M.action)) + list(zip(E1.pi, E2.pi))
    for x, y in pairs:
        blocks.append((np.kron(la.eye(a), x.T) - np.kron(y, la.eye(b))) % p)
    ns = la.nullspace(np.vstack(blocks), p)
    return [ns[:, j].reshape(a, b) for j in range(ns.shape[1])]


# -- enumeration --------------------------------------------------------------

def _all_matrices(p: int, d: int) -> np.ndarray:
    if d == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(p), repeat=d * d)), dtype=np.int64).reshape(-1, d, d)


def search_space(action: GroupAction, dim: int) -> int:
    """Candidate tuples examined: module actions of the algebra basis and
    ``pi_g`` for the non-identity group elements."""
    p = action.algebra.p
    return p ** (dim * dim * (action.group.order - 1 + action.algebra.dim))


def enumerate_module_actions(B, dim: int) -> list[np.ndarray]:
    """Every ``B``-module structure on ``F_p^dim`` as an action array,
    found by exhaustion over basis-element matrices."""
    p, n = B.p, B.dim
    mats = _all_matrices(p, dim)
    eye = la.eye(dim)
    found = []
    # products of candidate matrices, precomputed
    prods = np.einsum("xij,yjk->xyik", mats, mats) % p if dim else None
    for idx in itertools.product(range(len(mats)), repeat=n):
        rho = mats[list(idx)]
        if dim and np.any(np.tensordot(B.unit, rho, axes=([0], [0])) % p != eye):
            continue
        ok = True
        for i in range(n):
            for j in range(i, n):
                lhs = prods[idx[i], idx[j]] if dim else None
                rhs = np.tensordot(B.mul[i, j], rho, axes=([0], [0])) % p if dim else None
                if dim and np.any(lhs != rhs):
                    ok = False
                    break
                if dim and np.any(prods[idx[i], idx[j]] != prods[idx[j], idx[i]]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(rho.copy())
    return found


def enumerate_equivariant(action: GroupAction, dim: int, ceiling: int = DEFAULT_SEARCH_CEILING) -> list[EquivariantModule]:
    """All equivariant structures on ``F_p^dim``, sorted canonically."""
    size = search_space(action, dim)
    if size > ceiling:
        raise SearchSpaceTooLarge(f"search space {size} exceeds ceiling {ceiling}", size)
    G, B, p = action.group, action.algebra, action.algebra.p
    mats = _all_matrices(p, dim)
    others = [g for g in range(G.order) if g != G.identity]
    out = []
    for rho in enumerate_module_actions(B, dim):
        # candidates for each pi_g: matrices compatible with the module action
        cands = {}
        for g in others:
            moved = np.tensordot(action.rho[g], rho, axes=([0], [0])) % p          # b i j
            lhs = np.einsum("xij,bjk->xbik", mats, rho) % p
            rhs = np.einsum("bij,xjk->xbik", moved, mats) % p
            keep = np.all(lhs == rhs, axis=(1, 2, 3)) if dim else np.array([True])
            cands[g] = mats[keep]
        for choice in itertools.product(*(range(len(cands[g])) for g in others)):
            pi = np.empty((G.order, dim, dim), dtype=np.int64)
            pi[G.identity] = la.eye(dim)
            for g, c in zip(others, choice):
                pi[g] = cands[g][c]
            if _group_law(G, pi, p):
                M = FModule(B, rho, dim=dim, _trusted=True)
                out.append(EquivariantModule(action, M, pi, check=False))
    out.sort(key=lambda e: e.key())
    return out


def _group_law(G: FiniteGroup, pi: np.ndarray, p: int) -> bool:
    if pi.shape[1] == 0:
        return True
    prod = np.einsum("gij,hjk->ghik", pi, pi) % p
    return bool(np.all(prod == pi[G.table]))


def enumerate_comodules(H: HopfAlgebroid, dim: int, ceiling: int = DEFAULT_SEARCH_CEILING) -> list[Comodule]:
    """All comodule structures on ``F_p^dim`` by exhaustion: for each module
    structure, every ``psi`` with ``(eps ⊗ id) psi = id`` is tried with
    ``make_comodule``."""
    p = H.p
    out = []
    for rho in enumerate_module_actions(H.A0, dim):
        M = FModule(H.A0, rho, dim=dim)
        sp = spaces(H, M)
        if dim == 0:
            out.append(make_comodule(H, M, la.zeros(sp.E.dim, 0)))
            continue
        base = la.solve(sp.eps_id, la.eye(dim), p)
        ker = la.nullspace(sp.eps_id, p)
        k = ker.shape[1]
        size = p ** (k * dim)
        if size > ceiling:
            raise SearchSpaceTooLarge(f"comodule search space {size} exceeds ceiling {ceiling}", size)
        for coeffs in itertools.product(range(p), repeat=k * dim):
            c = np.array(coeffs, dtype=np.int64).reshape(k, dim)
            psi = (base + la.mm(ker, c, p)) % p
            rep = make_comodule(H, M, psi, lenient=True)
            if rep.ok:
                out.append(make_comodule(H, M, psi))
    out.sort(key=lambda c: c.M.action.tobytes() + b"|" + c.psi.tobytes())
    return out


# -- named examples -----------------------------------------------------------

def swap_action(p: int = 3) -> GroupAction:
    """``Z/2`` swapping the two factors of ``F_p x F_p``."""
    return permutation_action(cyclic_group(2), p, [(0, 1), (1, 0)])


def cyclic_shift_action(p: int = 2, n: int = 3) -> GroupAction:
    perms = [tuple((i + s) % n for i in range(n)) for s in range(n)]
    return permutation_action(cyclic_group(n), p, perms)


def symmetric_action(p: int = 5, n: int = 3) -> GroupAction:
    return permutation_action(symmetric_group(n), p, list(itertools.permutations(range(n))))


def klein_swap_action(p: int = 3) -> GroupAction:
    """``Z/2 x Z/2`` on ``F_p x F_p``, ``(a, b)`` acting by the swap to the power ``a``."""
    G = group_product(cyclic_group(2), cyclic_group(2))
    return permutation_action(G, p, [(0, 1), (0, 1), (1, 0), (1, 0)])


def sign_module(action: GroupAction, sign_of) -> EquivariantModule:
    """The regular module ``B`` with ``pi_g = sign(g) rho(g)``."""
    from .modules import regular_module
    B, p = action.algebra, action.algebra.p
    pi = np.stack([(sign_of(g) * action.rho[g]) % p for g in range(action.group.order)])
    return EquivariantModule(action, regular_module(B), pi)
