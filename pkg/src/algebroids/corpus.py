"""A reproducible corpus of comodules for property checks: extended
comodules on small modules, enumerated small comodules and their transports
along changes of basis, plus kernels and images of sampled comodule maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import field_algebra, product_algebra, truncated_polynomial
from . import linalg as la
from .comodule import (Comodule, ComoduleHom, comodule_hom_space, comodule_image, comodule_kernel,
                       extended_comodule, make_comodule, spaces)
from .equivariant import (comodule_from_equivariant, cyclic_shift_action, enumerate_comodules, sign_module,
                          swap_action)
from .errors import SearchSpaceTooLarge
from .hopf import HopfAlgebroid, group_action_algebroid, unit_algebroid
from .modules import FModule, ModuleHom, cyclic_quotient, free_module, ideal_module, regular_module
from .tensor import tensor_map


def corpus_algebroids() -> dict[str, HopfAlgebroid]:
    return {
        "unit_f3": unit_algebroid(field_algebra(3)),
        "unit_f2_dual": unit_algebroid(truncated_polynomial(2, 2)),
        "unit_f3xf3": unit_algebroid(product_algebra(3, 2)),
        "swap_f3": group_action_algebroid(swap_action(3)),
        "cyclic3_f2": group_action_algebroid(cyclic_shift_action(2, 3)),
    }


def seed_modules(H: HopfAlgebroid) -> list[FModule]:
    """Small ``A0``-modules used as the bases of extended comodules."""
    A = H.A0
    mods = [regular_module(A)]
    if A.dim > 1:
        for i in range(A.dim):
            e = np.zeros(A.dim, dtype=np.int64)
            e[i] = 1
            try:
                mods.append(cyclic_quotient(A, [e]))
                mods.append(ideal_module(A, [e]))
            except Exception:
                pass
    else:
        mods.append(free_module(A, 2))
    out = []
    for m in mods:
        if 0 < m.dim and all(m != o for o in out):
            out.append(m)
    return out


@dataclass
class Corpus:
    comodules: list = field(default_factory=list)     # (label, Comodule)
    homs: list = field(default_factory=list)          # (label, ComoduleHom)

    def by_algebroid(self) -> dict:
        out: dict = {}
        for label, c in self.comodules:
            out.setdefault(label.split(":")[0], []).append(c)
        return out


def _random_hom(basis: list[ComoduleHom], rng, p: int) -> ComoduleHom:
    coeffs = rng.integers(0, p, len(basis))
    mat = sum(int(c) * b.matrix for c, b in zip(coeffs, basis)) % p
    s, d = basis[0].src, basis[0].dst
    return ComoduleHom(s, d, ModuleHom(s.M, d.M, mat, check=False))


def random_invertible(n: int, p: int, rng) -> np.ndarray:
    while True:
        g = rng.integers(0, p, (n, n))
        if la.inverse(g, p) is not None:
            return g


def transport(C: Comodule, g: np.ndarray) -> Comodule:
    """The comodule structure moved along the linear isomorphism ``g``:
    ``g rho g^-1`` and ``(id ⊗ g) psi g^-1``."""
    p = C.H.p
    ginv = la.inverse(g, p)
    act = np.stack([la.chain(p, g, r, ginv) for r in C.M.action])
    M = FModule(C.H.A0, act, dim=C.dim)
    idg = tensor_map(C.E, spaces(C.H, M).E, None, g, "id ⊗ g")
    return make_comodule(C.H, M, la.chain(p, idg, C.psi, ginv))


def _add(found: list, seen: set, C: Comodule) -> bool:
    if C in seen:
        return False
    seen.add(C)
    found.append(C)
    return True


def generate_corpus(seed: int = 0, max_dim: int = 8, enumerate_dim: int = 2, copies: int = 2,
                    pairs: int = 30, homs_per_pair: int = 2) -> Corpus:
    """Distinct comodules of dimension at most ``max_dim`` over every corpus
    algebroid: extended comodules, sign twists, every structure on
    ``F_p^d`` for ``d <= enumerate_dim`` when the search is small, and copies
    moved along random changes of basis.  Random comodule maps between
    sampled pairs then contribute their kernels and images."""
    rng = np.random.default_rng(seed)
    corpus = Corpus()
    for name, H in corpus_algebroids().items():
        base: list[Comodule] = []
        seen: set = set()
        for N in seed_modules(H):
            if H.A1.dim * N.dim // max(H.A0.dim, 1) > max_dim * 2:
                continue
            C = extended_comodule(H, N)
            if C.dim <= max_dim:
                _add(base, seen, C)
        act = H.group_action
        if act is not None and act.group.order == 2:
            _add(base, seen, comodule_from_equivariant(sign_module(act, lambda g: 1 if g == 0 else -1), H))
        for d in range(1, enumerate_dim + 1):
            try:
                for C in enumerate_comodules(H, d, ceiling=10**5):
                    _add(base, seen, C)
            except SearchSpaceTooLarge:
                pass
        for C in list(base):
            for _ in range(copies):
                _add(base, seen, transport(C, random_invertible(C.dim, H.p, rng)))
        for C in base:
            corpus.comodules.append((f"{name}:base", C))
        p = H.p
        candidates = [(s, d) for s in base for d in base]
        order = rng.permutation(len(candidates))
        used = 0
        for k in order:
            if used >= pairs:
                break
            s, d = candidates[k]
            basis = comodule_hom_space(s, d)
            if not basis:
                continue
            used += 1
            for _ in range(homs_per_pair):
                f = _random_hom(basis, rng, p)
                corpus.homs.append((f"{name}:hom", f))
                for label, (c, _) in (("kernel", comodule_kernel(f)), ("image", comodule_image(f))):
                    if 0 < c.dim <= max_dim and _add(base, seen, c):
                        corpus.comodules.append((f"{name}:{label}", c))
    return corpus
