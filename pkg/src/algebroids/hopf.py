"""Hopf algebroids over finite-dimensional commutative algebras, their
axiom checker, the unit and group-action constructions, and morphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import AlgebraHom, FiniteAlgebra, identity_hom, product_algebra, tensor_algebras
from .errors import (AlgebroidError, AxiomViolation, CompatibilityViolation, NotFaithfullyFlat,
                     ShapeError, WellDefinednessViolation)
from .groups import GroupAction
from .modules import flatness_report, regular_module
from .tensor import (AlgebraTensor, TensorSpace, TwistedModule, algebra_tensor, associator,
                     tensor_map, tensor_over)

AXIOMS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "nabla_multiplicative", "flat_left", "flat_right")
HOM_IDENTITIES = ("unitality", "multiplicativity", "etaL", "etaR", "eps", "kappa", "nabla")


@dataclass
class CheckReport:
    """Pass/fail per named identity with the first witnessing basis element."""

    results: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def record(self, name: str, witness) -> None:
        self.results[name] = (witness is None, witness)

    @property
    def ok(self) -> bool:
        return all(passed for passed, _ in self.results.values())

    def failures(self) -> list:
        return [name for name, (passed, _) in self.results.items() if not passed]

    def witness(self, name: str):
        return self.results[name][1]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": {k: {"passed": v[0], "witness": _jsonable(v[1])} for k, v in self.results.items()},
            "notes": {k: _jsonable(v) for k, v in self.notes.items()},
        }


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def _diff(a: np.ndarray, b: np.ndarray):
    """First source basis index where two matrices differ, or None."""
    return la.first_difference(a, b)


class HopfAlgebroid:
    """``(A0, A1, etaL, etaR, eps, kappa, nabla)``; ``nabla`` is the matrix
    of a linear map ``A1 -> T`` with ``T = A1 ⊗_{A0} A1`` (left factor over
    ``A0`` through ``etaR``, right factor through ``etaL``)."""

    def __init__(self, A0, A1, etaL, etaR, eps, kappa, nabla, report=None):
        self.A0: FiniteAlgebra = A0
        self.A1: FiniteAlgebra = A1
        self.etaL: AlgebraHom = etaL
        self.etaR: AlgebraHom = etaR
        self.eps: AlgebraHom = eps
        self.kappa: AlgebraHom = kappa
        self.nabla = nabla
        self.report: CheckReport = report
        self.flat_certificates = None
        self.group_action = None
        if report is not None:
            self.flat_certificates = (report.notes.get("flat_left"), report.notes.get("flat_right"))

    @property
    def p(self) -> int:
        return self.A0.p

    # -- spaces ---------------------------------------------------------------
    @cached_property
    def A1_right(self) -> TwistedModule:
        """``A1`` as an ``A0``-module through ``etaR`` (left tensor factor)."""
        return TwistedModule(regular_module(self.A1), self.etaR)

    @cached_property
    def A1_left(self) -> TwistedModule:
        """``A1`` as an ``A0``-module through ``etaL`` (right tensor factor)."""
        return TwistedModule(regular_module(self.A1), self.etaL)

    @cached_property
    def T_algebra(self) -> AlgebraTensor:
        return algebra_tensor(self.etaR, self.etaL)

    @property
    def T(self) -> TensorSpace:
        return self.T_algebra.space

    @cached_property
    def triple_left(self) -> TensorSpace:
        """``(A1 ⊗ A1) ⊗ A1``."""
        return tensor_over(self.A0, TwistedModule(self.T.right_module, self.etaR), self.A1_left)

    @cached_property
    def triple_right(self) -> TensorSpace:
        """``A1 ⊗ (A1 ⊗ A1)``."""
        return tensor_over(self.A0, self.A1_right, TwistedModule(self.T.left_module, self.etaL))

    @cached_property
    def triple_associator(self) -> np.ndarray:
        return associator(self.triple_left, self.triple_right, self.T, self.T)

    def tensor_with(self, module) -> TensorSpace:
        """``A1 ⊗_{A0} M`` for an ``A0``-module ``M``."""
        return tensor_over(self.A0, self.A1_right, TwistedModule(module, identity_hom(self.A0)))

    # -- derived maps on T ----------------------------------------------------
    def id_tensor_eps(self) -> np.ndarray:
        """``x ⊗ y -> x etaR(eps(y))`` on ``T``."""
        r = la.mm(self.etaR.matrix, self.eps.matrix, self.p)
        return self._mult_after(None, r, "id ⊗ eps")

    def eps_tensor_id(self) -> np.ndarray:
        """``x ⊗ y -> etaL(eps(x)) y`` on ``T``."""
        l = la.mm(self.etaL.matrix, self.eps.matrix, self.p)
        return self._mult_after(l, None, "eps ⊗ id")

    def mu_kappa_id(self) -> np.ndarray:
        return self._mult_after(self.kappa.matrix, None, "mu (kappa ⊗ id)")

    def mu_id_kappa(self) -> np.ndarray:
        return self._mult_after(None, self.kappa.matrix, "mu (id ⊗ kappa)")

    def _mult_after(self, f, g, what) -> np.ndarray:
        """``x ⊗ y -> f(x) g(y)`` in ``A1``, descended to ``T``."""
        p, n, c = self.p, self.A1.dim, self.A1.mul
        z = c if g is None else la.tdot(c, g, ([1], [0]), p).transpose(0, 2, 1)   # a k m
        z = z if f is None else la.tdot(z, f, ([0], [0]), p).transpose(2, 0, 1)   # i k m
        w = z.transpose(2, 0, 1).reshape(n, n * n)
        return self.T.descend(w, what)

    def __repr__(self):
        return f"HopfAlgebroid(dim A0={self.A0.dim}, dim A1={self.A1.dim})"


def check_axioms(h: HopfAlgebroid) -> CheckReport:
    """Evaluate every identity; the report is a pure function of the data."""
    rep = CheckReport()
    p = h.p
    A0, A1 = h.A0, h.A1
    eye0, eye1 = la.eye(A0.dim), la.eye(A1.dim)
    L, R, E, K = h.etaL.matrix, h.etaR.matrix, h.eps.matrix, h.kappa.matrix
    mm = lambda *ms: la.chain(p, *ms)

    # (i)
    w = _diff(mm(E, L), eye0)
    rep.record("i", w if w is not None else _diff(mm(E, R), eye0))
    T = h.T_algebra
    # (ii)
    nab = h.nabla
    w = _diff(mm(nab, L), mm(T.j1.matrix, L))
    if w is None:
        w = _diff(mm(nab, R), mm(T.j2.matrix, R))
    rep.record("ii", w)
    # (iii)
    w = _diff(mm(K, L), R)
    rep.record("iii", w if w is not None else _diff(mm(K, R), L))
    # (iv)
    rep.record("iv", _guard(lambda: _first(
        (mm(h.id_tensor_eps(), nab), eye1), (mm(h.eps_tensor_id(), nab), eye1))))
    # (v)
    rep.record("v", _guard(lambda: _coassoc(h)))
    # (vi)
    rep.record("vi", _guard(lambda: _first(
        (mm(h.mu_kappa_id(), nab), mm(R, E)), (mm(h.mu_id_kappa(), nab), mm(L, E)))))
    # (vii)
    rep.record("vii", _diff(mm(K, K), eye1))
    # nabla is a unital algebra map into T
    bad = AlgebraHom(A1, T.algebra, nab, check=False).violation()
    rep.record("nabla_multiplicative", None if bad is None else bad)
    fl, fr = flatness_report(h.etaL), flatness_report(h.etaR)
    rep.notes["flat_left"] = fl
    rep.notes["flat_right"] = fr
    rep.record("flat_left", None if fl.faithfully_flat else "etaL")
    rep.record("flat_right", None if fr.faithfully_flat else "etaR")
    return rep


def _first(*pairs):
    for a, b in pairs:
        w = _diff(a, b)
        if w is not None:
            return w
    return None


def _guard(fn):
    """Run a check whose induced maps may fail to be well defined."""
    try:
        return fn()
    except WellDefinednessViolation as exc:
        return ("ill-defined", exc.witness)


def _coassoc(h: HopfAlgebroid):
    p, nab = h.p, h.nabla
    left = tensor_map(h.T, h.triple_left, nab, None, "nabla ⊗ id")
    right = tensor_map(h.T, h.triple_right, None, nab, "id ⊗ nabla")
    lhs = la.chain(p, h.triple_associator, left, nab)
    rhs = la.mm(right, nab, p)
    return _diff(lhs, rhs)


def _typecheck(A0, A1, etaL, etaR, eps, kappa, nabla):
    for name, f, s, d in (("etaL", etaL, A0, A1), ("etaR", etaR, A0, A1), ("eps", eps, A1, A0),
                          ("kappa", kappa, A1, A1)):
        if not isinstance(f, AlgebraHom) or f.src != s or f.dst != d:
            raise ShapeError(f"{name} has the wrong source or target", name)


def make_hopf_algebroid(A0, A1, etaL, etaR, eps, kappa, nabla, *, lenient: bool = False):
    """Validated constructor.  Component maps may be ``AlgebraHom`` values or
    raw matrices; ``nabla`` is a ``T.dim x A1.dim`` matrix.

    With ``lenient=True`` the report is returned instead of the algebroid and
    nothing is raised for failing axioms."""
    p = A0.p
    homs = []
    for f, s, d in ((etaL, A0, A1), (etaR, A0, A1), (eps, A1, A0), (kappa, A1, A1)):
        homs.append(f if isinstance(f, AlgebraHom) else AlgebraHom(s, d, f))
    _typecheck(A0, A1, *homs, nabla)
    h = HopfAlgebroid(A0, A1, *homs, None)
    nabla = la.asmat(nabla, p)
    if nabla.shape != (h.T.dim, A1.dim):
        raise ShapeError(f"nabla must be {h.T.dim} x {A1.dim}", nabla.shape)
    nabla.setflags(write=False)
    h.nabla = nabla
    rep = check_axioms(h)
    if lenient:
        return rep
    _raise_first(rep)
    h.report = rep
    h.flat_certificates = (rep.notes["flat_left"], rep.notes["flat_right"])
    return h


def _raise_first(rep: CheckReport):
    for name in AXIOMS:
        passed, w = rep.results[name]
        if passed:
            continue
        if name == "flat_left":
            raise NotFaithfullyFlat("etaL", rep)
        if name == "flat_right":
            raise NotFaithfullyFlat("etaR", rep)
        raise AxiomViolation(name, w, rep)


def unit_algebroid(A: FiniteAlgebra) -> HopfAlgebroid:
    """``A0 = A1 = A`` with identity structure maps and ``nabla(a) = a ⊗ 1``."""
    i = identity_hom(A)
    T = algebra_tensor(i, i)
    return make_hopf_algebroid(A, A, i, i, i, i, T.j1.matrix)


def group_action_algebroid(act: GroupAction, convention: str = "hk") -> HopfAlgebroid:
    """The algebroid ``(B, H ⊗ B)`` of a finite group acting on ``B``.

    ``H`` is the algebra of functions on the group with idempotent basis
    ``e_g``; ``A1`` has basis ``e_g ⊗ b_j`` at index ``g * dim B + j``.
    ``convention`` selects the coproduct ``sum over hk = g`` ("hk") or
    ``sum over kh = g`` ("kh") of ``e_h ⊗ e_k``."""
    key = (act.group.table.tobytes(), act.algebra.key, act.rho.tobytes(), convention)
    hit = _GROUP_CACHE.get(key)
    if hit is None:
        hit = make_hopf_algebroid(*group_algebroid_components(act, convention))
        hit.group_action = act
        hit.report.notes["convention"] = convention
        hit = _GROUP_CACHE.setdefault(key, hit)
    return hit


_GROUP_CACHE: dict = {}


def group_algebroid_components(act: GroupAction, convention: str = "hk"):
    if convention not in ("hk", "kh"):
        raise ValueError("convention must be 'hk' or 'kh'")
    G, B, p = act.group, act.algebra, act.algebra.p
    n, d = G.order, B.dim
    H = product_algebra(p, n)
    A1 = tensor_algebras(H, B)
    idx = lambda g, j: g * d + j
    L = np.zeros((n * d, d), dtype=np.int64)
    R = np.zeros((n * d, d), dtype=np.int64)
    E = np.zeros((d, n * d), dtype=np.int64)
    K = np.zeros((n * d, n * d), dtype=np.int64)
    for g in range(n):
        L[g * d:(g + 1) * d, :] = la.eye(d)
        R[g * d:(g + 1) * d, :] = act.rho[g]
        gi = G.inv(g)
        K[gi * d:(gi + 1) * d, g * d:(g + 1) * d] = act.rho[gi]
    E[:, G.identity * d:(G.identity + 1) * d] = la.eye(d)
    etaL = AlgebraHom(B, A1, L)
    etaR = AlgebraHom(B, A1, R)
    eps = AlgebraHom(A1, B, E)
    kappa = AlgebraHom(A1, A1, K)
    T = algebra_tensor(etaR, etaL).space
    one = B.unit
    nab = np.zeros((T.dim, n * d), dtype=np.int64)
    for g in range(n):
        for j in range(d):
            col = np.zeros(T.dim, dtype=np.int64)
            for x in range(n):
                y = G.mul(G.inv(x), g) if convention == "hk" else G.mul(g, G.inv(x))
                # e_x ⊗ b_j  tensor  e_y ⊗ 1
                u = np.zeros(n * d, dtype=np.int64)
                u[idx(x, j)] = 1
                v = np.zeros(n * d, dtype=np.int64)
                v[y * d:(y + 1) * d] = one
                col = (col + T.pure(u, v)) % p
            nab[:, idx(g, j)] = col
    return B, A1, etaL, etaR, eps, kappa, nab


def resolve_group_convention(act: GroupAction) -> tuple[HopfAlgebroid, dict]:
    """Try both coproduct conventions and return the first passing algebroid
    together with the per-convention outcome."""
    outcome = {}
    chosen = None
    for conv in ("hk", "kh"):
        rep = None
        if chosen is None:
            try:
                chosen = group_action_algebroid(act, conv)
                outcome[conv] = []
                continue
            except (AxiomViolation, NotFaithfullyFlat) as exc:
                rep = exc.report
        if rep is None:
            rep = make_hopf_algebroid(*group_algebroid_components(act, conv), lenient=True)
        outcome[conv] = rep.failures()
    if chosen is None:
        raise AxiomViolation(outcome["hk"][0], None, None)
    chosen.report.notes["convention_trials"] = outcome
    return chosen, outcome


def verify_free_basis(f: AlgebraHom, elements) -> bool:
    """Whether ``elements`` of ``f.dst`` form a basis of it as an ``f.src``-module."""
    p, b = f.p, f.dst
    cols = [la.mm(b.left_mult(np.asarray(x, dtype=np.int64)), f.matrix, p) for x in elements]
    if not cols:
        return b.dim == 0
    m = np.concatenate(cols, axis=1)
    return m.shape[0] == m.shape[1] and la.rank(m, p) == m.shape[0]


def group_free_basis(h: HopfAlgebroid, order: int) -> list[np.ndarray]:
    """``{e_g ⊗ 1}`` for a group-action algebroid, verified to be an
    ``A0``-basis of ``A1`` through ``etaL``."""
    d = h.A0.dim
    basis = []
    for g in range(order):
        v = np.zeros(h.A1.dim, dtype=np.int64)
        v[g * d:(g + 1) * d] = h.A0.unit
        basis.append(v)
    if not verify_free_basis(h.etaL, basis):
        raise AlgebroidError("e_g ⊗ 1 is not a basis over etaL", None)
    return basis


class AlgebroidHom:
    """``(phi0, phi1)``: a morphism of Hopf algebroids ``src -> dst``."""

    def __init__(self, src: HopfAlgebroid, dst: HopfAlgebroid, phi0: AlgebraHom, phi1: AlgebraHom,
                 report: Optional[CheckReport] = None):
        self.src, self.dst = src, dst
        self.phi0, self.phi1 = phi0, phi1
        self.report = report

    @cached_property
    def T_map(self) -> np.ndarray:
        """``phi1 ⊗ phi1`` from the source ``T`` to the target ``T``."""
        return tensor_map(self.src.T, self.dst.T, self.phi1.matrix, self.phi1.matrix, "phi1 ⊗ phi1")

    def __repr__(self):
        return f"AlgebroidHom({self.src!r} -> {self.dst!r})"


def check_hom(src: HopfAlgebroid, dst: HopfAlgebroid, phi0: AlgebraHom, phi1: AlgebraHom) -> CheckReport:
    rep = CheckReport()
    p = src.p
    mm = lambda *ms: la.chain(p, *ms)
    b0, b1 = phi0.violation(), phi1.violation()
    rep.record("unitality", _first_viol("unital", b0, b1))
    rep.record("multiplicativity", _first_viol("multiplicative", b0, b1))
    P0, P1 = phi0.matrix, phi1.matrix
    rep.record("etaL", _diff(mm(P1, src.etaL.matrix), mm(dst.etaL.matrix, P0)))
    rep.record("etaR", _diff(mm(P1, src.etaR.matrix), mm(dst.etaR.matrix, P0)))
    rep.record("eps", _diff(mm(dst.eps.matrix, P1), mm(P0, src.eps.matrix)))
    rep.record("kappa", _diff(mm(dst.kappa.matrix, P1), mm(P1, src.kappa.matrix)))

    def nab():
        tm = tensor_map(src.T, dst.T, P1, P1, "phi1 ⊗ phi1")
        return _diff(mm(tm, src.nabla), mm(dst.nabla, P1))

    rep.record("nabla", _guard(nab))
    return rep


def _first_viol(kind, *viols):
    for which, v in zip(("phi0", "phi1"), viols):
        if v is not None and v[0] == kind:
            return (which, v[1])
    return None


def make_algebroid_hom(src: HopfAlgebroid, dst: HopfAlgebroid, phi0, phi1, *, lenient: bool = False):
    """Validated constructor; ``phi0`` and ``phi1`` may be raw matrices, in
    which case their algebra-map laws are checked here and reported."""
    if not isinstance(phi0, AlgebraHom):
        phi0 = AlgebraHom(src.A0, dst.A0, phi0, check=False)
    if not isinstance(phi1, AlgebraHom):
        phi1 = AlgebraHom(src.A1, dst.A1, phi1, check=False)
    if (phi0.src, phi0.dst, phi1.src, phi1.dst) != (src.A0, dst.A0, src.A1, dst.A1):
        raise ShapeError("component maps have the wrong source or target")
    rep = check_hom(src, dst, phi0, phi1)
    if lenient:
        return rep
    for name in HOM_IDENTITIES:
        passed, w = rep.results[name]
        if not passed:
            raise CompatibilityViolation(name, w, rep)
    return AlgebroidHom(src, dst, phi0, phi1, rep)


def identity_algebroid_hom(h: HopfAlgebroid) -> AlgebroidHom:
    return make_algebroid_hom(h, h, identity_hom(h.A0), identity_hom(h.A1))


def group_restriction_hom(act: GroupAction, elements, convention: str = "hk") -> AlgebroidHom:
    """For a subgroup ``K`` of ``G`` (given by its elements), the morphism
    from the algebroid of ``G`` to that of ``K`` restricting functions from
    ``G`` to ``K`` and fixing ``B``."""
    from .groups import restrict_action
    small = restrict_action(act, elements)
    src = group_action_algebroid(act, convention)
    dst = group_action_algebroid(small, convention)
    d = act.algebra.dim
    phi1 = np.zeros((dst.A1.dim, src.A1.dim), dtype=np.int64)
    for k, g in enumerate(elements):
        phi1[k * d:(k + 1) * d, g * d:(g + 1) * d] = la.eye(d)
    return make_algebroid_hom(src, dst, identity_hom(src.A0), AlgebraHom(src.A1, dst.A1, phi1))
