"""Descent data ``tau: A1 ⊗_{etaL} M -> A1 ⊗_{etaR} M`` and their
correspondence with comodules."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import linalg as la
from .comodule import Comodule, base_change_left, make_comodule, spaces
from .errors import AlgebroidError, CocycleViolation, InternalError, NotA1Linear, NotInvertible, ShapeError
from .hopf import CheckReport, HopfAlgebroid
from .modules import FModule
from .tensor import TensorSpace, tensor_map


def _a1_multiply(space: TensorSpace, vec_map: np.ndarray, target: TensorSpace) -> np.ndarray:
    """``a ⊗ x -> a . g(x)`` from ``space = A1 ⊗ M`` into ``target``, where
    ``vec_map`` is ``g: M -> target`` and ``A1`` acts on the left factor of
    ``target``."""
    p = space.p
    act = target.left_module.action                                   # i e f
    w = la.tdot(act, vec_map, ([2], [0]), p).transpose(1, 0, 2)        # e i k
    return space.descend(w.reshape(target.dim, -1), "a ⊗ x -> a g(x)")


class DescentDatum:
    def __init__(self, H: HopfAlgebroid, M: FModule, tau: np.ndarray, report: Optional[CheckReport] = None):
        self.H = H
        self.M = M
        self.tau = tau
        self.report = report

    @property
    def L(self) -> TensorSpace:
        return base_change_left(self.H, self.M)

    @property
    def R(self) -> TensorSpace:
        return spaces(self.H, self.M).E

    @cached_property
    def unit_insert(self) -> np.ndarray:
        """``x -> 1 ⊗ x`` into ``L``."""
        return insertion(self.H, self.M, self.L)

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = la.inverse(self.tau, self.H.p)
        if inv is None:
            raise NotInvertible("tau is not invertible", None)
        return inv

    def __eq__(self, other):
        return (isinstance(other, DescentDatum) and self.H is other.H and self.M == other.M
                and np.array_equal(self.tau, other.tau))

    def __hash__(self):
        return hash((id(self.H), self.M.key, self.tau.tobytes()))

    def __repr__(self):
        return f"DescentDatum(dim={self.M.dim})"


def insertion(h: HopfAlgebroid, m: FModule, space: TensorSpace) -> np.ndarray:
    if m.dim == 0:
        return la.zeros(space.dim, 0)
    return np.stack([space.pure(h.A1.unit, e) for e in la.eye(m.dim)], axis=1)


def check_descent(h: HopfAlgebroid, m: FModule, tau: np.ndarray) -> CheckReport:
    p = h.p
    rep = CheckReport()
    L, R = base_change_left(h, m), spaces(h, m).E
    rep.notes["cocycle_form"] = "identity at a = b = 1 on a basis of M"
    w = None
    for t, gen in enumerate(h.A1.generators):
        d = la.first_difference(la.mm(tau, L.left_module.act(gen), p), la.mm(R.left_module.act(gen), tau, p))
        if d is not None:
            w = (t, d)
            break
    rep.record("A1_linear", w)
    rep.record("invertible", None if la.inverse(tau, p) is not None else "singular")
    if w is not None:
        rep.record("cocycle", "skipped: tau is not A1-linear")
        return rep
    psi = la.mm(tau, insertion(h, m, L), p)
    sp = spaces(h, m)
    lhs = la.mm(tensor_map(sp.E, sp.EE, None, psi, "id ⊗ tau(1 ⊗ -)"), psi, p)
    rhs = la.mm(sp.nabla_id, psi, p)
    rep.record("cocycle", la.first_difference(lhs, rhs))
    return rep


def make_descent_datum(H: HopfAlgebroid, M: FModule, tau, *, lenient: bool = False):
    if M.algebra != H.A0:
        raise ShapeError("descent datum module must be over A0")
    L, R = base_change_left(H, M), spaces(H, M).E
    tau = la.asmat(tau, H.p).reshape(R.dim, L.dim)
    tau.setflags(write=False)
    rep = check_descent(H, M, tau)
    if lenient:
        return rep
    for name, exc in (("A1_linear", NotA1Linear), ("invertible", NotInvertible), ("cocycle", CocycleViolation)):
        passed, w = rep.results[name]
        if not passed:
            raise exc(f"descent datum fails: {name}", w)
    return DescentDatum(H, M, tau, rep)


def comodule_of_descent(D: DescentDatum) -> Comodule:
    """``psi = tau ∘ (etaL ⊗ id)``, i.e. ``psi(x) = tau(1 ⊗ x)``."""
    psi = la.mm(D.tau, D.unit_insert, D.H.p)
    try:
        return make_comodule(D.H, D.M, psi)
    except AlgebroidError as exc:
        raise InternalError(f"descent datum produced an invalid comodule: {exc}", exc.witness) from exc


def descent_maps(C: Comodule) -> tuple[np.ndarray, np.ndarray]:
    """``(tau, tau')`` with ``tau(a ⊗ x) = a psi(x)`` and
    ``tau'(a ⊗ x) = a (kappa ⊗ id) psi(x)``."""
    h, m = C.H, C.M
    L, R = base_change_left(h, m), C.E
    tau = _a1_multiply(L, C.psi, R)
    kappa_id = tensor_map(R, L, h.kappa.matrix, None, "kappa ⊗ id")
    tau_prime = _a1_multiply(R, la.mm(kappa_id, C.psi, h.p), L)
    return tau, tau_prime


def descent_of_comodule(C: Comodule) -> DescentDatum:
    p = C.H.p
    tau, tau_prime = descent_maps(C)
    n = tau.shape[0]
    for name, prod in (("tau' tau", la.mm(tau_prime, tau, p)), ("tau tau'", la.mm(tau, tau_prime, p))):
        d = la.first_difference(prod, la.eye(n))
        if d is not None:
            raise InternalError(f"{name} != id", d)
    D = make_descent_datum(C.H, C.M, tau)
    D.__dict__["inverse"] = tau_prime
    D.report.notes["inverse_from_kappa"] = True
    return D


def descent_hom_defect(src: DescentDatum, dst: DescentDatum, f: np.ndarray):
    """First basis vector where ``(id ⊗ f) tau1 != tau2 (id ⊗ f)``, or None."""
    p = src.H.p
    fl = tensor_map(src.L, dst.L, None, f, "id ⊗ f")
    fr = tensor_map(src.R, dst.R, None, f, "id ⊗ f")
    return la.first_difference(la.mm(fr, src.tau, p), la.mm(dst.tau, fl, p))


def full_cocycle_defects(D: DescentDatum, pairs: Iterable[tuple[int, int]]) -> list:
    """Evaluate the cocycle identity at ``a = e_i, b = e_j`` directly (not by
    linearity); returns the failing pairs with their witness."""
    h, m, p = D.H, D.M, D.H.p
    sp = spaces(h, m)
    psi = la.mm(D.tau, D.unit_insert, p)
    A1 = h.A1
    bad = []
    for i, j in pairs:
        a = A1.left_mult(A1.basis_vector(i))
        # sum a c ⊗ b tau(1 ⊗ x)
        lhs = la.mm(tensor_map(sp.E, sp.EE, a, la.mm(sp.E.left_module.act(A1.basis_vector(j)), psi, p),
                               "a ⊗ b tau"), psi, p)
        # (a ⊗ b) nabla(c) ⊗ x, multiplying in T before re-associating
        ab = h.T_algebra.algebra.left_mult(h.T.pure(A1.basis_vector(i), A1.basis_vector(j)))
        nab = tensor_map(sp.E, sp.TM, la.mm(ab, h.nabla, p), None, "(a ⊗ b) nabla ⊗ id")
        rhs = la.chain(p, sp.assoc, nab, psi)
        d = la.first_difference(lhs, rhs)
        if d is not None:
            bad.append(((i, j), d))
    return bad
