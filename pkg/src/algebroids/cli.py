"""Command-line front end.  Each command loads a ``.had`` document, calls one
library operation and reports the outcome.

Exit status: 0 when every check passes, 1 when a verification fails, 2 on
input errors (syntax, references, schema, shapes, size ceilings).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import identity_hom
from .comodule import canonical_unit_coaction, extended_comodule, generator_witness, make_comodule
from .descent import comodule_of_descent, descent_of_comodule, make_descent_datum
from .equivariant import (DEFAULT_SEARCH_CEILING, comodule_from_equivariant, enumerate_comodules,
                          enumerate_equivariant, equivariant_from_comodule)
from .errors import (AlgebroidError, DuplicateName, ParseError, SearchSpaceTooLarge, ShapeError, SizeExceeded,
                     UnresolvedReference)
from .fileformat import (Exporter, Workspace, algebroid_components, algebroid_hom_parts, comodule_psi, descent_tau,
                         parse, serialize, tolist)
from .flat_descent import amitsur_check, cartesian_check
from .functoriality import adjunction_check, coinduce, induce
from .hopf import AXIOMS, HOM_IDENTITIES, group_algebroid_components, make_algebroid_hom, make_hopf_algebroid
from .tensor import algebra_tensor, ceiling

REPORT_SCHEMA = "algebroids-report/1"
REPORT_DIR_ENV = "ALGEBROIDS_REPORT_DIR"
INPUT_ERRORS = (ParseError, UnresolvedReference, DuplicateName, ShapeError, SizeExceeded, SearchSpaceTooLarge)

AXIOM_ERRORS = {name: "AxiomViolation" for name in AXIOMS}
AXIOM_ERRORS.update(flat_left="NotFaithfullyFlat", flat_right="NotFaithfullyFlat")
COMODULE_ERRORS = {"linear": "NotLinear", "counit": "NotCounital", "coassociative": "NotCoassociative"}
DESCENT_ERRORS = {"A1_linear": "NotA1Linear", "invertible": "NotInvertible", "cocycle": "CocycleViolation"}


@dataclass
class Check:
    id: str
    passed: bool
    witness: object = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"id": self.id, "passed": self.passed, "witness": _jsonable(self.witness)}
        if self.error:
            d["error"] = self.error
        return d


@dataclass
class Report:
    command: str
    target: Optional[str] = None
    checks: list = field(default_factory=list)
    derived: str = ""
    data: dict = field(default_factory=dict)
    seed: Optional[int] = None
    input_error: Optional[str] = None

    def check(self, id: str, witness=None, error: Optional[str] = None, passed: Optional[bool] = None):
        ok = witness is None if passed is None else passed
        self.checks.append(Check(id, ok, witness, None if ok else error))

    @property
    def exit_status(self) -> int:
        if self.input_error is not None:
            return 2
        return 0 if all(c.passed for c in self.checks) else 1

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "command": self.command, "target": self.target,
                "checks": [c.to_dict() for c in self.checks], "derived_outputs": self.derived,
                "data": _jsonable(self.data), "seed": self.seed, "input_error": self.input_error,
                "exit_status": self.exit_status}

    def render(self) -> str:
        lines = [f"{self.command} {self.target or ''}".rstrip()]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for c in self.checks:
            tail = ""
            if not c.passed:
                tail = f"  [{c.error or 'failed'}] witness={_jsonable(c.witness)}"
            lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.id}{tail}")
        for k, v in self.data.items():
            lines.append(f"{k}: {json.dumps(_jsonable(v), ensure_ascii=False)}")
        if self.input_error is not None:
            lines.append(f"input error: {self.input_error}")
        lines.append(f"exit status: {self.exit_status}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _report_checks(rep: Report, results: dict, errors: dict) -> None:
    for name, (passed, w) in results.items():
        rep.check(name, w, errors.get(name), passed=passed)


# -- commands -------------------------------------------------------------------

def cmd_check_algebroid(ws: Workspace, a, rep: Report):
    e = ws.entity(a.name)
    if e.kind != "algebroid":
        raise ShapeError(f"{a.name} is not an algebroid")
    b = e.get("builtin")
    if b == "unit":
        A = ws.get(e.need("base"), "algebra")
        i = identity_hom(A)
        comps = (A, A, i, i, i, i, algebra_tensor(i, i).j1.matrix)
    elif b == "group_action":
        comps = group_algebroid_components(ws.get(e.need("action"), "group_action"), str(e.get("convention", "hk")))
    else:
        comps = algebroid_components(ws, e)
    res = make_hopf_algebroid(*comps, lenient=True)
    _report_checks(rep, res.results, AXIOM_ERRORS)
    rep.data["dims"] = {"A0": comps[0].dim, "A1": comps[1].dim}
    for side in ("flat_left", "flat_right"):
        fr = res.notes.get(side)
        if fr is not None:
            rep.data[side] = {"projective": fr.projective, "trace_rank": fr.trace_rank, "rank": fr.rank}


def cmd_check_comodule(ws: Workspace, a, rep: Report):
    e = ws.entity(a.name)
    H = ws.get(e.need("algebroid"), "algebroid")
    b = e.get("builtin")
    if b == "extended":
        C = extended_comodule(H, ws.get(e.need("from"), "module"))
        M, psi = C.M, C.psi
    else:
        M = ws.get(e.need("module"), "module")
        psi = canonical_unit_coaction(H, M) if b == "unit" else comodule_psi(ws, e, H, M)
    res = make_comodule(H, M, psi, lenient=True)
    _report_checks(rep, res.results, COMODULE_ERRORS)
    rep.data["dim"] = M.dim


def cmd_check_descent(ws: Workspace, a, rep: Report):
    e = ws.entity(a.name)
    H = ws.get(e.need("algebroid"), "algebroid")
    M = ws.get(e.need("module"), "module")
    res = make_descent_datum(H, M, descent_tau(ws, e, H, M), lenient=True)
    _report_checks(rep, res.results, DESCENT_ERRORS)
    rep.data["dim"] = M.dim


def cmd_check_algebroid_hom(ws: Workspace, a, rep: Report):
    e = ws.entity(a.name)
    if e.get("builtin") is not None:
        res = ws.get(a.name, "algebroid_hom").report
    else:
        res = make_algebroid_hom(*algebroid_hom_parts(ws, e), lenient=True)
    _report_checks(rep, res.results, {k: "CompatibilityViolation" for k in HOM_IDENTITIES})


def cmd_to_comodule(ws: Workspace, a, rep: Report, ex: Exporter):
    C = comodule_of_descent(ws.get(a.name, "descent"))
    ent = ex.comodule(C, a.as_ or f"{a.name}_comodule")
    rep.check("comodule", None)
    rep.data["name"] = ent.name


def cmd_to_descent(ws: Workspace, a, rep: Report, ex: Exporter):
    D = descent_of_comodule(ws.get(a.name, "comodule"))
    p = D.H.p
    n = D.tau.shape[0]
    rep.check("tau_prime_tau", la.first_difference(la.mm(D.inverse, D.tau, p), la.eye(n)), "NotInvertible")
    rep.check("tau_tau_prime", la.first_difference(la.mm(D.tau, D.inverse, p), la.eye(n)), "NotInvertible")
    ent = ex.descent(D, a.as_ or f"{a.name}_descent")
    rep.data["name"] = ent.name


def _hom(ws: Workspace, a):
    if not a.hom:
        raise ShapeError("--hom is required")
    return ws.get(a.hom, "algebroid_hom")


def cmd_induce(ws: Workspace, a, rep: Report, ex: Exporter):
    f = _hom(ws, a)
    C = induce(f, ws.get(a.name, "comodule"))
    ent = ex.comodule(C, a.as_ or f"{a.name}_induced")
    rep.check("comodule", None)
    rep.data.update(name=ent.name, dim=C.dim)


def cmd_coinduce(ws: Workspace, a, rep: Report, ex: Exporter):
    f = _hom(ws, a)
    C = coinduce(f, ws.get(a.name, "comodule"))
    ent = ex.comodule(C, a.as_ or f"{a.name}_coinduced")
    rep.check("comodule", None)
    rep.data.update(name=ent.name, dim=C.dim)


def cmd_adjoint_check(ws: Workspace, a, rep: Report):
    f = _hom(ws, a)
    if not a.with_:
        raise ShapeError("--with is required")
    r = adjunction_check(f, ws.get(a.name, "comodule"), ws.get(a.with_, "comodule"))
    rep.check("dims_equal", None if r.dim_left == r.dim_right else (r.dim_left, r.dim_right), "DimensionMismatch")
    rep.check("roundtrip", r.witness, "RoundTripFailure", passed=r.roundtrip_ok)
    rep.data.update(dim_left=r.dim_left, dim_right=r.dim_right)


def _action_name(ws: Workspace, algebroid_name: str) -> str:
    e = ws.entity(algebroid_name)
    if e.get("builtin") != "group_action":
        raise ShapeError(f"{algebroid_name} is not declared from a group action")
    return e.fields["action"]


def _algebroid_for_action(ws: Workspace, action_name: str, explicit: Optional[str]) -> str:
    if explicit:
        return explicit
    for n in ws.doc.names("algebroid"):
        e = ws.entity(n)
        if e.get("builtin") == "group_action" and e.get("action") == action_name:
            return n
    raise ShapeError(f"no algebroid declared from action {action_name}; pass --algebroid")


def cmd_equivariant_to_comodule(ws: Workspace, a, rep: Report, ex: Exporter):
    E = ws.get(a.name, "equivariant")
    hname = _algebroid_for_action(ws, ws.entity(a.name).fields["action"], a.algebroid)
    C = comodule_from_equivariant(E, ws.get(hname, "algebroid"))
    ent = ex.comodule(C, a.as_ or f"{a.name}_comodule")
    rep.check("comodule", None)
    rep.data["name"] = ent.name


def cmd_comodule_to_equivariant(ws: Workspace, a, rep: Report, ex: Exporter):
    C = ws.get(a.name, "comodule")
    E = equivariant_from_comodule(C)
    action = _action_name(ws, ws.entity(a.name).fields["algebroid"])
    ent = ex.equivariant(E, a.as_ or f"{a.name}_equivariant", action)
    rep.check("equivariant", None)
    rep.data["name"] = ent.name


def cmd_equivariant_enumerate(ws: Workspace, a, rep: Report):
    act = ws.get(a.name, "group_action")
    hname = _algebroid_for_action(ws, a.name, a.algebroid)
    H = ws.get(hname, "algebroid")
    cap = a.ceiling if a.ceiling is not None else DEFAULT_SEARCH_CEILING
    counts = {}
    for d in range(a.dim + 1):
        eq = enumerate_equivariant(act, d, cap)
        co = enumerate_comodules(H, d, cap)
        counts[d] = {"equivariant": len(eq), "comodule": len(co)}
        rep.check(f"counts_dim_{d}", None if len(eq) == len(co) else (len(eq), len(co)), "CountMismatch")
        images = {comodule_from_equivariant(E, H) for E in eq}
        rep.check(f"bijection_dim_{d}", None if images == set(co) else d, "NotABijection")
        back = all(equivariant_from_comodule(comodule_from_equivariant(E, H)) == E for E in eq)
        rep.check(f"roundtrip_dim_{d}", None if back else d, "RoundTripFailure")
    rep.data["counts"] = counts


def cmd_amitsur(ws: Workspace, a, rep: Report):
    if not a.module:
        raise ShapeError("--module is required")
    r = amitsur_check(ws.get(a.name, "hom"), ws.get(a.module, "module"))
    rep.check("injective", None if r.injective else r.witness, "NotInjective")
    rep.check("equalizer", None if r.equalizer else r.witness, "NotAnEqualizer")
    rep.data.update(image_dim=r.image_dim, agreement_dim=r.agreement_dim, faithfully_flat=r.faithfully_flat,
                    dims=r.dims)


def cmd_cartesian_check(ws: Workspace, a, rep: Report):
    r = ws.get(a.name, "restriction")
    try:
        c = cartesian_check(r.arrow, r.source, r.target, r.matrix)
    except AlgebroidError as exc:
        if type(exc).__name__ != "NotSemilinear":
            raise
        rep.check("semilinear", exc.witness, "NotSemilinear")
        return
    rep.check("semilinear", None)
    rep.check("cartesian", None if c.cartesian else {"rank": c.rank, "source_dim": c.source_dim,
                                                     "target_dim": c.target_dim}, "NotCartesian")
    rep.data.update(rank=c.rank, source_dim=c.source_dim, target_dim=c.target_dim)


def cmd_generator_witness(ws: Workspace, a, rep: Report):
    C = ws.get(a.name, "comodule")
    if a.vector is not None:
        x = [int(t) for t in a.vector.replace(",", " ").split()]
        if len(x) != C.dim:
            raise ShapeError(f"--vector needs {C.dim} entries")
    else:
        rng = np.random.default_rng(a.seed)
        x = [0] * C.dim
        while C.dim and not any(x):
            x = rng.integers(0, C.H.p, C.dim).tolist()
    rep.data["x"] = x
    w = generator_witness(C, x)
    rep.check("witness", None)
    rep.data.update(K_dim=w.K.dim, rank=w.n, preimage=tolist(w.preimage))


COMMANDS = {
    "check-algebroid": (cmd_check_algebroid, False),
    "check-comodule": (cmd_check_comodule, False),
    "check-descent": (cmd_check_descent, False),
    "check-algebroid-hom": (cmd_check_algebroid_hom, False),
    "to-comodule": (cmd_to_comodule, True),
    "to-descent": (cmd_to_descent, True),
    "induce": (cmd_induce, True),
    "coinduce": (cmd_coinduce, True),
    "adjoint-check": (cmd_adjoint_check, False),
    "equivariant-to-comodule": (cmd_equivariant_to_comodule, True),
    "comodule-to-equivariant": (cmd_comodule_to_equivariant, True),
    "equivariant-enumerate": (cmd_equivariant_enumerate, False),
    "amitsur": (cmd_amitsur, False),
    "cartesian-check": (cmd_cartesian_check, False),
    "generator-witness": (cmd_generator_witness, False),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="algebroids", description="Verify Hopf algebroids, comodules and descent data.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("file", help="a .had document")
        sp.add_argument("--name", required=True, help="entity the command acts on")
        sp.add_argument("--json", help="write the JSON report here")
        sp.add_argument("--out", help="write the document with derived entities here")
        sp.add_argument("--as", dest="as_", help="name for the derived entity")
        sp.add_argument("--ceiling", type=int, help="size ceiling for tensor spaces and searches")
        sp.add_argument("--p", type=int, help="default prime for algebras without a p field")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized choices")
        sp.add_argument("--hom", help="algebroid_hom entity (induce, coinduce, adjoint-check)")
        sp.add_argument("--with", dest="with_", help="second comodule (adjoint-check)")
        sp.add_argument("--module", help="module entity (amitsur)")
        sp.add_argument("--algebroid", help="algebroid entity to use for a group action")
        sp.add_argument("--dim", type=int, default=2, help="largest dimension to enumerate")
        sp.add_argument("--vector", help="coordinates of x (generator-witness)")
    return ap


def run(command: str, argv: list[str]) -> Report:
    """Run one command; never raises for bad input or failed checks."""
    a = build_parser().parse_args([command, *argv])
    rep = Report(command, a.name)
    if command == "generator-witness" and a.vector is None:
        rep.seed = a.seed
    fn, derives = COMMANDS[command]
    try:
        ws = Workspace(parse(_read(a.file)), a.p)
        with ceiling(a.ceiling) if a.ceiling is not None else _null():
            if derives:
                ex = Exporter(ws)
                fn(ws, a, rep, ex)
                rep.derived = ex.text()
                if a.out:
                    _write(a.out, serialize(ex.document()))
            else:
                fn(ws, a, rep)
    except INPUT_ERRORS as exc:
        rep.input_error = f"{type(exc).__name__}: {exc}"
    except OSError as exc:
        rep.input_error = f"{type(exc).__name__}: {exc}"
    except AlgebroidError as exc:
        rep.check("load", exc.witness if exc.witness is not None else str(exc), type(exc).__name__, passed=False)
    return rep


class _null:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        build_parser().parse_args(argv)          # prints usage and exits 2
        return 2
    rep = run(argv[0], argv[1:])
    print(rep.render())
    path = _json_path(argv)
    if path is None and os.environ.get(REPORT_DIR_ENV):
        path = os.path.join(os.environ[REPORT_DIR_ENV], f"{rep.command}-{rep.target}.json")
    if path is not None:
        _write(path, json.dumps(rep.to_dict(), indent=2, ensure_ascii=False) + "\n")
    return rep.exit_status


def _json_path(argv: list[str]) -> Optional[str]:
    a = build_parser().parse_args(argv)
    return a.json


if __name__ == "__main__":
    sys.exit(main())
