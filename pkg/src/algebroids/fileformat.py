"""The ``.had`` definition format: parsing, serialization and loading.

A document starts with ``had <version>`` and holds named entities::

    algebra B {
      p = 3
      builtin = product
      n = 2
    }

Field values are integers, identifiers (names of other entities or builtin
keywords) or bracketed arrays.  ``#`` starts a comment.  The grammar is in
``docs/format.md``.  Matrices of maps into tensor spaces (``nabla``, ``psi``,
``tau``) are written in ambient coordinates, i.e. on the pure-tensor basis
``e_i ⊗ f_k`` at index ``i * dim(right) + k``, so files do not depend on the
basis this package picks for a tensor product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import linalg as la
from .algebra import (AlgebraHom, FiniteAlgebra, field_algebra, identity_hom, make_algebra,
                      polynomial_quotient, product_algebra, quotient_algebra, truncated_polynomial)
from .comodule import Comodule, base_change_left, canonical_unit_coaction, extended_comodule, make_comodule, spaces
from .descent import DescentDatum, make_descent_datum
from .equivariant import EquivariantModule
from .errors import DuplicateName, ParseError, ShapeError, UnresolvedReference
from .groups import (FiniteGroup, GroupAction, cyclic_group, group_product, restrict_action, symmetric_group,
                     trivial_action, trivial_group)
from .hopf import (AlgebroidHom, HopfAlgebroid, group_action_algebroid, group_restriction_hom,
                   identity_algebroid_hom, make_algebroid_hom, make_hopf_algebroid, unit_algebroid)
from .modules import FModule, cyclic_quotient, free_module, ideal_module, regular_module, zero_module
from .tensor import algebra_tensor

VERSION = "1"
SUPPORTED_VERSIONS = ("1",)


class Ident(str):
    """An identifier value (entity name or keyword), as opposed to an integer."""


# field type tags: int, ident, array, ref:<kind>, refs:<kind>
SCHEMA: dict[str, list[tuple[str, str]]] = {
    "algebra": [("p", "int"), ("builtin", "ident"), ("n", "int"), ("coeffs", "array"), ("of", "ref:algebra"),
                ("ideal", "array"), ("dim", "int"), ("mul", "array"), ("unit", "array")],
    "hom": [("builtin", "ident"), ("src", "ref:algebra"), ("dst", "ref:algebra"), ("matrix", "array")],
    "module": [("algebra", "ref:algebra"), ("builtin", "ident"), ("rank", "int"), ("generators", "array"),
               ("dim", "int"), ("action", "array")],
    "group": [("builtin", "ident"), ("n", "int"), ("factors", "refs:group"), ("table", "array")],
    "group_action": [("group", "ref:group"), ("algebra", "ref:algebra"), ("builtin", "ident"),
                     ("of", "ref:group_action"), ("elements", "array"), ("permutations", "array"),
                     ("rho", "array")],
    "algebroid": [("builtin", "ident"), ("base", "ref:algebra"), ("action", "ref:group_action"),
                  ("convention", "ident"), ("A0", "ref:algebra"), ("A1", "ref:algebra"), ("etaL", "ref:hom"),
                  ("etaR", "ref:hom"), ("eps", "ref:hom"), ("kappa", "ref:hom"), ("nabla", "array")],
    "algebroid_hom": [("src", "ref:algebroid"), ("dst", "ref:algebroid"), ("builtin", "ident"),
                      ("elements", "array"), ("phi0", "ref:hom"), ("phi1", "ref:hom")],
    "comodule": [("algebroid", "ref:algebroid"), ("module", "ref:module"), ("builtin", "ident"),
                 ("from", "ref:module"), ("psi", "array")],
    "descent": [("algebroid", "ref:algebroid"), ("module", "ref:module"), ("tau", "array")],
    "equivariant": [("action", "ref:group_action"), ("module", "ref:module"), ("pi", "array")],
    "restriction": [("arrow", "ref:hom"), ("source", "ref:module"), ("target", "ref:module"),
                    ("matrix", "array")],
}

BUILTINS = {
    "algebra": ("field", "truncated_polynomial", "polynomial_quotient", "product", "quotient"),
    "hom": ("identity", "quotient"),
    "module": ("regular", "free", "ideal", "cyclic", "zero"),
    "group": ("trivial", "cyclic", "symmetric", "product"),
    "group_action": ("trivial", "permutation", "restriction"),
    "algebroid": ("unit", "group_action"),
    "algebroid_hom": ("identity", "restriction"),
    "comodule": ("extended", "unit"),
}


@dataclass
class Entity:
    kind: str
    name: str
    fields: dict
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    positions: dict = field(default_factory=dict, compare=False, repr=False)

    def get(self, key, default=None):
        return self.fields.get(key, default)

    def need(self, key):
        if key not in self.fields:
            raise ParseError(self.line, self.column, f"field {key!r} in {self.kind} {self.name}")
        return self.fields[key]

    def references(self) -> list[tuple[str, str]]:
        """``(name, kind)`` for every reference field."""
        out = []
        for key, tag in SCHEMA[self.kind]:
            if key not in self.fields:
                continue
            if tag.startswith("ref:"):
                out.append((self.fields[key], tag[4:]))
            elif tag.startswith("refs:"):
                out.extend((v, tag[5:]) for v in self.fields[key])
        return out


@dataclass
class Document:
    version: str = VERSION
    entities: dict = field(default_factory=dict)

    def add(self, e: Entity) -> None:
        if e.name in self.entities:
            raise DuplicateName(e.name, e.line)
        self.entities[e.name] = e

    def __getitem__(self, name: str) -> Entity:
        try:
            return self.entities[name]
        except KeyError:
            raise UnresolvedReference(name) from None

    def __contains__(self, name) -> bool:
        return name in self.entities

    def names(self, kind: Optional[str] = None) -> list[str]:
        return [n for n, e in self.entities.items() if kind is None or e.kind == kind]

    def copy(self) -> "Document":
        return Document(self.version, dict(self.entities))


# -- tokenizer / parser ---------------------------------------------------------

_TOKEN = re.compile(r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<int>-?\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<punct>[{}\[\]=,])")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[_Tok]:
    toks, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, col, "a token", text[pos])
        kind, s = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, text: Optional[str] = None, expected: Optional[str] = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            raise ParseError(t.line, t.column, expected or repr(text or kind), t.text or "end of input")
        self.i += 1
        return t

    def document(self) -> Document:
        self.take("ident", "had", "header 'had <version>'")
        v = self.take("int", expected="a version number")
        if v.text not in SUPPORTED_VERSIONS:
            raise ParseError(v.line, v.column, f"a supported version {SUPPORTED_VERSIONS}", v.text)
        doc = Document(v.text)
        while self.peek().kind != "eof":
            doc.add(self.entity())
        return doc

    def entity(self) -> Entity:
        k = self.take("ident", expected="an entity kind")
        if k.text not in SCHEMA:
            raise ParseError(k.line, k.column, "one of " + ", ".join(SCHEMA), k.text)
        name = self.take("ident", expected="an entity name")
        self.take("punct", "{")
        e = Entity(k.text, name.text, {}, k.line, k.column)
        types = dict(SCHEMA[k.text])
        while not (self.peek().kind == "punct" and self.peek().text == "}"):
            key = self.take("ident", expected="a field name or '}'")
            if key.text not in types:
                raise ParseError(key.line, key.column, f"a field of {k.text} ({', '.join(types)})", key.text)
            if key.text in e.fields:
                raise ParseError(key.line, key.column, "a field not already given", key.text)
            self.take("punct", "=")
            start = self.peek()
            value = self.value()
            _check_type(types[key.text], value, start, k.text)
            e.fields[key.text] = value
            e.positions[key.text] = (start.line, start.column)
        self.take("punct", "}")
        return e

    def value(self):
        t = self.peek()
        if t.kind == "int":
            self.i += 1
            return int(t.text)
        if t.kind == "ident":
            self.i += 1
            return Ident(t.text)
        if t.kind == "punct" and t.text == "[":
            self.i += 1
            items = []
            while True:
                t = self.peek()
                if t.kind == "punct" and t.text == "]":
                    self.i += 1
                    return items
                if items and t.kind == "punct" and t.text == ",":
                    self.i += 1
                items.append(self.value())
        raise ParseError(t.line, t.column, "an integer, identifier or '['", t.text or "end of input")


def _check_type(tag: str, value, tok: _Tok, kind: str) -> None:
    ok = {"int": isinstance(value, int), "ident": isinstance(value, Ident), "array": isinstance(value, list)}
    if tag.startswith("ref:"):
        good = isinstance(value, Ident)
    elif tag.startswith("refs:"):
        good = isinstance(value, list) and all(isinstance(v, Ident) for v in value)
    else:
        good = ok[tag]
        if tag == "array":
            good = good and _int_array(value)
    if not good:
        what = {"int": "an integer", "ident": "an identifier", "array": "an array of integers"}.get(
            tag, "a name" if tag.startswith("ref:") else "an array of names")
        raise ParseError(tok.line, tok.column, what, tok.text)


def _int_array(v) -> bool:
    if isinstance(v, list):
        return all(_int_array(x) for x in v)
    return isinstance(v, int) and not isinstance(v, Ident)


def parse(text: str) -> Document:
    """Parse and resolve references; raises ``ParseError``, ``DuplicateName``
    or ``UnresolvedReference``."""
    doc = _Parser(text).document()
    resolve(doc)
    return doc


def resolve(doc: Document) -> None:
    """Check that every reference names an entity of the right kind and that
    references are acyclic."""
    for e in doc.entities.values():
        for name, kind in e.references():
            if name not in doc.entities:
                raise UnresolvedReference(name, f"from {e.kind} {e.name}")
            if doc.entities[name].kind != kind:
                raise UnresolvedReference(name, f"expected a {kind}, found a {doc.entities[name].kind}")
    state: dict = {}

    def visit(n, trail):
        s = state.get(n)
        if s == 2:
            return
        if s == 1:
            raise UnresolvedReference(n, "cyclic reference through " + " -> ".join(trail + [n]))
        state[n] = 1
        for m, _ in doc.entities[n].references():
            visit(m, trail + [n])
        state[n] = 2

    for n in doc.entities:
        visit(n, [])


def load_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def parse_file(path) -> Document:
    return parse(load_text(path))


# -- serialization --------------------------------------------------------------

def _width(v) -> int:
    if isinstance(v, list):
        return max((_width(x) for x in v), default=1)
    return len(str(v))


def _format_value(v, indent: str, width: int) -> str:
    if not isinstance(v, list):
        return str(v)
    if all(not isinstance(x, list) for x in v):
        if v and isinstance(v[0], Ident):
            return "[" + " ".join(str(x) for x in v) + "]"
        return "[" + " ".join(str(x).rjust(width) for x in v) + "]"
    inner = indent + "  "
    rows = [inner + _format_value(x, inner, width) for x in v]
    return "[\n" + "\n".join(rows) + "\n" + indent + "]"


def serialize_entity(e: Entity) -> str:
    lines = [f"{e.kind} {e.name} {{"]
    for key, _ in SCHEMA[e.kind]:
        if key in e.fields:
            v = e.fields[key]
            lines.append(f"  {key} = {_format_value(v, '  ', _width(v))}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(doc: Document) -> str:
    """Canonical text: schema field order, right-aligned array entries."""
    parts = [f"had {doc.version}\n"]
    parts += [serialize_entity(e) for e in doc.entities.values()]
    return "\n".join(parts)


def tolist(a) -> list:
    return np.asarray(a, dtype=np.int64).tolist()


# -- loading --------------------------------------------------------------------

class Workspace:
    """Builds (and memoizes) the objects described by a document.  Field
    elements are reduced mod p here."""

    def __init__(self, doc: Document, p: Optional[int] = None):
        self.doc = doc
        self.default_p = p
        self._built: dict = {}
        self._quotient: dict = {}

    def get(self, name: str, kind: Optional[str] = None):
        e = self.doc[name]
        if kind is not None and e.kind != kind:
            raise UnresolvedReference(name, f"expected a {kind}, found a {e.kind}")
        if name not in self._built:
            self._built[name] = _BUILDERS[e.kind](self, e)
        return self._built[name]

    def entity(self, name: str) -> Entity:
        return self.doc[name]

    def name_of(self, obj, kind: str) -> Optional[str]:
        """Name of an entity of ``kind`` whose built object equals ``obj``."""
        for n in self.doc.names(kind):
            try:
                got = self.get(n)
            except Exception:
                continue
            if got is obj or (kind != "algebroid" and _same(got, obj)):
                return n
        return None

    def _builtin(self, e: Entity) -> Optional[str]:
        b = e.get("builtin")
        if b is not None and b not in BUILTINS.get(e.kind, ()):
            line, col = e.positions.get("builtin", (e.line, e.column))
            raise ParseError(line, col, f"a builtin {e.kind} ({', '.join(BUILTINS.get(e.kind, ()))})", b)
        return b

    def _p(self, e: Entity) -> int:
        p = e.get("p", self.default_p)
        if p is None:
            raise ParseError(e.line, e.column, f"field 'p' in algebra {e.name} (or a --p default)")
        return p

    def array(self, e: Entity, key: str, p: int, shape=None) -> np.ndarray:
        v = e.need(key)
        try:
            arr = la.asmat(v, p)
            if shape is not None:
                arr = arr.reshape(shape)
        except ValueError:
            line, col = e.positions.get(key, (e.line, e.column))
            raise ParseError(line, col, f"a rectangular array for {key}" +
                             (f" of shape {shape}" if shape is not None else "")) from None
        return arr


def _same(a, b) -> bool:
    try:
        return bool(a == b)
    except Exception:
        return False


def _build_algebra(ws: Workspace, e: Entity) -> FiniteAlgebra:
    b = ws._builtin(e)
    if b == "quotient":
        parent = ws.get(e.need("of"), "algebra")
        q, hom = quotient_algebra(parent, ws.array(e, "ideal", parent.p).reshape(-1, parent.dim))
        ws._quotient[e.name] = hom
        return q
    p = ws._p(e)
    if b == "field":
        return field_algebra(p)
    if b == "truncated_polynomial":
        return truncated_polynomial(p, e.need("n"))
    if b == "polynomial_quotient":
        return polynomial_quotient(p, tolist(ws.array(e, "coeffs", p)))
    if b == "product":
        return product_algebra(p, e.need("n"))
    n = e.need("dim")
    return make_algebra(p, ws.array(e, "mul", p, (n, n, n)), ws.array(e, "unit", p, (n,)))


def _build_hom(ws: Workspace, e: Entity) -> AlgebraHom:
    b = ws._builtin(e)
    if b == "identity":
        return identity_hom(ws.get(e.need("src"), "algebra"))
    if b == "quotient":
        dst = e.need("dst")
        ws.get(dst, "algebra")
        if dst not in ws._quotient:
            raise ParseError(e.line, e.column, f"dst {dst} to be a builtin quotient algebra")
        hom = ws._quotient[dst]
        if "src" in e.fields and ws.get(e.fields["src"], "algebra") != hom.src:
            raise ShapeError("src is not the algebra the quotient was taken of")
        return hom
    src, dst = ws.get(e.need("src"), "algebra"), ws.get(e.need("dst"), "algebra")
    return AlgebraHom(src, dst, ws.array(e, "matrix", src.p, (dst.dim, src.dim)))


def _build_module(ws: Workspace, e: Entity) -> FModule:
    a = ws.get(e.need("algebra"), "algebra")
    b = ws._builtin(e)
    if b == "regular":
        return regular_module(a)
    if b == "free":
        return free_module(a, e.need("rank"))
    if b == "zero":
        return zero_module(a)
    if b in ("ideal", "cyclic"):
        gens = ws.array(e, "generators", a.p).reshape(-1, a.dim)
        return ideal_module(a, gens) if b == "ideal" else cyclic_quotient(a, gens)
    n = e.need("dim")
    if n == 0:
        return FModule(a, None, dim=0)
    return FModule(a, ws.array(e, "action", a.p, (a.dim, n, n)), dim=n)


def _build_group(ws: Workspace, e: Entity) -> FiniteGroup:
    b = ws._builtin(e)
    if b == "trivial":
        return trivial_group()
    if b == "cyclic":
        return cyclic_group(e.need("n"))
    if b == "symmetric":
        return symmetric_group(e.need("n"))
    if b == "product":
        g = None
        for name in e.need("factors"):
            h = ws.get(name, "group")
            g = h if g is None else group_product(g, h)
        if g is None:
            return trivial_group()
        return g
    return FiniteGroup(np.asarray(e.need("table"), dtype=np.int64))


def _build_action(ws: Workspace, e: Entity) -> GroupAction:
    b = ws._builtin(e)
    if b == "restriction":
        return restrict_action(ws.get(e.need("of"), "group_action"), tolist(e.need("elements")))
    g, a = ws.get(e.need("group"), "group"), ws.get(e.need("algebra"), "algebra")
    if b == "trivial":
        return trivial_action(g, a)
    if b == "permutation":
        perms = np.asarray(e.need("permutations"), dtype=np.int64).reshape(g.order, a.dim)
        rho = np.zeros((g.order, a.dim, a.dim), dtype=np.int64)
        for x, s in enumerate(perms):
            rho[x, s, np.arange(a.dim)] = 1
        return GroupAction(g, a, rho)
    return GroupAction(g, a, ws.array(e, "rho", a.p, (g.order, a.dim, a.dim)))


def algebroid_components(ws: Workspace, e: Entity):
    """Components of an explicit algebroid, with ``nabla`` moved from
    ambient coordinates to the computed basis of ``T``."""
    A0, A1 = ws.get(e.need("A0"), "algebra"), ws.get(e.need("A1"), "algebra")
    homs = [ws.get(e.need(k), "hom") for k in ("etaL", "etaR", "eps", "kappa")]
    for k, hom, s, d in zip(("etaL", "etaR", "eps", "kappa"), homs, (A0, A0, A1, A1), (A1, A1, A0, A1)):
        if hom.src != s or hom.dst != d:
            raise ShapeError(f"{k} has the wrong source or target")
    T = algebra_tensor(homs[1], homs[0]).space
    amb = ws.array(e, "nabla", A0.p, (A1.dim * A1.dim, A1.dim))
    return (A0, A1, *homs, la.mm(T.projection, amb, A0.p))


def _build_algebroid(ws: Workspace, e: Entity) -> HopfAlgebroid:
    b = ws._builtin(e)
    if b == "unit":
        return unit_algebroid(ws.get(e.need("base"), "algebra"))
    if b == "group_action":
        return group_action_algebroid(ws.get(e.need("action"), "group_action"), str(e.get("convention", "hk")))
    return make_hopf_algebroid(*algebroid_components(ws, e))


def algebroid_hom_parts(ws: Workspace, e: Entity):
    return (ws.get(e.need("src"), "algebroid"), ws.get(e.need("dst"), "algebroid"),
            ws.get(e.need("phi0"), "hom"), ws.get(e.need("phi1"), "hom"))


def _build_algebroid_hom(ws: Workspace, e: Entity) -> AlgebroidHom:
    b = ws._builtin(e)
    src = ws.get(e.need("src"), "algebroid")
    if b == "identity":
        return identity_algebroid_hom(src)
    if b == "restriction":
        if src.group_action is None:
            raise ShapeError("restriction needs an algebroid built from a group action")
        conv = src.report.notes.get("convention", "hk")
        f = group_restriction_hom(src.group_action, tolist(e.need("elements")), conv)
        dst = ws.get(e.need("dst"), "algebroid")
        if f.src is not src or f.dst is not dst:
            raise ShapeError("dst is not the algebroid of the restricted action")
        return f
    return make_algebroid_hom(*algebroid_hom_parts(ws, e))


def comodule_psi(ws: Workspace, e: Entity, H: HopfAlgebroid, M: FModule) -> np.ndarray:
    E = spaces(H, M).E
    amb = ws.array(e, "psi", H.p, (H.A1.dim * M.dim, M.dim))
    return la.mm(E.projection, amb, H.p)


def _build_comodule(ws: Workspace, e: Entity) -> Comodule:
    H = ws.get(e.need("algebroid"), "algebroid")
    b = ws._builtin(e)
    if b == "extended":
        C = extended_comodule(H, ws.get(e.need("from"), "module"))
        if "module" in e.fields and ws.get(e.fields["module"], "module") != C.M:
            raise ShapeError("module does not match the extended comodule")
        return C
    M = ws.get(e.need("module"), "module")
    if b == "unit":
        return make_comodule(H, M, canonical_unit_coaction(H, M))
    return make_comodule(H, M, comodule_psi(ws, e, H, M))


def descent_tau(ws: Workspace, e: Entity, H: HopfAlgebroid, M: FModule) -> np.ndarray:
    L, R = base_change_left(H, M), spaces(H, M).E
    amb = ws.array(e, "tau", H.p, (H.A1.dim * M.dim, H.A1.dim * M.dim))
    return la.chain(H.p, R.projection, amb, L.section) if L.dim else la.zeros(R.dim, L.dim)


def _build_descent(ws: Workspace, e: Entity) -> DescentDatum:
    H = ws.get(e.need("algebroid"), "algebroid")
    M = ws.get(e.need("module"), "module")
    return make_descent_datum(H, M, descent_tau(ws, e, H, M))


def _build_equivariant(ws: Workspace, e: Entity) -> EquivariantModule:
    act = ws.get(e.need("action"), "group_action")
    M = ws.get(e.need("module"), "module")
    return EquivariantModule(act, M, ws.array(e, "pi", M.p, (act.group.order, M.dim, M.dim)))


@dataclass
class Restriction:
    arrow: AlgebraHom
    source: FModule
    target: FModule
    matrix: np.ndarray


def _build_restriction(ws: Workspace, e: Entity) -> Restriction:
    f = ws.get(e.need("arrow"), "hom")
    s, t = ws.get(e.need("source"), "module"), ws.get(e.need("target"), "module")
    return Restriction(f, s, t, ws.array(e, "matrix", f.p, (t.dim, s.dim)))


_BUILDERS: dict[str, Callable] = {
    "algebra": _build_algebra, "hom": _build_hom, "module": _build_module, "group": _build_group,
    "group_action": _build_action, "algebroid": _build_algebroid, "algebroid_hom": _build_algebroid_hom,
    "comodule": _build_comodule, "descent": _build_descent, "equivariant": _build_equivariant,
    "restriction": _build_restriction,
}


# -- export: objects back to entities -------------------------------------------

def module_entity(M: FModule, name: str, algebra: str) -> Entity:
    f = {"algebra": Ident(algebra), "dim": M.dim}
    if M.dim:
        f["action"] = tolist(M.action)
    return Entity("module", name, f)


def comodule_entity(C: Comodule, name: str, algebroid: str, module: str) -> Entity:
    amb = la.mm(C.E.section, C.psi, C.H.p) if C.E.dim else la.zeros(C.H.A1.dim * C.dim, C.dim)
    return Entity("comodule", name, {"algebroid": Ident(algebroid), "module": Ident(module), "psi": tolist(amb)})


def descent_entity(D: DescentDatum, name: str, algebroid: str, module: str) -> Entity:
    n = D.H.A1.dim * D.M.dim
    amb = la.chain(D.H.p, D.R.section, D.tau, D.L.projection) if D.L.dim else la.zeros(n, n)
    return Entity("descent", name, {"algebroid": Ident(algebroid), "module": Ident(module), "tau": tolist(amb)})


def equivariant_entity(E: EquivariantModule, name: str, action: str, module: str) -> Entity:
    return Entity("equivariant", name, {"action": Ident(action), "module": Ident(module), "pi": tolist(E.pi)})


class Exporter:
    """Collects derived entities, reusing names of equal objects already in
    the document."""

    def __init__(self, ws: Workspace):
        self.ws = ws
        self.entities: list[Entity] = []
        self._modules: list[tuple[FModule, str]] = []

    def _taken(self, name: str) -> bool:
        return name in self.ws.doc or any(e.name == name for e in self.entities)

    def fresh(self, base: str) -> str:
        if not self._taken(base):
            return base
        k = 2
        while self._taken(f"{base}_{k}"):
            k += 1
        return f"{base}_{k}"

    def module(self, M: FModule, hint: str) -> str:
        found = self.ws.name_of(M, "module")
        if found is not None:
            return found
        for other, name in self._modules:
            if other == M:
                return name
        alg = self.ws.name_of(M.algebra, "algebra")
        if alg is None:
            raise ShapeError("module over an algebra not named in the document")
        name = self.fresh(hint)
        self.entities.append(module_entity(M, name, alg))
        self._modules.append((M, name))
        return name

    def algebroid(self, H: HopfAlgebroid) -> str:
        found = self.ws.name_of(H, "algebroid")
        if found is None:
            raise ShapeError("algebroid not named in the document")
        return found

    def comodule(self, C: Comodule, name: str) -> Entity:
        e = comodule_entity(C, self.fresh(name), self.algebroid(C.H), self.module(C.M, name + "_module"))
        self.entities.append(e)
        return e

    def descent(self, D: DescentDatum, name: str) -> Entity:
        e = descent_entity(D, self.fresh(name), self.algebroid(D.H), self.module(D.M, name + "_module"))
        self.entities.append(e)
        return e

    def equivariant(self, E: EquivariantModule, name: str, action: str) -> Entity:
        e = equivariant_entity(E, self.fresh(name), action, self.module(E.M, name + "_module"))
        self.entities.append(e)
        return e

    def text(self) -> str:
        return "\n".join(serialize_entity(e) for e in self.entities)

    def document(self) -> Document:
        doc = self.ws.doc.copy()
        for e in self.entities:
            doc.add(e)
        return doc
