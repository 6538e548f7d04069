"""Exception types.  Every verification failure carries a ``witness``: the
basis index (or tuple of indices) where the failing identity was observed."""


class AlgebroidError(Exception):
    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


class NotPrime(AlgebroidError):
    pass


class ShapeError(AlgebroidError):
    pass


class NonCommutative(AlgebroidError):
    pass


class NonAssociative(AlgebroidError):
    pass


class BadUnit(AlgebroidError):
    pass


class NotAlgebraHom(AlgebroidError):
    pass


class NotAModule(AlgebroidError):
    pass


class NotModuleHom(AlgebroidError):
    pass


class BaseMismatch(AlgebroidError):
    pass


class WellDefinednessViolation(AlgebroidError):
    pass


class SizeExceeded(AlgebroidError):
    pass


class AxiomViolation(AlgebroidError):
    def __init__(self, axiom: str, witness=None, report=None):
        super().__init__(f"axiom {axiom} fails at basis element {witness}", witness)
        self.axiom = axiom
        self.report = report


class NotFaithfullyFlat(AlgebroidError):
    def __init__(self, side: str, report=None):
        super().__init__(f"{side} is not faithfully flat", None)
        self.side = side
        self.report = report


class CompatibilityViolation(AlgebroidError):
    def __init__(self, identity: str, witness=None, report=None):
        super().__init__(f"{identity} fails at basis element {witness}", witness)
        self.identity = identity
        self.report = report


class NotLinear(AlgebroidError):
    pass


class NotCoassociative(AlgebroidError):
    pass


class NotCounital(AlgebroidError):
    pass


class NotComoduleHom(AlgebroidError):
    pass


class StructureDoesNotRestrict(AlgebroidError):
    pass


class ZeroVector(AlgebroidError):
    pass


class NotA1Linear(AlgebroidError):
    pass


class NotInvertible(AlgebroidError):
    pass


class CocycleViolation(AlgebroidError):
    pass


class NotExtendedSource(AlgebroidError):
    pass


class NotAGroup(AlgebroidError):
    pass


class NotAHomomorphismAction(AlgebroidError):
    pass


class NotAutomorphism(AlgebroidError):
    pass


class NotEquivariant(AlgebroidError):
    pass


class NotGroupActionAlgebroid(AlgebroidError):
    pass


class SearchSpaceTooLarge(AlgebroidError):
    pass


class NotSemilinear(AlgebroidError):
    pass


class InternalError(AlgebroidError):
    """A proven identity failed to hold; indicates a bug, never bad input."""


class ParseError(AlgebroidError):
    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        msg = f"line {line}, column {column}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg, (line, column))
        self.line, self.column, self.expected = line, column, expected


class UnresolvedReference(AlgebroidError):
    def __init__(self, name: str, detail: str = ""):
        super().__init__(f"unresolved reference {name!r}" + (f" ({detail})" if detail else ""), name)
        self.name = name


class DuplicateName(AlgebroidError):
    def __init__(self, name: str, line: int = 0):
        super().__init__(f"entity name {name!r} is defined twice (line {line})", name)
        self.name = name
