"""Finite Hopf algebroids over prime fields: comodules, descent data,
induction and co-induction, equivariant modules and flat descent, all with
exact arithmetic mod p."""

from .algebra import (AlgebraHom, FiniteAlgebra, PrimeField, direct_product, field_algebra, identity_hom,
                      make_algebra, polynomial_quotient, product_algebra, quotient_algebra, tensor_algebras,
                      truncated_polynomial, unit_map)
from .comodule import (Comodule, ComoduleHom, comodule_cokernel, comodule_hom_space, comodule_image,
                       comodule_kernel, counit_retraction, extended_comodule, generator_witness, make_comodule,
                       make_comodule_hom, quotient_comodule, subcomodule)
from .descent import (DescentDatum, comodule_of_descent, descent_hom_defect, descent_maps, descent_of_comodule,
                      make_descent_datum)
from .equivariant import (EquivariantModule, comodule_from_equivariant, enumerate_comodules,
                          enumerate_equivariant, equivariant_from_comodule, equivariant_hom_space,
                          make_equivariant_module)
from .errors import AlgebroidError
from .fileformat import Document, Workspace, parse, serialize
from .flat_descent import FinitePresheaf, amitsur_check, cartesian_check, cartesianize, global_sections
from .functoriality import adjunction_check, coinduce, coinduce_map, induce, induce_map
from .groups import (FiniteGroup, GroupAction, cyclic_group, group_product, make_group_action,
                     permutation_action, symmetric_group, trivial_action, trivial_group)
from .hopf import (AlgebroidHom, HopfAlgebroid, check_axioms, group_action_algebroid, group_restriction_hom,
                   identity_algebroid_hom, make_algebroid_hom, make_hopf_algebroid, unit_algebroid)
from .modules import (FModule, ModuleHom, flatness_report, free_module, hom_space, is_faithfully_flat,
                      regular_module)
from .tensor import TensorSpace, tensor_over

__version__ = "0.1.0"


def shipped_example(name: str) -> str:
    """Path of a shipped ``.had`` example, e.g. ``shipped_example("unit_f2")``."""
    from importlib.resources import files
    return str(files(__package__) / "data" / f"{name}.had")


def shipped_examples() -> list[str]:
    from importlib.resources import files
    return sorted(str(p) for p in (files(__package__) / "data").iterdir() if p.name.endswith(".had"))
