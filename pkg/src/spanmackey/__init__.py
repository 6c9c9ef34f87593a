"""Finite equivariant span and Mackey calculus.

Groups as multiplication tables, finite G-sets, the Burnside category of
spans, Mackey functors, homotopy fixed points of categories with G-action,
and K_0 of retractive H-sets over a finite G-set.
"""

from .groups import FiniteGroup, Subgroup, build_group, catalog, named_group, subgroup_classes
from .gsets import GMap, GSet, induce, orbit, point, restrict
from .spans import Span, burnside_multiply, compose_spans, table_of_marks
from .mackey import MackeyFunctor, burnside_mackey, check_mackey_axioms, span_act
from .fixpoints import (
    beck_chevalley,
    check_adjunction,
    f_sharp,
    homotopy_fixed_points,
    rectify_pseudo,
    restrict_along,
    ret_sets_category,
    transfer_along,
)
from .atheory import a_g_pi0, k0_basis, tom_dieck_check

__all__ = [
    "FiniteGroup", "Subgroup", "build_group", "catalog", "named_group", "subgroup_classes",
    "GMap", "GSet", "induce", "orbit", "point", "restrict",
    "Span", "burnside_multiply", "compose_spans", "table_of_marks",
    "MackeyFunctor", "burnside_mackey", "check_mackey_axioms", "span_act",
    "beck_chevalley", "check_adjunction", "f_sharp", "homotopy_fixed_points",
    "rectify_pseudo", "restrict_along", "ret_sets_category", "transfer_along",
    "a_g_pi0", "k0_basis", "tom_dieck_check",
]
