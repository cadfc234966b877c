"""Exact number-field arithmetic for Q and quadratic fields."""

from .field import FieldDescriptor, FieldElement, make_field, psi_inf
from .ideals import (
    FracIdeal,
    QuotientModule,
    elements_in_embedding_box,
    ideal_arith,
    quotient_module,
    solve_integer_system,
)
from .units import (
    UnitData,
    canonical_tp_generator,
    fundamental_unit,
    integral_ideals_of_norm,
    k_index,
    narrow_class_reps,
    narrow_class_reps_all,
    narrowly_principal_generator,
    principal_generator,
    totally_positive_unit_generator,
    tp_units_mod_squares,
)

__all__ = [
    "FieldDescriptor", "FieldElement", "make_field", "psi_inf",
    "FracIdeal", "QuotientModule", "quotient_module", "ideal_arith",
    "elements_in_embedding_box", "solve_integer_system",
    "UnitData", "tp_units_mod_squares", "fundamental_unit",
    "totally_positive_unit_generator", "principal_generator",
    "narrowly_principal_generator", "canonical_tp_generator",
    "narrow_class_reps", "narrow_class_reps_all",
    "integral_ideals_of_norm", "k_index",
]
