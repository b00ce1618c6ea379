"""Exact arithmetic: coefficient fields, integer lattices, parameter groups."""
from .field import FieldElement, format_field, symbol_field, symbols, to_field
from .groups import DualScalar, EPS, GroupElement, GroupScalar, ParamGroup, dual_of
from .lattice import (
    hermite_normal_form,
    in_lattice,
    is_primitive,
    kernel_lattice,
    saturate,
    smith_normal_form,
)

__all__ = [
    "FieldElement", "format_field", "symbol_field", "symbols", "to_field",
    "DualScalar", "EPS", "GroupElement", "GroupScalar", "ParamGroup", "dual_of",
    "hermite_normal_form", "in_lattice", "is_primitive", "kernel_lattice",
    "saturate", "smith_normal_form",
]
