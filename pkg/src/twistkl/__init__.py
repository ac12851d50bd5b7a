"""Exact computations in the Hecke-algebra module spanned by twisted involutions."""

from .coxeter import Case, CoxeterMatrix, Group, build_group, named_matrix
from .exactpoly import IntPoly, LaurentPoly

__version__ = "0.1.0"
