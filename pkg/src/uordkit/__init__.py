"""Finite-model checking for uniform preorders, their existential completion and combinatory algebras."""

from .errors import UordError
from .relcore import BinRel, Carrier, FunTable
from .uord import Basis, UniformPreorder, contains, fiber_leq, from_basis

__version__ = "0.1.0"

__all__ = ["Basis", "BinRel", "Carrier", "FunTable", "UniformPreorder", "UordError", "contains", "fiber_leq", "from_basis"]
