"""Partial applicative structures, combinatory algebras and their bridge to DCOs."""

from .bridge import (
    DcoBridge,
    SKRealizability,
    dco_to_rpca,
    polynomial_in_Rn_check,
    realizability_leq,
    rpca_to_dco,
)
from .combinators import Filter, RelPca, bracket_abstract, check_combinators, check_obligations
from .opas import OUT_OF_BUDGET, UNDEFINED, Opas, SKOpas, TableOpas, eval_term
from .terms import App, Const, Var, app, parse

__all__ = [
    "App", "Const", "DcoBridge", "Filter", "OUT_OF_BUDGET", "Opas", "RelPca", "SKOpas", "SKRealizability",
    "TableOpas", "UNDEFINED", "Var", "app", "bracket_abstract", "check_combinators", "check_obligations",
    "dco_to_rpca", "eval_term", "parse", "polynomial_in_Rn_check", "realizability_leq", "rpca_to_dco",
]
