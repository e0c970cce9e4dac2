from .numbers import QuadExt, rat_str, to_rat
from .orders import DEGREVLEX, WeightedOrder, sort_vars, var_key
from .poly import Poly, VariableMismatch, WeightedDegree, var
from .ratfunc import RationalFunction
from .parse import parse_expr, parse_poly
from .sturm import sturm_real_roots, exact_real_roots, UPoly

__all__ = [
    "QuadExt", "rat_str", "to_rat", "DEGREVLEX", "WeightedOrder", "sort_vars", "var_key",
    "Poly", "VariableMismatch", "WeightedDegree", "var", "RationalFunction", "parse_expr",
    "parse_poly", "sturm_real_roots", "exact_real_roots", "UPoly",
]
