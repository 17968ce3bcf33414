"""Exact symbolic core: polynomials, rational functions, jets and expression trees."""
from .poly import (Frac, Poly, UnsupportedExpression, poly_gcd, pvar, pconst,
                   psum, format_poly)
from .jets import (DiffPoly, jet, jet_var, parse_jet, jet_order, jet_monomial,
                   jet_exponents, total_derivative, derive_frac, derive_poly,
                   covering_rule, partial_rule)
from .expr import (Expr, Const, Sym, Jet, CFun, Add, Mul, Pow, Exp, X, V, U, C0,
                   as_expr, const, ujet, add, mul, neg, power, exp, sqrt, diff,
                   subs, substitute_c, atoms, Canon, to_canon, from_canon,
                   simplify, is_zero, equal, covering_total_derivative,
                   evaluate, poly_to_expr, frac_to_expr)
from .radical import PowerForm

__all__ = [name for name in dir() if not name.startswith("_")]
