"""Jet variables, differential polynomials and derivations on rational functions.

Jet variable ``u^(k)`` is the polynomial variable ``"u_k"``.  The undetermined
function ``c(x)`` and its derivatives are jets of the dependent name ``c``.
A differential polynomial (:data:`DiffPoly`) is an ordinary :class:`Poly`
whose variables are jets.
"""
from __future__ import annotations

import re
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

from .poly import ONE, ONE_MONO, Frac, Poly, Monomial, is_unit_var

DiffPoly = Poly

_JET_RE = re.compile(r"^([A-Za-z]+)_(\d+)$")

Rule = Callable[[str], Optional[Union[Frac, Poly]]]


def jet(dep: str, k: int) -> str:
    return f"{dep}_{k}"


def parse_jet(name: str) -> Optional[Tuple[str, int]]:
    m = _JET_RE.match(name)
    if m is None:
        return None
    return m.group(1), int(m.group(2))


def jet_var(dep: str, k: int) -> Poly:
    return Poly.var(jet(dep, k))


def jet_order(p: Poly, dep: str = "u") -> int:
    """Highest k with ``dep_k`` present, or -1."""
    best = -1
    for v in p.variables():
        pj = parse_jet(v)
        if pj and pj[0] == dep:
            best = max(best, pj[1])
    return best


def jet_monomial(exponents: Mapping[int, int], dep: str = "u") -> Monomial:
    """Monomial from a ``{k: exponent}`` map."""
    return tuple(sorted((jet(dep, k), e) for k, e in exponents.items() if e))


def jet_exponents(m: Monomial, dep: str = "u") -> Dict[int, int]:
    out = {}
    for v, e in m:
        pj = parse_jet(v)
        if pj and pj[0] == dep:
            out[pj[1]] = e
    return out


def _jet_rule(name: str):
    pj = parse_jet(name)
    if pj is None:
        return None
    return Poly.var(jet(pj[0], pj[1] + 1))


def total_derivative(p: Poly) -> Poly:
    """D_x on polynomials in jets and x: ``D u_k = u_{k+1}``, ``D x = 1``.

    Any other variable is treated as a constant.
    """
    out = Poly()
    for v in p.variables():
        if v == "x":
            d = ONE
        else:
            d = _jet_rule(v)
            if d is None:
                continue
        out = out + p.diff(v) * d
    return out


def derive_poly(p: Poly, rule: Rule) -> Frac:
    """Apply the derivation defined on variables by ``rule`` to ``p``."""
    by_den: Dict[Poly, Poly] = {}
    for v in p.variables():
        d = rule(v)
        if d is None:
            continue
        if isinstance(d, Poly):
            d = Frac(d, ONE, reduced=True)
        if d.is_zero():
            continue
        term = p.diff(v) * d.num
        by_den[d.den] = by_den.get(d.den, Poly()) + term
    out = Frac.const(0)
    for den, num in by_den.items():
        out = out + Frac(num, den)
    return out


def derive_frac(q: Frac, rule: Rule) -> Frac:
    dn = derive_poly(q.num, rule)
    if q.den.is_constant():
        return dn * Frac(ONE, q.den, reduced=True)
    dd = derive_poly(q.den, rule)
    if dd.is_zero():
        return dn / q.den
    return dn / q.den - Frac(q.num, q.den * q.den) * dd


def covering_rule(flux: Optional[Frac]) -> Rule:
    """Total x-derivative on the covering system ``v_x = flux``."""

    def rule(name: str):
        if name == "x":
            return ONE
        if name == "v":
            return flux
        if name == "exp(v)":
            return None if flux is None else flux * Poly.var("exp(v)")
        if name == "exp(x)":
            return Poly.var("exp(x)")
        return _jet_rule(name)

    return rule


def partial_rule(symbol: str) -> Rule:
    """Partial derivative with respect to ``symbol`` (x acts on c-jets and exp(x))."""

    def rule(name: str):
        if name == symbol:
            return ONE
        if symbol == "x":
            if name == "exp(x)":
                return Poly.var("exp(x)")
            pj = parse_jet(name)
            if pj and pj[0] == "c":
                return Poly.var(jet("c", pj[1] + 1))
        if symbol == "v" and name == "exp(v)":
            return Poly.var("exp(v)")
        return None

    return rule


def c_order(q: Frac) -> int:
    """Highest derivative of c present in a rational function (-1 if none)."""
    return max(jet_order(q.num, "c"), jet_order(q.den, "c"))


__all__ = [
    "DiffPoly", "jet", "parse_jet", "jet_var", "jet_order", "jet_monomial",
    "jet_exponents", "total_derivative", "derive_poly", "derive_frac",
    "covering_rule", "partial_rule", "c_order", "is_unit_var", "ONE_MONO",
]
