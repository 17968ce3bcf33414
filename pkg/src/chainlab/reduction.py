"""Similarity reduction ``zeta = u_x/u + u^m`` as an exact polynomial identity.

Writing every jet ``u_k`` in terms of ``u`` and the zeta-jets turns the N-th
chain member into ``u * R_{N-1}(zeta)``, with ``R`` the Riccati chain, for
both families.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

from .chains import ChainEquation, ChainFamily, RICCATI, generate_chain
from .kernel import Expr, Poly, jet, jet_var, total_derivative
from .kernel.expr import U
from .report import FAIL, PASS, CheckEntry, VerificationReport

ZETA = "z"


class FactorizationFailure(ArithmeticError):
    """The substituted equation is not ``u`` times a lower Riccati member."""


@dataclass(frozen=True)
class SubstitutionTable:
    family: ChainFamily
    order: int
    entries: Dict[int, Poly]

    def mapping(self) -> Dict[str, Poly]:
        return {jet("u", k): p for k, p in self.entries.items()}


@dataclass(frozen=True)
class ReductionResult:
    source: ChainEquation
    target: ChainEquation
    cofactor: Expr
    residual: Poly

    @property
    def certified(self) -> bool:
        return self.residual.is_zero()


def build_substitution_table(family, order: int) -> SubstitutionTable:
    """``u_1 -> u (zeta - u^m)`` and ``u_k -> D(u_{k-1} entry)`` with u_1 re-substituted."""
    family = ChainFamily.parse(family)
    if order < 1:
        raise ValueError("order must be at least 1")
    u = jet_var("u", 0)
    first = u * (jet_var(ZETA, 0) - u ** family.exponent)
    entries = {1: first}
    back = {jet("u", 1): first}
    for k in range(2, order + 1):
        entries[k] = total_derivative(entries[k - 1]).subs(back)
    return SubstitutionTable(family, order, entries)


def substitute_invariant(eq: ChainEquation) -> Poly:
    """The chain member written in ``(u, zeta, zeta_1, ...)``."""
    table = build_substitution_table(eq.family, eq.order)
    return eq.lhs.subs(table.mapping())


def reduce_chain(eq: ChainEquation) -> ReductionResult:
    if eq.order < 2:
        raise ValueError("reduction needs order at least 2")
    substituted = substitute_invariant(eq)
    u = jet_var("u", 0)
    target = generate_chain(RICCATI, eq.order - 1, dep=ZETA)
    residual = substituted - u * target.lhs
    if not residual.is_zero():
        raise FactorizationFailure(
            f"{eq.family.value} N={eq.order} does not reduce to Riccati N={eq.order - 1}: "
            f"residual {residual}")
    return ReductionResult(eq, target, U, residual)


def has_common_u_factor(p: Poly) -> bool:
    """Every monomial carries at least one power of ``u``."""
    name = jet("u", 0)
    return all(dict(m).get(name, 0) >= 1 for m in p.terms)


def reduction_ladder(family, order: int) -> List[ChainEquation]:
    """Reduce repeatedly down to first order; every rung after the first is Riccati."""
    if order < 2:
        raise ValueError("ladder needs order at least 2")
    rungs = []
    eq = generate_chain(family, order)
    while eq.order >= 2:
        res = reduce_chain(eq)
        rungs.append(res.target)
        eq = res.target.rename("u")
    return rungs


def verify_reductions(family, max_order: int = 10, min_order: int = 2) -> VerificationReport:
    family = ChainFamily.parse(family)
    report = VerificationReport(f"similarity reductions, {family.value}")
    anchor = f"similarity reduction of the {family.value} chain to the Riccati chain"
    for n in range(min_order, max_order + 1):
        eq = generate_chain(family, n)
        name = f"{family.value} N={n} -> riccati N={n - 1} in zeta"
        try:
            res = reduce_chain(eq)
            report.add(CheckEntry(name, PASS, anchor, "0", family.value, n))
        except FactorizationFailure as exc:
            report.add(CheckEntry(name, FAIL, anchor, str(exc), family.value, n))
    return report


__all__ = [
    "SubstitutionTable", "ReductionResult", "FactorizationFailure",
    "build_substitution_table", "substitute_invariant", "reduce_chain",
    "has_common_u_factor", "reduction_ladder", "verify_reductions", "ZETA",
]
