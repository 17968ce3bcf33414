"""Riccati and Abel chains generated by the operator recursion ``(D_x + u^m)``."""
from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Tuple

from .kernel import DiffPoly, Poly, jet, jet_exponents, jet_order, jet_var, total_derivative
from .kernel.poly import format_monomial
from .report import CheckEntry, Erratum, FAIL, PASS, VerificationReport

DEFAULT_MAX_ORDER = 12


class ChainOrderError(ValueError):
    """Requested chain order is beyond the configured cap."""


class ChainFamily(Enum):
    RICCATI = "riccati"
    ABEL = "abel"

    @property
    def exponent(self) -> int:
        return 1 if self is ChainFamily.RICCATI else 2

    @classmethod
    def parse(cls, name) -> "ChainFamily":
        if isinstance(name, ChainFamily):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown chain family {name!r}; use 'riccati' or 'abel'") from None


RICCATI = ChainFamily.RICCATI
ABEL = ChainFamily.ABEL


def max_order() -> int:
    raw = os.environ.get("CHAINLAB_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CHAINLAB_MAX_ORDER must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("CHAINLAB_MAX_ORDER must be positive")
    return value


@dataclass(frozen=True)
class ChainEquation:
    family: ChainFamily
    order: int
    lhs: DiffPoly
    dep: str = "u"

    def weight_violations(self) -> List[Tuple]:
        """Monomials whose weight differs from ``N + 1/m``."""
        m = self.family.exponent
        target = m * self.order + 1
        bad = []
        for mono in self.lhs.terms:
            w = sum((m * k + 1) * e for k, e in jet_exponents(mono, self.dep).items())
            if w != target:
                bad.append(mono)
        return bad

    def check_structure(self) -> None:
        m = self.family.exponent
        top = ((jet(self.dep, self.order), 1),)
        pure = ((jet(self.dep, 0), self.order * m + 1),)
        if self.lhs.terms.get(top) != 1:
            raise AssertionError("leading jet coefficient is not 1")
        if self.lhs.terms.get(pure) != 1:
            raise AssertionError("pure power coefficient is not 1")
        if self.weight_violations():
            raise AssertionError("equation is not isobaric")

    def highest_derivative_rhs(self) -> DiffPoly:
        """``u^(N) = -(E_N - u^(N))``."""
        return -(self.lhs - jet_var(self.dep, self.order))

    def rename(self, dep: str) -> "ChainEquation":
        mapping = {jet(self.dep, k): jet_var(dep, k) for k in range(self.order + 1)}
        return ChainEquation(self.family, self.order, self.lhs.subs(mapping), dep)

    def __str__(self) -> str:
        return f"{format_chain(self.lhs, self.dep)} = 0"


def generate_chain(family, order: int, dep: str = "u") -> ChainEquation:
    """N-th member: ``E_1 = u' + u^(m+1)``, ``E_N = D_x E_{N-1} + u^m E_{N-1}``."""
    family = ChainFamily.parse(family)
    if order < 1:
        raise ValueError("chain order must be at least 1")
    cap = max_order()
    if order > cap:
        raise ChainOrderError(f"order {order} exceeds the maximum {cap} (CHAINLAB_MAX_ORDER)")
    m = family.exponent
    u = jet_var(dep, 0)
    um = u ** m
    e = jet_var(dep, 1) + u ** (m + 1)
    for _ in range(order - 1):
        e = total_derivative(e) + um * e
    return ChainEquation(family, order, e, dep)


def generate_chains(family, order: int, dep: str = "u") -> List[ChainEquation]:
    """All members 1..order, built incrementally."""
    family = ChainFamily.parse(family)
    first = generate_chain(family, 1, dep)
    out = [first]
    if order > max_order():
        raise ChainOrderError(f"order {order} exceeds the maximum {max_order()}")
    um = jet_var(dep, 0) ** family.exponent
    for n in range(2, order + 1):
        prev = out[-1].lhs
        out.append(ChainEquation(family, n, total_derivative(prev) + um * prev, dep))
    return out


# formatting ------------------------------------------------------------------

def _jet_sort_key(mono, dep="u"):
    exps = jet_exponents(mono, dep)
    top = max(exps) if exps else -1
    degree = sum(exps.values())
    return (-top, -degree, tuple(sorted(((-k, -e) for k, e in exps.items()))))


def ordered_terms(p: Poly, dep: str = "u"):
    """Terms ordered by (jet order desc, degree desc)."""
    return sorted(p.terms.items(), key=lambda t: _jet_sort_key(t[0], dep))


def _mono_text(mono, dep: str, latex: bool) -> str:
    exps = jet_exponents(mono, dep)
    parts = []
    for k in sorted(exps):
        e = exps[k]
        if latex:
            base = dep if k == 0 else f"{dep}_{{{'x' * k}}}"
            parts.append(base if e == 1 else f"{base}^{{{e}}}" if e > 9 else f"{base}^{e}")
        else:
            base = dep if k == 0 else f"{dep}_{k}"
            parts.append(base if e == 1 else f"{base}^{e}")
    others = tuple((v, e) for v, e in mono if not v.startswith(dep + "_"))
    if others:
        parts.append(format_monomial(others))
    return ("" if latex else "*").join(parts)


def format_chain(p: Poly, dep: str = "u", latex: bool = False) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (mono, c) in enumerate(ordered_terms(p, dep)):
        body = _mono_text(mono, dep, latex)
        a = abs(c)
        if latex and a.denominator != 1:
            coeff = f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
        else:
            coeff = str(a)
        if not body:
            t = coeff
        elif a == 1:
            t = body
        else:
            t = coeff + body if latex else f"{coeff}*{body}"
        sign = "-" if c < 0 else "+"
        if i == 0:
            prefix = "-" if c < 0 else ""
        else:
            prefix = sign if latex else f" {sign} "
        out.append(prefix + t)
    return "".join(out)


def to_latex(eq: ChainEquation) -> str:
    return format_chain(eq.lhs, eq.dep, latex=True) + "=0"


# published catalog ------------------------------------------------------------

# Transcription of the eight published chain members, letter for letter.
PUBLISHED_CHAINS: Dict[Tuple[ChainFamily, int], str] = {
    (RICCATI, 1): "u_1 + u^2",
    (RICCATI, 2): "u_2 + 3*u*u_1 + u^3",
    (RICCATI, 3): "u_3 + 4*u*u_2 + 6*u^2*u_1 + 3*u_1^2 + u^4",
    (RICCATI, 4): "u_4 + 5*u*u_3 + 10*u_1*u_2 + 10*u^2*u_2 + 15*u*u_1^2 + 10*u^3*u_1 + u^5",
    (ABEL, 1): "u_1 + u^3",
    (ABEL, 2): "u_2 + 4*u^2*u_1 + u^5",
    (ABEL, 3): "u_3 + 5*u^2*u_2 + 8*u*u_1^2 + 9*u^4*u_1 + u^7",
    (ABEL, 4): "u_4 + 6*u^2*u_3 + 26*u*u_1*u_2 + 14*u^4*u_1 + 8*u_1^3 + 44*u^3*u_1^2"
               " + 16*u^6*u_1 + u^9",
}

CHAIN_NAMES = {
    (RICCATI, 1): "first order Riccati equation",
    (RICCATI, 2): "modified Emden equation (Riccati II)",
    (RICCATI, 3): "Riccati III (Chazy subcase)",
    (RICCATI, 4): "Riccati IV",
    (ABEL, 1): "first order Abel equation",
    (ABEL, 2): "generalized van der Pol oscillator (Abel II)",
    (ABEL, 3): "Abel III (Chazy subcase)",
    (ABEL, 4): "Abel IV",
}

# Known misprint: the published Abel IV lists 14u^4u_x where the recursion
# (and weight homogeneity) requires 14u^4u_xx.
KNOWN_CHAIN_ERRATA = {
    (ABEL, 4): ({((jet("u", 0), 4), (jet("u", 2), 1)): Fraction(14)},
                {((jet("u", 0), 4), (jet("u", 1), 1)): Fraction(14)}),
}


def published_chain(family, order: int) -> DiffPoly:
    from .kernel.expr import to_canon
    from .parser import parse_expression, standard_symbols
    family = ChainFamily.parse(family)
    e = parse_expression(PUBLISHED_CHAINS[(family, order)], standard_symbols())
    c = to_canon(e)
    return c.r0.num


@dataclass(frozen=True)
class ChainDiff:
    only_generated: Dict
    only_published: Dict

    @property
    def matches(self) -> bool:
        return not self.only_generated and not self.only_published

    def describe(self, dep: str = "u") -> str:
        def fmt(d):
            return " + ".join(f"{c}*{_mono_text(m, dep, False)}" for m, c in d.items()) or "0"
        return f"generated-only: {fmt(self.only_generated)}; published-only: {fmt(self.only_published)}"


def diff_terms(generated: Poly, published: Poly) -> ChainDiff:
    g, p = generated.terms, published.terms
    only_g = {m: c for m, c in g.items() if p.get(m) != c}
    only_p = {m: c for m, c in p.items() if g.get(m) != c}
    return ChainDiff(only_g, only_p)


def catalog_check() -> VerificationReport:
    """Compare the recursion against the transcribed published members."""
    report = VerificationReport("chain catalog")
    for (family, order) in sorted(PUBLISHED_CHAINS, key=lambda t: (t[0].value, t[1])):
        gen = generate_chain(family, order)
        pub = published_chain(family, order)
        d = diff_terms(gen.lhs, pub)
        anchor = CHAIN_NAMES[(family, order)]
        name = f"{family.value} N={order} vs published form"
        if d.matches:
            report.add(CheckEntry(name, PASS, anchor, "0", family.value, order))
            continue
        known = KNOWN_CHAIN_ERRATA.get((family, order))
        is_known = known is not None and (d.only_generated, d.only_published) == known
        report.add(CheckEntry(name + (" (known misprint)" if is_known else ""),
                              PASS if is_known else FAIL, anchor,
                              format_chain(gen.lhs - pub), family.value, order, d.describe()))
        report.errata.append(Erratum(
            f"{family.value} N={order}",
            " + ".join(f"{c}*{_mono_text(m, 'u', False)}" for m, c in d.only_published.items()),
            " + ".join(f"{c}*{_mono_text(m, 'u', False)}" for m, c in d.only_generated.items()),
            "term differs from the recursion; recursion output is weight-homogeneous"
            if is_known else "unexpected mismatch"))
    return report


__all__ = [
    "ChainFamily", "RICCATI", "ABEL", "ChainEquation", "ChainOrderError",
    "generate_chain", "generate_chains", "catalog_check", "published_chain",
    "diff_terms", "format_chain", "to_latex", "ordered_terms", "max_order",
    "PUBLISHED_CHAINS", "CHAIN_NAMES", "KNOWN_CHAIN_ERRATA", "DEFAULT_MAX_ORDER",
]
