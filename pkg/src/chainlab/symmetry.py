"""Covering systems, the nonlocal generator family and its verification.

The covering system of a chain member ``E_N = 0`` adjoins ``v_x = f(x, u)``.
The generator ``X = c(x) e^v u d/du + m c(x) e^v d/dv`` with flux
``f = -m u^m - c'/c`` is checked three ways: against the transcribed
determining systems of the second-order members, by direct invariance of the
prolonged field at any order, and on the invariants ``z = x`` and
``zeta = u_x/u + u^m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .chains import ChainEquation, ChainFamily, generate_chain
from .kernel import (CFun, Canon, Expr, Frac, Jet, Sym, UnsupportedExpression, V, X,
                     atoms, covering_rule, exp, from_canon, jet, jet_var, mul,
                     power, substitute_c, to_canon, ujet)
from .kernel.expr import C0, U, ZERO_E, canon_partial, const
from .kernel.jets import c_order
from .report import FAIL, INCONCLUSIVE, PASS, CheckEntry, VerificationReport


@dataclass(frozen=True)
class VectorField:
    xi: Expr
    phi: Expr
    psi: Expr

    def canon(self) -> Tuple[Canon, Canon, Canon]:
        return to_canon(self.xi), to_canon(self.phi), to_canon(self.psi)

    def specialize_c(self, c_expr: Expr) -> "VectorField":
        return VectorField(substitute_c(self.xi, c_expr), substitute_c(self.phi, c_expr),
                           substitute_c(self.psi, c_expr))


@dataclass(frozen=True)
class CoveringSystem:
    equation: ChainEquation
    flux: Expr

    def __post_init__(self):
        for a in atoms(self.flux):
            if a == V or (isinstance(a, Jet) and not (a.dep == "u" and a.k == 0)):
                raise ValueError(f"flux must depend on (x, u, c) only, found {a}")

    def flux_canon(self) -> Frac:
        c = to_canon(self.flux)
        if not c.is_rational():
            raise UnsupportedExpression("flux must be a rational function")
        return c.r0

    def specialize_c(self, c_expr: Expr) -> "CoveringSystem":
        return CoveringSystem(self.equation, substitute_c(self.flux, c_expr))


@dataclass(frozen=True)
class ProlongedField:
    base: VectorField
    coefficients: Tuple[Expr, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)


def build_covering_flux(family) -> Expr:
    """``-m u^m - c'/c``."""
    m = ChainFamily.parse(family).exponent
    return mul(const(-m), power(U, m)) - CFun(1) / C0


def build_generator(family) -> VectorField:
    """``xi = 0``, ``phi = c e^v u``, ``psi = m c e^v``."""
    m = ChainFamily.parse(family).exponent
    return VectorField(ZERO_E, mul(C0, exp(V), U), mul(const(m), C0, exp(V)))


def build_covering_system(family, order: int) -> CoveringSystem:
    return CoveringSystem(generate_chain(family, order), build_covering_flux(family))


def nonlocality_measure(vf: VectorField) -> Expr:
    """``xi_v^2 + phi_v^2``; nonzero means the symmetry is nonlocal."""
    xi_v = canon_partial(to_canon(vf.xi), V)
    phi_v = canon_partial(to_canon(vf.phi), V)
    return from_canon(xi_v * xi_v + phi_v * phi_v)


def is_nonlocal(vf: VectorField) -> bool:
    xi_v = canon_partial(to_canon(vf.xi), V)
    phi_v = canon_partial(to_canon(vf.phi), V)
    return not (xi_v * xi_v + phi_v * phi_v).is_zero()


def _prolong_canon(vf: VectorField, flux: Frac, order: int, c_cap: Optional[int]) -> List[Canon]:
    rule = covering_rule(flux)
    xi, phi, _ = vf.canon()
    dxi = xi.derive(rule)
    coeffs = []
    prev = phi
    for k in range(1, order + 1):
        nxt = prev.derive(rule)
        if not dxi.is_zero():
            nxt = nxt - Canon.rational(jet_var("u", k)) * dxi
        if c_cap is not None:
            top = max(c_order(nxt.r0), -1 if nxt.r1 is None else c_order(nxt.r1))
            if top > c_cap:
                raise UnsupportedExpression(
                    f"c-derivative of order {top} exceeds the truncation c^({c_cap})")
        coeffs.append(nxt)
        prev = nxt
    return coeffs


def prolong(vf: VectorField, cov: CoveringSystem, order: int) -> ProlongedField:
    """Coefficients ``phi^(k) = D phi^(k-1) - u_k D xi`` with D on the covering system."""
    if order < 1:
        raise ValueError("prolongation order must be at least 1")
    coeffs = _prolong_canon(vf, cov.flux_canon(), order, order + 2)
    return ProlongedField(vf, tuple(from_canon(c) for c in coeffs))


# printed determining systems -----------------------------------------------------

class _Partials:
    """Partial derivatives of xi, phi, psi, f in canonical form, memoized."""

    def __init__(self, vf: VectorField, flux: Frac):
        xi, phi, psi = vf.canon()
        self.base = {"xi": xi, "phi": phi, "psi": psi, "f": Canon(flux)}
        self.cache: Dict[Tuple[str, Tuple[str, ...]], Canon] = {}
        self.syms = {"x": X, "u": U, "v": V}

    def __call__(self, name: str, *wrt: str) -> Canon:
        key = (name, wrt)
        if key not in self.cache:
            if not wrt:
                self.cache[key] = self.base[name]
            else:
                self.cache[key] = canon_partial(self(name, *wrt[:-1]), self.syms[wrt[-1]])
        return self.cache[key]


def _k(n) -> Canon:
    return Canon.rational(n)


def _riccati_ii_system(d: _Partials, u: Canon) -> List[Canon]:
    f = d("f")
    return [
        d("xi", "u", "u"),
        d("psi", "u") - f * d("xi", "u"),
        d("phi", "u", "u") - d("f", "u") * d("xi", "v") - _k(2) * d("xi", "u", "x")
        - _k(2) * f * d("xi", "u", "v") + _k(6) * u * d("xi", "u"),
        d("psi", "x") + f * d("psi", "v") - f * d("xi", "x") - f * f * d("xi", "v")
        - d("f", "x") * d("xi") - d("f", "u") * d("phi"),
        _k(2) * u ** 3 * d("xi", "x") + _k(2) * f * u ** 3 * d("xi", "v") - d("phi", "u") * u ** 3
        + _k(3) * d("phi") * u ** 2 + _k(3) * d("phi", "x") * u + _k(3) * f * d("phi", "v") * u
        + d("phi", "x", "x") + f * f * d("phi", "v", "v") + _k(2) * f * d("phi", "v", "x")
        + d("f", "x") * d("phi", "v"),
        _k(3) * u * d("xi", "x") - d("xi", "x", "x") - f * f * d("xi", "v", "v")
        - _k(2) * f * d("xi", "v", "x") + _k(3) * f * u * d("xi", "v") - d("f", "x") * d("xi", "v")
        + _k(3) * u ** 3 * d("xi", "u") + d("f", "u") * d("phi", "v") + _k(2) * d("phi", "u", "x")
        + _k(2) * f * d("phi", "u", "v") + _k(3) * d("phi"),
    ]


def _abel_ii_system(d: _Partials, u: Canon) -> List[Canon]:
    f = d("f")
    return [
        d("xi", "u", "u"),
        d("psi", "u") - f * d("xi", "u"),
        d("phi", "u", "u") - d("f", "u") * d("xi", "v") - _k(2) * d("xi", "u", "x")
        - _k(2) * f * d("xi", "u", "v") + _k(8) * u ** 2 * d("xi", "u"),
        d("psi", "x") - f * d("xi", "x") - f * f * d("xi", "v") - d("f", "x") * d("xi")
        + f * d("psi", "v") - d("f", "u") * d("phi"),
        _k(2) * u ** 5 * d("xi", "x") + _k(2) * f * u ** 5 * d("xi", "v") - d("phi", "u") * u ** 5
        + _k(5) * d("phi") * u ** 4 + _k(4) * d("phi", "x") * u ** 2
        + _k(4) * f * d("phi", "v") * u ** 2 + d("phi", "x", "x") + f * f * d("phi", "v", "v")
        + _k(2) * f * d("phi", "v", "x") + d("f", "x") * d("phi", "v"),
        _k(4) * u ** 2 * d("xi", "x") - d("xi", "x", "x") - f * f * d("xi", "v", "v")
        - _k(2) * f * d("xi", "v", "x") - d("f", "x") * d("xi", "v")
        + _k(4) * f * u ** 2 * d("xi", "v") + _k(3) * u ** 5 * d("xi", "u")
        + d("f", "u") * d("phi", "v") + _k(2) * d("phi", "u", "x") + _k(2) * f * d("phi", "u", "v")
        + _k(8) * d("phi") * u,
    ]


DETERMINING_NAMES = {
    ChainFamily.RICCATI: ["xi_uu", "psi_u - f xi_u", "phi_uu equation", "psi_x equation",
                          "phi_xx equation", "xi_xx equation"],
    ChainFamily.ABEL: ["xi_uu", "psi_u - f xi_u", "phi_uu equation", "psi_x equation",
                       "phi_xx equation", "xi_xx equation"],
}


def determining_residuals(family, vf: Optional[VectorField] = None,
                          flux: Optional[Expr] = None) -> List[Canon]:
    """The six transcribed residuals of the second-order member's system."""
    family = ChainFamily.parse(family)
    vf = vf or build_generator(family)
    flux = flux if flux is not None else build_covering_flux(family)
    fc = to_canon(flux)
    if not fc.is_rational():
        raise UnsupportedExpression("flux must be rational")
    d = _Partials(vf, fc.r0)
    u = Canon.rational(jet_var("u", 0))
    system = _riccati_ii_system if family is ChainFamily.RICCATI else _abel_ii_system
    return system(d, u)


def _residual_text(c: Canon) -> str:
    return str(from_canon(c))


def verify_determining_equations(family, c_expr: Optional[Expr] = None) -> VerificationReport:
    family = ChainFamily.parse(family)
    vf = build_generator(family)
    flux = build_covering_flux(family)
    subject = f"determining system, {family.value} II"
    if c_expr is not None:
        vf, flux = vf.specialize_c(c_expr), substitute_c(flux, c_expr)
        subject += f" with c(x) = {c_expr}"
    report = VerificationReport(subject)
    anchor = f"determining system of {family.value.capitalize()} II covering"
    try:
        residuals = determining_residuals(family, vf, flux)
    except (UnsupportedExpression, ZeroDivisionError) as exc:
        report.add(CheckEntry("determining system", INCONCLUSIVE, anchor, str(exc),
                              family.value, 2))
        return report
    for i, (name, r) in enumerate(zip(DETERMINING_NAMES[family], residuals), start=1):
        try:
            ok = r.is_zero()
            status = PASS if ok else FAIL
            res = "0" if ok else _residual_text(r)
        except UnsupportedExpression as exc:
            status, res = INCONCLUSIVE, str(exc)
        report.add(CheckEntry(f"equation {i}: {name}", status, anchor, res, family.value, 2))
    return report


# direct invariance ---------------------------------------------------------------

def invariance_residuals(family, order: int, vf: Optional[VectorField] = None,
                         cov: Optional[CoveringSystem] = None) -> Tuple[Canon, Canon]:
    """``X^(N) E_N`` and the covering-equation residual, both on solutions."""
    family = ChainFamily.parse(family)
    vf = vf or build_generator(family)
    cov = cov or build_covering_system(family, order)
    eq = cov.equation
    flux = cov.flux_canon()
    coeffs = _prolong_canon(vf, flux, order, order + 2)
    xi, phi, psi = vf.canon()
    lhs = eq.lhs
    total = Canon.rational(0)
    for k in range(order + 1):
        dk = lhs.diff(jet("u", k))
        if dk.is_zero():
            continue
        coeff = phi if k == 0 else coeffs[k - 1]
        total = total + coeff * Canon.rational(dk)
    if not xi.is_zero():
        total = total + xi * Canon.rational(lhs.diff("x"))
    on_shell = {jet("u", order): Frac(eq.highest_derivative_rhs())}
    main = _restrict(total, on_shell)

    rule = covering_rule(flux)
    fcan = Canon(flux)
    cover = psi.derive(rule) - fcan * xi.derive(rule) - xi * canon_partial(fcan, X) \
        - phi * canon_partial(fcan, U)
    return main, _restrict(cover, on_shell)


def _restrict(c: Canon, mapping) -> Canon:
    r0 = c.r0.subs(mapping)
    if c.r1 is None:
        return Canon(r0)
    return Canon(r0, c.r1.subs(mapping), c.base)


def verify_invariance(family, order: int, c_expr: Optional[Expr] = None,
                      vf: Optional[VectorField] = None,
                      cov: Optional[CoveringSystem] = None) -> VerificationReport:
    """Invariance of ``E_N = 0`` and ``v_x = f`` under the prolonged generator."""
    family = ChainFamily.parse(family)
    vf = vf or build_generator(family)
    cov = cov or build_covering_system(family, order)
    if c_expr is not None:
        vf, cov = vf.specialize_c(c_expr), cov.specialize_c(c_expr)
    report = VerificationReport(f"invariance, {family.value} N={order}")
    anchor = f"nonlocal symmetry of the {family.value} chain"
    try:
        main, cover = invariance_residuals(family, order, vf, cov)
        checks = [("prolonged generator annihilates E_N on solutions", main),
                  ("covering equation v_x = f invariant", cover)]
        for name, r in checks:
            ok = r.is_zero()
            report.add(CheckEntry(f"{name} (N={order})", PASS if ok else FAIL, anchor,
                                  "0" if ok else _residual_text(r), family.value, order))
    except (UnsupportedExpression, ZeroDivisionError) as exc:
        report.add(CheckEntry(f"invariance (N={order})", INCONCLUSIVE, anchor, str(exc),
                              family.value, order))
    return report


# invariants --------------------------------------------------------------------------

def zeta_invariant(family) -> Expr:
    """``u_x/u + u^m``."""
    m = ChainFamily.parse(family).exponent
    return ujet(1) / U + power(U, m)


def check_invariant_functions(family, c_expr: Optional[Expr] = None) -> VerificationReport:
    family = ChainFamily.parse(family)
    vf = build_generator(family)
    flux = build_covering_flux(family)
    if c_expr is not None:
        vf, flux = vf.specialize_c(c_expr), substitute_c(flux, c_expr)
    fc = to_canon(flux).r0
    report = VerificationReport(f"invariants, {family.value}")
    anchor = f"similarity variables of the {family.value} chain"
    xi, phi, psi = vf.canon()
    report.add(CheckEntry("X(z) = xi = 0 for z = x", PASS if xi.is_zero() else FAIL, anchor,
                          "0" if xi.is_zero() else _residual_text(xi), family.value, 1))
    phi1 = _prolong_canon(vf, fc, 1, None)[0]
    zeta = to_canon(zeta_invariant(family))
    action = xi * canon_partial(zeta, X) + phi * canon_partial(zeta, U) \
        + psi * canon_partial(zeta, V) + phi1 * canon_partial(zeta, ujet(1))
    ok = action.is_zero()
    report.add(CheckEntry(f"X^(1)(zeta) = 0 for zeta = {zeta_invariant(family)}",
                          PASS if ok else FAIL, anchor, "0" if ok else _residual_text(action),
                          family.value, 1))
    return report


def scaling_field(family) -> VectorField:
    """The point symmetry ``x d/dx - (u/m) d/du`` of every chain member."""
    m = ChainFamily.parse(family).exponent
    return VectorField(X, mul(const(-1) / const(m), U), ZERO_E)


__all__ = [
    "VectorField", "CoveringSystem", "ProlongedField", "build_covering_flux",
    "build_generator", "build_covering_system", "nonlocality_measure", "is_nonlocal",
    "prolong", "determining_residuals", "verify_determining_equations",
    "invariance_residuals", "verify_invariance", "zeta_invariant",
    "check_invariant_functions", "scaling_field", "DETERMINING_NAMES",
]
