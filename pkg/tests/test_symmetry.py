from fractions import Fraction

import pytest

from chainlab.chains import ABEL, RICCATI, generate_chain
from chainlab.kernel import (C0, CFun, Const, U, V, X, add, equal, exp, is_zero, jet_var, mul,
                             neg, power, to_canon, ujet)
from chainlab.parser import parse_expression
from chainlab.symmetry import (CoveringSystem, VectorField, build_covering_flux,
                               build_covering_system, build_generator, check_invariant_functions,
                               determining_residuals, invariance_residuals, is_nonlocal,
                               nonlocality_measure, prolong, scaling_field,
                               verify_determining_equations, verify_invariance)

FAMILIES = [RICCATI, ABEL]


def test_flux_examples():
    assert equal(build_covering_flux(RICCATI), add(neg(U), neg(mul(CFun(1), power(C0, -1)))))
    assert equal(build_covering_flux(ABEL),
                 add(mul(Const(Fraction(-2)), power(U, 2)), neg(mul(CFun(1), power(C0, -1)))))
    cov = build_covering_system(RICCATI, 2).specialize_c(Const(Fraction(1)))
    assert equal(cov.flux, neg(U))


def test_generator_examples():
    r, a = build_generator(RICCATI), build_generator(ABEL)
    assert is_zero(r.xi) and is_zero(a.xi)
    assert equal(r.phi, mul(C0, exp(V), U)) and equal(a.phi, mul(C0, exp(V), U))
    assert equal(r.psi, mul(C0, exp(V)))
    assert equal(a.psi, mul(Const(Fraction(2)), C0, exp(V)))


@pytest.mark.parametrize("family", FAMILIES)
def test_nonlocality(family):
    vf = build_generator(family)
    assert is_nonlocal(vf)
    assert equal(nonlocality_measure(vf), power(mul(C0, exp(V), U), 2))
    assert not is_nonlocal(scaling_field(family))


def test_covering_rejects_nonlocal_flux():
    with pytest.raises(ValueError):
        CoveringSystem(generate_chain(RICCATI, 2), add(U, V))
    with pytest.raises(ValueError):
        CoveringSystem(generate_chain(RICCATI, 2), ujet(1))


def test_prolongation_examples():
    cov = build_covering_system(RICCATI, 2)
    f = cov.flux
    (phi1,) = prolong(build_generator(RICCATI), cov, 1).coefficients
    assert equal(phi1, mul(exp(V), add(mul(CFun(1), U), mul(C0, ujet(1)), mul(C0, U, f))))
    # v-free point field xi = 0, phi = u prolongs to u_1
    (p1,) = prolong(VectorField(Const(Fraction(0)), U, Const(Fraction(0))), cov, 1).coefficients
    assert equal(p1, ujet(1))
    # c = 1
    cov1 = cov.specialize_c(Const(Fraction(1)))
    (q1,) = prolong(build_generator(RICCATI).specialize_c(Const(Fraction(1))), cov1, 1).coefficients
    assert equal(q1, mul(exp(V), add(ujet(1), neg(power(U, 2)))))


@pytest.mark.parametrize("family", FAMILIES)
def test_scaling_prolongation_matches_classical_formula(family):
    # x d/dx - (u/m) d/du has phi^(k) = -(k + 1/m) u_k
    m = family.exponent
    cov = build_covering_system(family, 4)
    pf = prolong(scaling_field(family), cov, 4)
    for k, coeff in enumerate(pf.coefficients, start=1):
        assert equal(coeff, mul(Const(-(k + Fraction(1, m))), ujet(k)))


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("order", range(1, 7))
def test_scaling_is_a_point_symmetry_of_every_member(family, order):
    main, _ = invariance_residuals(family, order, scaling_field(family))
    assert main.is_zero()


@pytest.mark.parametrize("family", FAMILIES)
def test_determining_equations_vanish(family):
    rs = determining_residuals(family)
    assert len(rs) == 6
    assert all(r.is_zero() for r in rs)
    rep = verify_determining_equations(family)
    assert rep.status == "pass" and len(rep.entries) == 6
    assert all(e.anchor for e in rep.entries)


@pytest.mark.parametrize("c_text", ["exp(2*x)", "x^2+1", "3", "exp(-x)*x"])
@pytest.mark.parametrize("family", FAMILIES)
def test_determining_equations_with_concrete_c(family, c_text):
    rep = verify_determining_equations(family, parse_expression(c_text))
    assert rep.status == "pass"


@pytest.mark.parametrize("family", FAMILIES)
def test_wrong_generators_fail(family):
    m = family.exponent
    wrong_phi = VectorField(Const(Fraction(0)), mul(C0, exp(V), power(U, 2)),
                            mul(Const(Fraction(m)), C0, exp(V)))
    wrong_psi = VectorField(Const(Fraction(0)), mul(C0, exp(V), U),
                            mul(Const(Fraction(m + 1)), C0, exp(V)))
    assert not all(r.is_zero() for r in determining_residuals(family, wrong_phi))
    assert not all(r.is_zero() for r in determining_residuals(family, wrong_psi))
    assert verify_invariance(family, 3, vf=wrong_phi).status == "fail"
    assert verify_invariance(family, 3, vf=wrong_psi).status == "fail"


def test_wrong_flux_fails():
    # drop the -c'/c part of the flux
    vf = build_generator(RICCATI)
    assert not all(r.is_zero() for r in determining_residuals(RICCATI, vf, neg(U)))


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("order", range(1, 9))
def test_invariance_up_to_eight(family, order):
    rep = verify_invariance(family, order)
    assert rep.status == "pass", rep.to_text()
    assert len(rep.entries) == 2


@pytest.mark.parametrize("family", FAMILIES)
def test_invariance_with_concrete_c(family):
    rep = verify_invariance(family, 3, parse_expression("exp(2*x)"))
    assert rep.status == "pass"


@pytest.mark.parametrize("family", FAMILIES)
def test_invariants(family):
    rep = check_invariant_functions(family)
    assert rep.status == "pass" and len(rep.entries) == 2


def test_zeta_with_wrong_power_is_not_invariant():
    from chainlab.kernel.expr import canon_partial
    from chainlab.symmetry import _prolong_canon
    vf = build_generator(RICCATI)
    fc = to_canon(build_covering_flux(RICCATI)).r0
    phi1 = _prolong_canon(vf, fc, 1, None)[0]
    zeta = to_canon(add(mul(ujet(1), power(U, -1)), power(U, 2)))
    _, phi, _ = vf.canon()
    action = phi * canon_partial(zeta, U) + phi1 * canon_partial(zeta, ujet(1))
    assert not action.is_zero()
