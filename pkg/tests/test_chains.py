import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainlab.chains import (ABEL, RICCATI, ChainOrderError, catalog_check, diff_terms,
                             format_chain, generate_chain, generate_chains, max_order,
                             published_chain, to_latex)
from chainlab.kernel import jet_var, total_derivative
from chainlab.parser import parse_expression, standard_symbols
from chainlab.kernel import to_canon

from _series import (Series, horner, poly_derivative_coeffs, poly_integral_coeffs,
                     poly_mul_coeffs, poly_series)


def _poly(text):
    return to_canon(parse_expression(text, standard_symbols())).r0.num


def test_examples():
    assert generate_chain(RICCATI, 1).lhs == _poly("u_1 + u^2")
    assert generate_chain(RICCATI, 2).lhs == _poly("u_2 + 3*u*u_1 + u^3")
    assert generate_chain(ABEL, 4).lhs == _poly(
        "u_4 + 6*u^2*u_3 + 26*u*u_1*u_2 + 14*u^4*u_2 + 8*u_1^3 + 44*u^3*u_1^2"
        " + 16*u^6*u_1 + u^9")


def test_family_names_parse():
    assert generate_chain("Riccati", 2) == generate_chain(RICCATI, 2)
    with pytest.raises(ValueError):
        generate_chain("kdv", 2)
    with pytest.raises(ValueError):
        generate_chain(ABEL, 0)


def test_catalog_matches_except_known_misprint():
    rep = catalog_check()
    assert rep.status == "pass"
    assert len(rep.entries) == 8
    flagged = [e for e in rep.entries if "misprint" in e.name]
    assert [(e.family, e.order) for e in flagged] == [("abel", 4)]
    (err,) = rep.errata
    assert "u^4*u_1" in err.published and "u^4*u_2" in err.derived
    # exactly one term differs
    d = diff_terms(generate_chain(ABEL, 4).lhs, published_chain(ABEL, 4))
    assert len(d.only_generated) == 1 and len(d.only_published) == 1
    for fam, n in [(RICCATI, k) for k in range(1, 5)] + [(ABEL, k) for k in range(1, 4)]:
        assert diff_terms(generate_chain(fam, n).lhs, published_chain(fam, n)).matches


@pytest.mark.parametrize("family", [RICCATI, ABEL])
def test_recursion_and_structure_up_to_twelve(family):
    chain = generate_chains(family, 12)
    m = family.exponent
    u = jet_var("u", 0)
    for prev, cur in zip(chain, chain[1:]):
        assert cur.lhs - total_derivative(prev.lhs) - u ** m * prev.lhs == 0 * u
        assert cur == generate_chain(family, cur.order)
    for eq in chain:
        eq.check_structure()
        assert eq.weight_violations() == []
    counts = [len(eq.lhs) for eq in chain]
    assert counts == sorted(counts)


def test_latex_and_text_ordering():
    eq = generate_chain(RICCATI, 3)
    assert to_latex(eq) == "u_{xxx}+4uu_{xx}+6u^2u_{x}+3u_{x}^2+u^4=0"
    assert str(generate_chain(RICCATI, 2)) == "u_2 + 3*u*u_1 + u^3 = 0"
    assert to_latex(generate_chain(ABEL, 2)) == "u_{xx}+4u^2u_{x}+u^5=0"
    # text form parses back to the same polynomial
    for n in range(1, 7):
        for fam in (RICCATI, ABEL):
            p = generate_chain(fam, n).lhs
            assert _poly(format_chain(p)) == p


def test_max_order_env(monkeypatch):
    monkeypatch.setenv("CHAINLAB_MAX_ORDER", "3")
    assert max_order() == 3
    generate_chain(RICCATI, 3)
    with pytest.raises(ChainOrderError):
        generate_chain(RICCATI, 4)
    monkeypatch.setenv("CHAINLAB_MAX_ORDER", "zero")
    with pytest.raises(ValueError):
        max_order()
    monkeypatch.delenv("CHAINLAB_MAX_ORDER")
    assert max_order() == 12


def _jets_env(values):
    return {f"u_{k}": v for k, v in enumerate(values)}


@settings(max_examples=40)
@given(st.integers(1, 7),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.fractions(min_value=-2, max_value=2, max_denominator=5))
def test_riccati_linearizes_under_log_derivative(n, psi_coeffs, x0):
    # with u = psi'/psi the N-th member equals psi^(N+1)/psi (checked on Taylor jets)
    psi = [Fraction(c) for c in psi_coeffs] + [Fraction(1)]
    if horner(psi, x0) == 0:
        return
    k = n + 1
    s = poly_series(psi, x0, k)
    ds = poly_series(poly_derivative_coeffs(psi) or [0], x0, k)
    jets = (ds / s).derivative_values()
    val = generate_chain(RICCATI, n).lhs.evaluate(_jets_env(jets))
    higher = psi
    for _ in range(n + 1):
        higher = poly_derivative_coeffs(higher) or [Fraction(0)]
    assert val == horner(higher, x0) / horner(psi, x0)


@settings(max_examples=30)
@given(st.integers(1, 6), st.lists(st.integers(-4, 4), min_size=0, max_size=5),
       st.fractions(min_value=-1, max_value=1, max_denominator=4))
def test_abel_annihilates_square_root_family(n, lower, x0):
    # u = P / sqrt(S) with S' = 2 P^2 and deg P = N - 1 solves the N-th Abel member
    p = ([Fraction(c) for c in lower] + [Fraction(0)] * n)[: n - 1] + [Fraction(1)]
    s_coeffs = poly_integral_coeffs([2 * a for a in poly_mul_coeffs(p, p)])
    # pick the constant so that S(x0) = 1, which keeps the series rational
    s_coeffs[0] += 1 - horner(s_coeffs, x0)
    k = n
    s = poly_series(s_coeffs, x0, k)
    u = poly_series(p, x0, k) * s.power(Fraction(-1, 2))
    jets = u.derivative_values()
    assert generate_chain(ABEL, n).lhs.evaluate(_jets_env(jets)) == 0
