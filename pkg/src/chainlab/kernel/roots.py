"""Exact real-root isolation for univariate rational polynomials (Sturm sequences)."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .poly import Poly, UnsupportedExpression

Coeffs = List[Fraction]  # ascending powers


def to_coeffs(p: Poly, var: str = "x") -> Coeffs:
    extra = p.variables() - {var}
    if extra:
        raise UnsupportedExpression(f"polynomial is not univariate in {var}: {sorted(extra)}")
    deg = p.degree(var) if not p.is_zero() else -1
    out = [Fraction(0)] * (int(deg) + 1)
    for mono, c in p.terms.items():
        e = dict(mono).get(var, 0)
        if e != int(e) or e < 0:
            raise UnsupportedExpression("non-polynomial exponent")
        out[int(e)] += c
    return _trim(out)


def _trim(a: Coeffs) -> Coeffs:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def horner(a: Sequence[Fraction], x) -> Fraction:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _deriv(a: Coeffs) -> Coeffs:
    return [k * a[k] for k in range(1, len(a))]


def _divmod(a: Coeffs, b: Coeffs):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = _trim(a)
    return q, a


def _gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    while b:
        a, b = b, _divmod(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def square_free(a: Coeffs) -> Coeffs:
    g = _gcd(a, _deriv(a))
    if len(g) <= 1:
        return list(a)
    return _divmod(a, g)[0]


def sturm_sequence(a: Coeffs) -> List[Coeffs]:
    seq = [list(a), _deriv(a)]
    while seq[-1]:
        r = _divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _variations(seq, x) -> int:
    signs = [s for s in (horner(p, x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in ``(lo, hi]``."""
    return _variations(seq, lo) - _variations(seq, hi)


def real_roots(p, lo, hi, width=Fraction(1, 10 ** 12), var: str = "x") -> List[Fraction]:
    """Distinct real roots in the closed interval ``[lo, hi]``, each located to ``width``."""
    a = p if isinstance(p, list) else to_coeffs(p, var)
    lo, hi = Fraction(lo), Fraction(hi)
    width = Fraction(width)
    if lo > hi:
        lo, hi = hi, lo
    if len(a) <= 1:
        if not a:
            raise UnsupportedExpression("zero polynomial has no isolated roots")
        return []
    sf = square_free(a)
    seq = sturm_sequence(sf)
    roots: List[Fraction] = []
    if horner(sf, lo) == 0:
        roots.append(lo)
    stack = [(lo, hi)]
    isolated = []
    while stack:
        a_, b_ = stack.pop()
        n = count_roots(seq, a_, b_)
        if n == 0:
            continue
        if n == 1:
            isolated.append((a_, b_))
            continue
        mid = (a_ + b_) / 2
        stack.append((a_, mid))
        stack.append((mid, b_))
    for a_, b_ in isolated:
        roots.append(_refine(sf, a_, b_, width))
    return sorted(set(roots))


def _refine(sf: Coeffs, a: Fraction, b: Fraction, width: Fraction) -> Fraction:
    """Root in ``(a, b]`` known to be unique; bisect on the sign."""
    fb = horner(sf, b)
    if fb == 0:
        return b
    # the unique root sits in (a, b); f(b) != 0 while f(a) may vanish at a neighbouring root
    while b - a > width:
        mid = (a + b) / 2
        fm = horner(sf, mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fb > 0):
            b, fb = mid, fm
        else:
            a = mid
    return (a + b) / 2


def sign_on(p, x, var: str = "x") -> int:
    a = p if isinstance(p, list) else to_coeffs(p, var)
    v = horner(a, Fraction(x))
    return (v > 0) - (v < 0)


__all__ = ["to_coeffs", "horner", "square_free", "sturm_sequence", "count_roots",
           "real_roots", "sign_on"]
