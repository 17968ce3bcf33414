"""Sparse multivariate polynomials and rational functions over Q.

Variables are plain strings.  A monomial is a tuple of ``(name, exponent)``
pairs sorted by name, with no zero exponents.  Exponents are positive
integers except for *unit* generators (names starting with ``exp(``), which
stand for exponentials and may carry any rational exponent.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

Monomial = Tuple[Tuple[str, Union[int, Fraction]], ...]
Scalar = Union[int, Fraction]

ONE_MONO: Monomial = ()
_SENTINEL = ("\U0010ffff", 0)


class UnsupportedExpression(ValueError):
    """The expression lies outside the class the kernel can decide."""


def is_unit_var(name: str) -> bool:
    return name.startswith("exp(")


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


def _norm_exp(e):
    if isinstance(e, Fraction) and e.denominator == 1:
        return int(e)
    return e


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, _norm_exp(e)) for v, e in d.items() if e != 0))


def mono_pow(a: Monomial, n) -> Monomial:
    return tuple((v, _norm_exp(e * n)) for v, e in a) if n else ONE_MONO


def mono_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """``a / b`` if it is a monomial (unit generators always divide)."""
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0 and not is_unit_var(v):
            return None
        d[v] = r
    return tuple(sorted((v, _norm_exp(e)) for v, e in d.items() if e != 0))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    out = []
    for v, e in a:
        if v in db:
            m = min(e, db[v])
            if m > 0 and not is_unit_var(v):
                out.append((v, m))
    return tuple(out)


def mono_degree(m: Monomial) -> Fraction:
    return sum((e for _, e in m), Fraction(0))


def lex_key(m: Monomial):
    """Sort key: the lex-leading monomial has the smallest key."""
    return tuple((v, -e) for v, e in m) + (_SENTINEL,)


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[m] = c
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = _as_fraction(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, name: str, exp: Scalar = 1) -> "Poly":
        return cls._raw({((name, exp),): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Monomial, coeff: Scalar = 1) -> "Poly":
        return cls({mono: coeff})

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(ONE_MONO, Fraction(0))

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree(self, var: Optional[str] = None):
        if not self.terms:
            return -1
        if var is None:
            return max(mono_degree(m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        if other.is_constant():
            k = other.terms[ONE_MONO]
            return Poly._raw({m: c * k for m, c in self.terms.items()})
        if self.is_constant():
            return other * self
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        if self.is_monomial():
            (m, c), = self.terms.items()
            return Poly._raw({mono_pow(m, n): c ** n})
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, k: Scalar) -> "Poly":
        k = _as_fraction(k)
        if not k:
            return ZERO
        return Poly._raw({m: c * k for m, c in self.terms.items()})

    def mul_mono(self, mono: Monomial, coeff: Scalar = 1) -> "Poly":
        coeff = _as_fraction(coeff)
        return Poly._raw({mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    # structure ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def leading(self) -> Tuple[Monomial, Fraction]:
        m = min(self.terms, key=lex_key)
        return m, self.terms[m]

    def coeffs_in(self, var: str) -> Dict[Scalar, "Poly"]:
        """View as a polynomial in ``var``: exponent -> coefficient."""
        out: Dict[Scalar, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: Poly._raw(t) for e, t in out.items()}

    def content_monomial(self) -> Monomial:
        return reduce(mono_gcd, self.terms) if self.terms else ONE_MONO

    # calculus -----------------------------------------------------------
    def diff(self, var: str) -> "Poly":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for i, (v, e) in enumerate(m):
                if v == var:
                    rest = m[:i] + m[i + 1:]
                    nm = rest if e == 1 else mono_mul(rest, ((v, _norm_exp(e - 1)),))
                    out[nm] = out.get(nm, 0) + c * e
                    break
        return Poly({k: v for k, v in out.items()})

    def subs(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Substitute polynomials for variables (integer exponents only)."""
        if not mapping:
            return self
        cache: Dict[Tuple[str, int], Poly] = {}
        acc: Dict[Monomial, Fraction] = {}
        result = ZERO
        for m, c in self.terms.items():
            keep = []
            factor = None
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = _coerce(mapping[v]) ** e
                    factor = cache[key] if factor is None else factor * cache[key]
                else:
                    keep.append((v, e))
            if factor is None:
                acc[m] = acc.get(m, 0) + c
            else:
                result = result + factor.mul_mono(tuple(keep), c)
        return result + Poly(acc)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at the given point; every variable must be supplied."""
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total

    def partial_evaluate(self, values: Mapping[str, Scalar]) -> "Poly":
        return self.subs({v: Poly.const(_as_fraction(val)) for v, val in values.items()})

    # division -----------------------------------------------------------
    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            return self.scale(1 / other.terms[ONE_MONO])
        if other.is_monomial():
            (om, oc), = other.terms.items()
            out = {}
            for m, c in self.terms.items():
                q = mono_div(m, om)
                if q is None:
                    raise ArithmeticError("inexact polynomial division")
                out[q] = c / oc
            return Poly._raw(out)
        lm, lc = other.leading()
        rem = dict(self.terms)
        quot: Dict[Monomial, Fraction] = {}
        while rem:
            m = min(rem, key=lex_key)
            q = mono_div(m, lm)
            if q is None:
                raise ArithmeticError("inexact polynomial division")
            k = rem[m] / lc
            quot[q] = quot.get(q, 0) + k
            for om, oc in other.terms.items():
                nm = mono_mul(q, om)
                s = rem.get(nm, 0) - k * oc
                if s:
                    rem[nm] = s
                else:
                    rem.pop(nm, None)
        return Poly(quot)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading()[1])

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return format_poly(self)


ZERO = Poly._raw({})
ONE = Poly._raw({ONE_MONO: Fraction(1)})


def _coerce(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return NotImplemented


def pvar(name: str) -> Poly:
    return Poly.var(name)


def pconst(c: Scalar) -> Poly:
    return Poly.const(c)


def psum(items: Iterable[Poly]) -> Poly:
    return reduce(lambda a, b: a + b, items, ZERO)


# display -------------------------------------------------------------------

def _fmt_exp(e) -> str:
    return str(e) if isinstance(e, int) or e.denominator == 1 else f"({e})"


def format_monomial(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{_fmt_exp(e)}" for v, e in m)


def _display_key(m: Monomial):
    return (-mono_degree(m), lex_key(m))


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for m in sorted(p.terms, key=_display_key):
        c = p.terms[m]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_monomial(m)
        if not body:
            s = str(a)
        elif a == 1:
            s = body
        else:
            s = f"{a}*{body}"
        parts.append((sign, s))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


# gcd ---------------------------------------------------------------------

def _content_in(p: Poly, var: str) -> Poly:
    return reduce(poly_gcd, p.coeffs_in(var).values(), ZERO)


def _prem(a: Dict[int, Poly], b: Dict[int, Poly]) -> Dict[int, Poly]:
    """Pseudo-remainder of univariate polynomials given as exponent->coeff maps."""
    db = max(b)
    lcb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lcr = r[dr]
        shift = dr - db
        nr = {}
        for e, c in r.items():
            if e != dr:
                nr[e] = c * lcb
        for e, c in b.items():
            if e == db:
                continue
            t = nr.get(e + shift, ZERO) - lcr * c
            nr[e + shift] = t
        r = {e: c for e, c in nr.items() if not c.is_zero()}
    return r


def _from_univariate(u: Dict[int, Poly], var: str) -> Poly:
    return psum(c.mul_mono(((var, e),)) if e else c for e, c in u.items())


def _primitive_univariate(u: Dict[int, Poly]) -> Dict[int, Poly]:
    g = reduce(poly_gcd, u.values(), ZERO)
    return {e: c.divexact(g) for e, c in u.items()}


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor over Q, normalized to leading coefficient 1."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return ONE
    if a.is_monomial() or b.is_monomial():
        m = mono_gcd(a.content_monomial(), b.content_monomial())
        return Poly.monomial(m)
    if a == b:
        return a.monic()
    va, vb = a.variables(), b.variables()
    if any(is_unit_var(v) for v in va | vb):
        ma, mb = a.content_monomial(), b.content_monomial()
        return Poly.monomial(mono_gcd(ma, mb))
    common = sorted(va & vb)
    only_a = sorted(va - vb)
    if only_a:
        return poly_gcd(_content_in(a, only_a[0]), b)
    only_b = sorted(vb - va)
    if only_b:
        return poly_gcd(a, _content_in(b, only_b[0]))
    var = common[0]
    ua, ub = a.coeffs_in(var), b.coeffs_in(var)
    ca = reduce(poly_gcd, ua.values(), ZERO)
    cb = reduce(poly_gcd, ub.values(), ZERO)
    g_cont = poly_gcd(ca, cb)
    pa = {e: c.divexact(ca) for e, c in ua.items()}
    pb = {e: c.divexact(cb) for e, c in ub.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while True:
        if max(pb) == 0:
            return g_cont.monic()
        r = _prem(pa, pb)
        if not r:
            g = _from_univariate(pb, var)
            return (g * g_cont).monic()
        pa, pb = pb, _primitive_univariate(r)


# rational functions ---------------------------------------------------------

class Frac:
    """Reduced quotient of polynomials; the denominator has leading coefficient 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = ONE, *, reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c: Scalar) -> "Frac":
        return cls(Poly.const(c), ONE, reduced=True)

    @classmethod
    def var(cls, name: str) -> "Frac":
        return cls(Poly.var(name), ONE, reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def __add__(self, other) -> "Frac":
        other = _fcoerce(other)
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den, reduced=True)

    def __sub__(self, other) -> "Frac":
        return self + (-_fcoerce(other))

    def __rsub__(self, other) -> "Frac":
        return _fcoerce(other) - self

    def __mul__(self, other) -> "Frac":
        other = _fcoerce(other)
        return Frac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return Frac(self.den, self.num)

    def __truediv__(self, other) -> "Frac":
        return self * _fcoerce(other).inverse()

    def __rtruediv__(self, other) -> "Frac":
        return _fcoerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Frac":
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num ** n, self.den ** n, reduced=True)

    def diff(self, var: str) -> "Frac":
        dn, dd = self.num.diff(var), self.den.diff(var)
        if dd.is_zero():
            return Frac(dn, self.den)
        return Frac(dn * self.den - self.num * dd, self.den * self.den)

    def subs(self, mapping: Mapping[str, "Frac"]) -> "Frac":
        fm = {v: _fcoerce(q) for v, q in mapping.items()}
        if all(q.den == ONE for q in fm.values()):
            polys = {v: q.num for v, q in fm.items()}
            return Frac(self.num.subs(polys), self.den.subs(polys))
        return _subs_frac(self.num, fm) / _subs_frac(self.den, fm)

    def __eq__(self, other) -> bool:
        other = _fcoerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"Frac({self})"

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _fcoerce(x) -> Frac:
    if isinstance(x, Frac):
        return x
    if isinstance(x, Poly):
        return Frac(x, ONE, reduced=True)
    if isinstance(x, (int, Fraction)):
        return Frac.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Frac")


def _subs_frac(p: Poly, mapping: Mapping[str, Frac]) -> Frac:
    total = Frac.const(0)
    for m, c in p.terms.items():
        t = Frac.const(c)
        rest = []
        for v, e in m:
            if v in mapping:
                t = t * (_fcoerce(mapping[v]) ** e)
            else:
                rest.append((v, e))
        total = total + t * Poly.monomial(tuple(rest))
    return total


def _split_units(p: Poly) -> Tuple[Monomial, Poly]:
    """Pull a common unit-generator monomial out of ``p``."""
    units = None
    for m in p.terms:
        u = tuple((v, e) for v, e in m if is_unit_var(v))
        if units is None:
            units = u
        elif units != u:
            raise UnsupportedExpression("exponential terms in a denominator do not factor")
    if not units:
        return ONE_MONO, p
    inv = tuple((v, -e) for v, e in units)
    return units, p.mul_mono(inv)


def _reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if num.is_zero():
        return ZERO, ONE
    if any(is_unit_var(v) for v in den.variables()):
        units, den = _split_units(den)
        num = num.mul_mono(tuple((v, -e) for v, e in units))
    if den.is_constant():
        return num.scale(1 / den.terms[ONE_MONO]), ONE
    if den.is_monomial():
        (dm, dc), = den.terms.items()
        g = mono_gcd(num.content_monomial(), dm)
        if g:
            num = num.divexact(Poly.monomial(g))
            dm = mono_div(dm, g)
        return num.scale(1 / dc), Poly.monomial(dm)
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = num.divexact(g), den.divexact(g)
    lc = den.leading()[1]
    return num.scale(1 / lc), den.scale(1 / lc)
