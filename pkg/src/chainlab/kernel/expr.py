"""Expression trees over x, u, v, jets, parameters, c(x) and exp.

Trees are built through the smart constructors :func:`add`, :func:`mul`,
:func:`power` and :func:`exp`, which flatten and fold constants but never
reorder operands.  Deciding equality goes through :func:`to_canon`, which maps
an expression to ``r0 + r1*sqrt(B)`` with ``r0, r1`` reduced rational
functions and ``B`` a single radicand registered as positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Tuple, Union

from .jets import (covering_rule, derive_frac, jet, parse_jet, partial_rule)
from .poly import (ONE, ONE_MONO, Frac, Poly, UnsupportedExpression,
                   _fcoerce, is_unit_var)


class Expr:
    """Base class of expression nodes (immutable, structurally comparable)."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), power(self, -1))

    def __neg__(self):
        return neg(self)

    def __pow__(self, q):
        return power(self, Fraction(q))

    def __str__(self):
        from ..parser import to_text
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Sym(Expr):
    """Plain symbol: ``x``, ``v``, ``zeta``, parameters ``k1``..., ``C``."""
    name: str


@dataclass(frozen=True)
class Jet(Expr):
    """k-th derivative of a dependent variable (``u`` or ``z`` for zeta)."""
    dep: str
    k: int


@dataclass(frozen=True)
class CFun(Expr):
    """d-th derivative of the undetermined function c(x)."""
    d: int


@dataclass(frozen=True)
class Add(Expr):
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: Fraction


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


ZERO_E = Const(Fraction(0))
ONE_E = Const(Fraction(1))
X = Sym("x")
V = Sym("v")
U = Jet("u", 0)
C0 = CFun(0)


def as_expr(obj) -> Expr:
    if isinstance(obj, Expr):
        return obj
    if isinstance(obj, (int, Fraction)):
        return Const(Fraction(obj))
    raise TypeError(f"cannot convert {type(obj).__name__} to Expr")


def const(c) -> Const:
    return Const(Fraction(c))


def ujet(k: int) -> Jet:
    return Jet("u", k)


def add(*args: Expr) -> Expr:
    flat = []
    total = Fraction(0)
    for a in args:
        parts = a.args if isinstance(a, Add) else (a,)
        for p in parts:
            if isinstance(p, Const):
                total += p.value
            else:
                flat.append(p)
    if total:
        flat.append(Const(total))
    if not flat:
        return ZERO_E
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*args: Expr) -> Expr:
    flat = []
    coeff = Fraction(1)
    for a in args:
        parts = a.args if isinstance(a, Mul) else (a,)
        for p in parts:
            if isinstance(p, Const):
                coeff *= p.value
            else:
                flat.append(p)
    if coeff == 0:
        return ZERO_E
    if coeff != 1:
        flat.insert(0, Const(coeff))
    if not flat:
        return ONE_E
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def neg(e: Expr) -> Expr:
    return mul(Const(Fraction(-1)), e)


def power(base: Expr, q) -> Expr:
    q = Fraction(q)
    if q == 0:
        return ONE_E
    if q == 1:
        return base
    if isinstance(base, Const):
        if q.denominator == 1:
            if base.value == 0 and q < 0:
                raise ZeroDivisionError("zero to a negative power")
            return Const(base.value ** int(q))
        if base.value in (0, 1):
            return base
    if isinstance(base, Pow) and q.denominator == 1:
        return power(base.base, base.exp * q)
    return Pow(base, q)


def exp(arg: Expr) -> Expr:
    return Exp(arg)


def sqrt(e: Expr) -> Expr:
    return power(e, Fraction(1, 2))


# partial differentiation -----------------------------------------------------

def diff(e: Expr, s: Expr) -> Expr:
    """Partial derivative by the tree rules; c-derivatives respond to x."""
    if not isinstance(s, (Sym, Jet, CFun)):
        raise TypeError("can only differentiate with respect to a symbol")
    return _diff(e, s)


def _diff(e: Expr, s: Expr) -> Expr:
    if isinstance(e, Const):
        return ZERO_E
    if isinstance(e, (Sym, Jet)):
        return ONE_E if e == s else ZERO_E
    if isinstance(e, CFun):
        if e == s:
            return ONE_E
        return CFun(e.d + 1) if s == X else ZERO_E
    if isinstance(e, Add):
        return add(*(_diff(a, s) for a in e.args))
    if isinstance(e, Mul):
        terms = []
        for i, a in enumerate(e.args):
            da = _diff(a, s)
            if da != ZERO_E:
                terms.append(mul(*e.args[:i], da, *e.args[i + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        db = _diff(e.base, s)
        if db == ZERO_E:
            return ZERO_E
        return mul(Const(e.exp), power(e.base, e.exp - 1), db)
    if isinstance(e, Exp):
        da = _diff(e.arg, s)
        if da == ZERO_E:
            return ZERO_E
        return mul(e, da)
    raise TypeError(f"unknown node {e!r}")


def atoms(e: Expr) -> set:
    """Symbols, jets and c-derivatives occurring in ``e``."""
    if isinstance(e, (Sym, Jet, CFun)):
        return {e}
    if isinstance(e, (Add, Mul)):
        out = set()
        for a in e.args:
            out |= atoms(a)
        return out
    if isinstance(e, Pow):
        return atoms(e.base)
    if isinstance(e, Exp):
        return atoms(e.arg)
    return set()


def subs(e: Expr, mapping: Mapping[Expr, Expr]) -> Expr:
    """Structural substitution of atoms."""
    if e in mapping:
        return mapping[e]
    if isinstance(e, Add):
        return add(*(subs(a, mapping) for a in e.args))
    if isinstance(e, Mul):
        return mul(*(subs(a, mapping) for a in e.args))
    if isinstance(e, Pow):
        return power(subs(e.base, mapping), e.exp)
    if isinstance(e, Exp):
        return Exp(subs(e.arg, mapping))
    return e


def substitute_c(e: Expr, c_expr: Expr, max_order: int = 16) -> Expr:
    """Replace c(x) and its derivatives by a concrete expression in x."""
    orders = [a.d for a in atoms(e) if isinstance(a, CFun)]
    if not orders:
        return e
    top = max(orders)
    if top > max_order:
        raise UnsupportedExpression(f"c-derivative of order {top} exceeds cap {max_order}")
    tower = [c_expr]
    for _ in range(top):
        tower.append(simplify(diff(tower[-1], X)))
    return subs(e, {CFun(d): tower[d] for d in range(top + 1)})


# canonical form ------------------------------------------------------------

def var_name(a: Expr) -> str:
    if isinstance(a, Sym):
        return a.name
    if isinstance(a, Jet):
        return jet(a.dep, a.k)
    if isinstance(a, CFun):
        return jet("c", a.d)
    raise TypeError(f"{a!r} is not an atom")


def atom_from_name(name: str) -> Expr:
    if name.startswith("exp(") and name.endswith(")"):
        return Exp(Sym(name[4:-1]))
    pj = parse_jet(name)
    if pj is not None:
        dep, k = pj
        return CFun(k) if dep == "c" else Jet(dep, k)
    return Sym(name)


class Canon:
    """``r0 + r1*sqrt(base)`` with reduced rational-function parts."""

    __slots__ = ("r0", "r1", "base")

    def __init__(self, r0: Frac, r1: Optional[Frac] = None, base: Optional[Poly] = None):
        if r1 is not None and r1.is_zero():
            r1 = None
        if r1 is None:
            base = None
        self.r0 = r0
        self.r1 = r1
        self.base = base

    @classmethod
    def rational(cls, q) -> "Canon":
        return cls(_fcoerce(q))

    def _base_with(self, other: "Canon") -> Optional[Poly]:
        if self.base is not None and other.base is not None and self.base != other.base:
            raise UnsupportedExpression("more than one independent square root")
        return self.base if self.base is not None else other.base

    def __add__(self, other: "Canon") -> "Canon":
        base = self._base_with(other)
        r1 = _addopt(self.r1, other.r1)
        return Canon(self.r0 + other.r0, r1, base)

    def __neg__(self) -> "Canon":
        return Canon(-self.r0, None if self.r1 is None else -self.r1, self.base)

    def __sub__(self, other: "Canon") -> "Canon":
        return self + (-other)

    def __mul__(self, other: "Canon") -> "Canon":
        base = self._base_with(other)
        r0 = self.r0 * other.r0
        if self.r1 is not None and other.r1 is not None:
            r0 = r0 + self.r1 * other.r1 * base
        r1 = _addopt(None if self.r1 is None else self.r1 * other.r0,
                     None if other.r1 is None else self.r0 * other.r1)
        return Canon(r0, r1, base)

    def inverse(self) -> "Canon":
        if self.r1 is None:
            return Canon(self.r0.inverse())
        norm = self.r0 * self.r0 - self.r1 * self.r1 * self.base
        if norm.is_zero():
            raise UnsupportedExpression("cannot invert a radical expression with zero norm")
        inv = norm.inverse()
        return Canon(self.r0 * inv, -self.r1 * inv, self.base)

    def __pow__(self, n: int) -> "Canon":
        if n < 0:
            return self.inverse() ** (-n)
        out = Canon.rational(1)
        b = self
        while n:
            if n & 1:
                out = out * b
            n >>= 1
            if n:
                b = b * b
        return out

    def derive(self, rule) -> "Canon":
        d0 = derive_frac(self.r0, rule)
        if self.r1 is None:
            return Canon(d0)
        db = derive_frac(Frac(self.base, ONE, reduced=True), rule)
        d1 = derive_frac(self.r1, rule) + self.r1 * db / (2 * Frac(self.base, ONE, reduced=True))
        return Canon(d0, d1, self.base)

    def is_rational(self) -> bool:
        return self.r1 is None

    def is_zero(self) -> bool:
        if self.r1 is None:
            return self.r0.is_zero()
        if self.r0.is_zero():
            return False
        if not (self.r0 * self.r0 - self.r1 * self.r1 * self.base).is_zero():
            return False
        raise UnsupportedExpression("radicand is a perfect square; sign of the root is undecidable")

    def variables(self) -> set:
        out = self.r0.variables()
        if self.r1 is not None:
            out |= self.r1.variables() | self.base.variables()
        return out

    def __repr__(self):
        if self.r1 is None:
            return f"Canon({self.r0})"
        return f"Canon({self.r0} + ({self.r1})*sqrt({self.base}))"


def _addopt(a: Optional[Frac], b: Optional[Frac]) -> Optional[Frac]:
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _canon_exp(arg: Expr, positive) -> Canon:
    c = to_canon(arg, positive)
    if not c.is_rational() or not c.r0.is_polynomial():
        raise UnsupportedExpression("exp argument must be linear in x and v")
    num = c.r0.num.scale(1 / c.r0.den.constant_value())
    mono = []
    for m, coeff in num.terms.items():
        if len(m) != 1 or m[0][1] != 1 or m[0][0] not in ("x", "v"):
            raise UnsupportedExpression(f"exp argument must be a rational multiple of x or v, got {arg}")
        mono.append((f"exp({m[0][0]})", coeff))
    mono = tuple(sorted((v, int(e) if e.denominator == 1 else e) for v, e in mono))
    return Canon(Frac(Poly.monomial(mono), ONE, reduced=True))


def to_canon(e: Expr, positive: Iterable[Expr] = ()) -> Canon:
    """Canonical form; half-integer powers need their base listed in ``positive``."""
    positive = tuple(positive)
    if isinstance(e, Const):
        return Canon.rational(e.value)
    if isinstance(e, (Sym, Jet, CFun)):
        return Canon(Frac.var(var_name(e)))
    if isinstance(e, Add):
        out = Canon.rational(0)
        for a in e.args:
            out = out + to_canon(a, positive)
        return out
    if isinstance(e, Mul):
        out = Canon.rational(1)
        for a in e.args:
            out = out * to_canon(a, positive)
        return out
    if isinstance(e, Pow):
        b = to_canon(e.base, positive)
        q = e.exp
        if q.denominator == 1:
            return b ** int(q)
        if q.denominator != 2:
            raise UnsupportedExpression(f"only half-integer powers are supported, got {q}")
        if not _registered(e.base, b, positive):
            raise UnsupportedExpression(f"square root of {e.base} requires a positivity assumption")
        r = b.r0
        radicand = r.num * r.den
        j = (q.numerator - 1) // 2
        r1 = (r ** j) * Frac(ONE, r.den)
        return Canon(Frac.const(0), r1, radicand)
    if isinstance(e, Exp):
        return _canon_exp(e.arg, positive)
    raise TypeError(f"unknown node {e!r}")


def _registered(base: Expr, canon: Canon, positive) -> bool:
    if not canon.is_rational():
        return False
    for p in positive:
        if p == base:
            return True
        pc = to_canon(p)
        if pc.is_rational() and pc.r0 == canon.r0:
            return True
    return False


def poly_to_expr(p: Poly) -> Expr:
    terms = []
    for m, c in sorted(p.terms.items(), key=lambda t: _term_key(t[0])):
        factors = [Const(c)] if c != 1 else []
        for v, k in m:
            factors.append(power(atom_from_name(v), k))
        terms.append(mul(*factors))
    return add(*terms)


def _term_key(m):
    from .poly import mono_degree, lex_key
    return (-mono_degree(m), lex_key(m))


def frac_to_expr(q: Frac) -> Expr:
    num = poly_to_expr(q.num)
    if q.den == ONE:
        return num
    return mul(num, power(poly_to_expr(q.den), -1))


def from_canon(c: Canon) -> Expr:
    r0 = frac_to_expr(c.r0) if not c.r0.is_zero() else ZERO_E
    if c.r1 is None:
        return r0
    return add(r0, mul(frac_to_expr(c.r1), sqrt(poly_to_expr(c.base))))


def simplify(e: Expr, positive: Iterable[Expr] = ()) -> Expr:
    positive = tuple(positive)
    return from_canon(to_canon(e, positive))


def is_zero(e: Expr, positive: Iterable[Expr] = ()) -> bool:
    """Decide ``e == 0`` identically on the supported class.

    Raises :class:`UnsupportedExpression` when ``e`` falls outside it.
    """
    return to_canon(e, positive).is_zero()


def equal(a: Expr, b: Expr, positive: Iterable[Expr] = ()) -> bool:
    return is_zero(add(a, neg(b)), positive)


def covering_total_derivative(e: Expr, f: Expr, positive: Iterable[Expr] = ()) -> Expr:
    """D_x on the covering system: ``dv/dx = f`` and ``d u_k/dx = u_{k+1}``."""
    positive = tuple(positive)
    flux = to_canon(f, positive)
    if not flux.is_rational():
        raise UnsupportedExpression("flux must be a rational function")
    return from_canon(to_canon(e, positive).derive(covering_rule(flux.r0)))


def canon_partial(c: Canon, symbol: Expr) -> Canon:
    return c.derive(partial_rule(var_name(symbol)))


def evaluate(e: Expr, env: Mapping[Union[str, Expr], object]):
    """Numerical or exact evaluation; ``env`` maps atoms (or their names) to values."""
    import math

    def look(a):
        if a in env:
            return env[a]
        return env[var_name(a)]

    def ev(n):
        if isinstance(n, Const):
            return n.value
        if isinstance(n, (Sym, Jet, CFun)):
            return look(n)
        if isinstance(n, Add):
            return sum((ev(a) for a in n.args), 0)
        if isinstance(n, Mul):
            out = 1
            for a in n.args:
                out = out * ev(a)
            return out
        if isinstance(n, Pow):
            b = ev(n.base)
            if n.exp.denominator == 1:
                return b ** int(n.exp)
            return float(b) ** float(n.exp)
        if isinstance(n, Exp):
            return math.exp(float(ev(n.arg)))
        raise TypeError(f"unknown node {n!r}")

    return ev(e)


__all__ = [
    "Expr", "Const", "Sym", "Jet", "CFun", "Add", "Mul", "Pow", "Exp",
    "X", "V", "U", "C0", "ZERO_E", "ONE_E", "as_expr", "const", "ujet",
    "add", "mul", "neg", "power", "exp", "sqrt", "diff", "atoms", "subs",
    "substitute_c", "Canon", "to_canon", "from_canon", "simplify", "is_zero",
    "equal", "covering_total_derivative", "canon_partial", "evaluate",
    "poly_to_expr", "frac_to_expr", "var_name", "atom_from_name",
    "UnsupportedExpression", "is_unit_var", "ONE_MONO",
]
