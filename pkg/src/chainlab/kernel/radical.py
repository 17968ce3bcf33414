"""Values of the form ``P * B**(-h/2)`` with polynomial ``P`` and ``B``.

This class is closed under x-differentiation, products and sums with a
common half-power parity, which is all the closed-form chain solutions need:
``Q'/Q`` is ``Q' * Q**(-2/2)`` and ``P/sqrt(S)`` is ``P * S**(-1/2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .poly import ONE, Poly, UnsupportedExpression


@dataclass(frozen=True)
class PowerForm:
    num: Poly
    base: Poly
    h: int
    var: str = "x"
    # optional derivation replacing d/d(var), e.g. a total derivative on jets
    derivation: Optional[Callable[[Poly], Poly]] = field(default=None, compare=False)

    def _d(self, p: Poly) -> Poly:
        return self.derivation(p) if self.derivation else p.diff(self.var)

    def _new(self, num: Poly, h: int) -> "PowerForm":
        return PowerForm(num, self.base, h, self.var, self.derivation)

    def derivative(self) -> "PowerForm":
        dn = self._d(self.num)
        if self.h == 0:
            return self._new(dn, 0)
        db = self._d(self.base)
        num = dn * self.base - (self.num * db).scale(Fraction(self.h, 2))
        return self._new(num, self.h + 2)

    def lift(self, h: int) -> "PowerForm":
        """Same value written with the larger exponent ``h`` (same parity)."""
        if h < self.h or (h - self.h) % 2:
            raise ValueError("can only lift by an even, non-negative amount")
        return self._new(self.num * self.base ** ((h - self.h) // 2), h)

    def __mul__(self, other: "PowerForm") -> "PowerForm":
        self._check(other)
        return self._new(self.num * other.num, self.h + other.h)

    def __pow__(self, n: int) -> "PowerForm":
        if n < 0:
            raise ValueError("negative powers are not closed in this class")
        return self._new(self.num ** n, self.h * n)

    def __add__(self, other: "PowerForm") -> "PowerForm":
        self._check(other)
        if (self.h - other.h) % 2:
            raise UnsupportedExpression("sum of integer and half-integer powers")
        h = max(self.h, other.h)
        return self._new(self.lift(h).num + other.lift(h).num, h)

    def scale(self, k) -> "PowerForm":
        return self._new(self.num.scale(k), self.h)

    def _check(self, other: "PowerForm") -> None:
        if self.base != other.base or self.var != other.var:
            raise UnsupportedExpression("PowerForm operands must share the base")

    @classmethod
    def constant(cls, c, base: Poly, var: str = "x") -> "PowerForm":
        return cls(Poly.const(c), base, 0, var)

    def tower(self, n: int) -> list:
        """``[self, self', ..., self^(n)]``."""
        out = [self]
        for _ in range(n):
            out.append(out[-1].derivative())
        return out


def substitute_jets(p: Poly, tower, dep: str = "u") -> PowerForm:
    """Evaluate a differential polynomial at ``dep_k -> tower[k]``."""
    from .jets import jet_exponents
    first = tower[0]
    total = None
    for m, c in p.terms.items():
        exps = jet_exponents(m, dep)
        if len(exps) != len(m):
            raise UnsupportedExpression("non-jet variable in differential polynomial")
        t = first._new(Poly.const(c), 0)
        for k, e in exps.items():
            t = t * tower[k] ** e
        total = t if total is None else total + t
    if total is None:
        return first._new(Poly(), 0)
    return total


__all__ = ["PowerForm", "substitute_jets", "ONE"]
