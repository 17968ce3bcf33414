"""Recursive-descent parser and text emitter for kernel expressions.

Grammar (LL(1), whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := INT | IDENT | 'exp' '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus and is right-associative; its operand
must fold to a rational constant.  Only ``x`` is a known identifier unless a
symbol table is supplied.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .kernel.expr import (Add, CFun, Const, Exp, Expr, Jet, Mul, Pow, Sym, X, V,
                          add, mul, neg, power)


class ExpressionSyntaxError(SyntaxError):
    """Parse failure with the byte offset and the set of tokens that would fit."""

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset_bytes = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        detail = f"{message} at offset {offset}" + (f" (expected one of: {exp})" if exp else "")
        super().__init__(detail)


_ATOM_START = {"INT", "IDENT", "(", "-"}
_PUNCT = set("+-*/^()")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    toks = []
    i = 0
    data = src
    while i < len(data):
        ch = data[i]
        off = len(data[:i].encode("utf-8"))
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(data) and data[j].isdigit():
                j += 1
            if j < len(data) and data[j] in ".eE" and (data[j] == "." or
                                                      (j + 1 < len(data) and data[j + 1].isdigit())):
                raise ExpressionSyntaxError("decimal literals are not allowed; write p/q",
                                            len(data[:j].encode("utf-8")), {"INT"})
            toks.append(("INT", data[i:j], off))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(data) and (data[j].isalnum() or data[j] == "_"):
                j += 1
            toks.append(("IDENT", data[i:j], off))
            i = j
        elif ch in _PUNCT:
            toks.append((ch, ch, off))
            i += 1
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", off,
                                        {"INT", "IDENT", *_PUNCT})
    toks.append(("EOF", "", len(data.encode("utf-8"))))
    return toks


class _Parser:
    def __init__(self, src: str, symbols: Mapping[str, Expr]):
        self.toks = _tokenize(src)
        self.pos = 0
        self.symbols = symbols

    @property
    def tok(self):
        return self.toks[self.pos]

    def advance(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, expected):
        raise ExpressionSyntaxError(message, self.tok[2], expected)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok[0] != "EOF":
            self.fail(f"unexpected token {self.tok[1]!r}", {"+", "-", "*", "/", "^", "EOF"})
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else add(e, neg(rhs))
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok[0] in ("*", "/"):
            op, _, off = self.advance()
            rhs = self.unary()
            if op == "*":
                e = mul(e, rhs)
            else:
                if rhs == Const(Fraction(0)):
                    raise ExpressionSyntaxError("division by zero", off, ())
                e = mul(e, power(rhs, -1))
        return e

    def unary(self) -> Expr:
        if self.tok[0] == "-":
            self.advance()
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok[0] == "^":
            self.advance()
            off = self.tok[2]
            expo = self.unary()
            if not isinstance(expo, Const):
                raise ExpressionSyntaxError("exponent must be a rational constant", off, {"INT"})
            if isinstance(base, Const) and base.value == 0 and expo.value < 0:
                raise ExpressionSyntaxError("zero to a negative power", off, ())
            return power(base, expo.value)
        return base

    def atom(self) -> Expr:
        kind, text, off = self.tok
        if kind == "INT":
            self.advance()
            return Const(Fraction(int(text)))
        if kind == "IDENT":
            self.advance()
            if text == "exp":
                if self.tok[0] != "(":
                    self.fail("expected '(' after exp", {"("})
                self.advance()
                arg = self.expr()
                if self.tok[0] != ")":
                    self.fail("expected ')'", {")", "+", "-", "*", "/", "^"})
                self.advance()
                return Exp(arg)
            if text in self.symbols:
                return self.symbols[text]
            raise ExpressionSyntaxError(f"unknown identifier {text!r}", off,
                                        set(self.symbols) | {"exp"})
        if kind == "(":
            self.advance()
            e = self.expr()
            if self.tok[0] != ")":
                self.fail("expected ')'", {")", "+", "-", "*", "/", "^"})
            self.advance()
            return e
        self.fail("expected an operand" if kind != "EOF" else "unexpected end of input",
                  {"INT", "IDENT", "(", "-"})


DEFAULT_SYMBOLS: Dict[str, Expr] = {"x": X}


def standard_symbols(params: Iterable[str] = (), max_jet: int = 16) -> Dict[str, Expr]:
    """Symbol table with x, v, u and its jets, c and its derivatives, and ``params``."""
    table: Dict[str, Expr] = {"x": X, "v": V, "u": Jet("u", 0), "c": CFun(0),
                              "zeta": Jet("z", 0)}
    for k in range(1, max_jet + 1):
        table[f"u_{k}"] = Jet("u", k)
        table[f"c_{k}"] = CFun(k)
        table[f"zeta_{k}"] = Jet("z", k)
    for p in params:
        table[p] = Sym(p)
    return table


def parse_expression(src: str, symbols: Optional[Mapping[str, Expr]] = None) -> Expr:
    """Parse ``src`` into an expression; raises :class:`ExpressionSyntaxError`."""
    return _Parser(src, DEFAULT_SYMBOLS if symbols is None else symbols).parse()


def parse_rational(text: str) -> Fraction:
    """Exact rational from ``"p"`` or ``"p/q"`` (decimals rejected)."""
    e = parse_expression(text.strip(), {})
    if not isinstance(e, Const):
        raise ExpressionSyntaxError("expected a rational constant", 0, {"INT"})
    return e.value


# emission ---------------------------------------------------------------------

def atom_text(e: Expr) -> str:
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Jet):
        name = "zeta" if e.dep == "z" else e.dep
        return name if e.k == 0 else f"{name}_{e.k}"
    if isinstance(e, CFun):
        return "c" if e.d == 0 else f"c_{e.d}"
    raise TypeError(e)


def _const_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _exp_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


def _pow_text(base: Expr, q: Fraction) -> str:
    if isinstance(base, (Sym, Jet, CFun, Exp)):
        b = _text(base)
    elif isinstance(base, Const) and base.value >= 0 and base.value.denominator == 1:
        b = _const_text(base.value)
    else:
        b = f"({_text(base)})"
    return f"{b}^{_exp_text(q)}"


def _factor_text(f: Expr) -> str:
    if isinstance(f, Add):
        return f"({_text(f)})"
    return _text(f)


def _mul_text(args) -> str:
    coeff = None
    factors = list(args)
    if factors and isinstance(factors[0], Const):
        coeff = factors.pop(0).value
    out = ""
    if coeff is not None:
        if coeff == -1:
            out = "-"
            if isinstance(factors[0], Pow) and factors[0].exp < 0:
                out = "-1"
        else:
            out = _const_text(coeff)
    first = True
    for f in factors:
        if isinstance(f, Pow) and f.exp < 0:
            if first and (coeff is None):
                out += "1"
            out += "/" + _pow_text(f.base, -f.exp) if f.exp != -1 else "/" + _factor_or_base(f.base)
        else:
            if out and out != "-":
                out += "*"
            out += _factor_text(f)
        first = False
    return out


def _factor_or_base(base: Expr) -> str:
    if isinstance(base, (Sym, Jet, CFun, Exp)):
        return _text(base)
    if isinstance(base, Const) and base.value >= 0 and base.value.denominator == 1:
        return _const_text(base.value)
    return f"({_text(base)})"


def _text(e: Expr) -> str:
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, (Sym, Jet, CFun)):
        return atom_text(e)
    if isinstance(e, Exp):
        return f"exp({_text(e.arg)})"
    if isinstance(e, Pow):
        return _pow_text(e.base, e.exp)
    if isinstance(e, Mul):
        return _mul_text(e.args)
    if isinstance(e, Add):
        parts = [_text(e.args[0])]
        for t in e.args[1:]:
            if isinstance(t, Const) and t.value < 0:
                parts.append(" - " + _const_text(-t.value))
            elif isinstance(t, Mul) and isinstance(t.args[0], Const) and t.args[0].value < 0:
                rest = (Const(-t.args[0].value),) + t.args[1:] if t.args[0].value != -1 else t.args[1:]
                parts.append(" - " + (_mul_text(rest) if len(rest) > 1 else _single(rest[0])))
            else:
                parts.append(" + " + _text(t))
        return "".join(parts)
    raise TypeError(f"unknown node {e!r}")


def _single(f: Expr) -> str:
    if isinstance(f, Pow) and f.exp < 0:
        return _mul_text((f,))
    return _factor_text(f)


def to_text(e: Expr) -> str:
    """Emit text that :func:`parse_expression` reads back to the same tree."""
    return _text(e)


__all__ = ["ExpressionSyntaxError", "parse_expression", "parse_rational",
           "standard_symbols", "to_text", "atom_text", "DEFAULT_SYMBOLS"]
