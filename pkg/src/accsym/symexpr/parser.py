"""Recursive-descent parser for the scalar expression DSL.

Grammar::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := atom ['^' integer] | '-' factor
    atom     := rational | ident | ident '(' expr ')' | '(' expr ')'
    rational := integer ['/' positive-integer]

Whitespace is ignored and implicit multiplication is rejected.  Offsets in
error messages are byte offsets into the UTF-8 encoded input.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..chart import FUNCTION_NAMES, Chart
from ..errors import ParseError
from .expr import Add, Const, Coord, Div, Expr, Func, IntPow, Mul, Neg

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<decimal>[0-9]*\.[0-9]+|[0-9]+\.)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    data = text.encode("utf-8")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), _byte(text, pos)))
        pos = m.end()
    tokens.append(("end", "", len(data)))
    return tokens


def _byte(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.tokens = _tokenize(text)
        self.i = 0
        self.chart = chart

    def peek(self, k: int = 0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, off = self.peek()
        if text != value or kind != "op":
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", off)
        return self.take()

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            if kind in ("int", "ident") or text == "(":
                raise ParseError("implicit multiplication is not allowed", off)
            raise ParseError(f"unexpected {text!r}", off)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, _ = self.take()
            t = self.term()
            terms.append(t if op == "+" else Neg(t))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, off = self.take()
            rhs = self.factor()
            if op == "*":
                factors.append(rhs)
                continue
            num = factors[0] if len(factors) == 1 else Mul(tuple(factors))
            if rhs.is_syntactic_zero():
                raise ParseError("division by literal zero", off)
            factors = [Div(num, rhs)]
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            return IntPow(base, self.exponent())
        return base

    def exponent(self) -> int:
        sign = 1
        kind, text, off = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            sign = -1 if text == "-" else 1
            kind, text, off = self.peek()
        if kind != "int":
            raise ParseError("non-integer exponent", off)
        self.take()
        return sign * int(text)

    def atom(self) -> Expr:
        kind, text, off = self.take()
        if kind == "int":
            value = Fraction(int(text))
            nk, nt, noff = self.peek()
            if nk == "op" and nt == "/" and self.peek(1)[0] == "int":
                self.take()
                _, dtext, doff = self.take()
                den = int(dtext)
                if den == 0:
                    raise ParseError("zero denominator in rational literal", doff)
                value = Fraction(int(text), den)
            return Const(value)
        if kind == "ident":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if text not in FUNCTION_NAMES:
                    raise ParseError(f"unknown function {text!r}", off)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Func(text, arg)
            if text in FUNCTION_NAMES:
                raise ParseError(f"function {text!r} needs an argument", off)
            if text not in self.chart.names:
                raise ParseError(f"unknown identifier {text!r}", off)
            return Coord(self.chart, self.chart.names.index(text))
        if kind == "op" and text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", off)
        if kind == "decimal":
            raise ParseError("decimal literals are not supported, write a rational a/b", off)
        raise ParseError(f"unexpected {text!r}", off)


def parse_expr(text: str, chart: Chart) -> Expr:
    """Parse ``text`` into a syntax tree over ``chart``."""
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    return _Parser(text, chart).parse()
