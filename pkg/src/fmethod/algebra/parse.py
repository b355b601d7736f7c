"""Tiny recursive-descent parser for ring expressions.

Grammar (``^`` binds tighter than unary minus, products keep their order so
the same parser serves noncommutative rings)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | power
    power  := atom ("^" INT)?
    atom   := NUMBER ("/" NUMBER)? | NAME | "(" expr ")"
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class ExprParser:
    """``atom(name, pos)`` builds ring elements for names, ``const(q)`` for numbers."""

    def __init__(self, text, atom, const):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.atom = atom
        self.const = const

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return -self.factor()
        return self.power()

    def power(self):
        base = self.atom_()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer", pos)
            return base ** int(val)
        return base

    def atom_(self):
        kind, val, pos = self.take()
        if kind == "num":
            q = Fraction(int(val))
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    raise ParseError("expected denominator", p2)
                if int(v2) == 0:
                    raise ParseError("zero denominator", p2)
                q = q / int(v2)
            return self.const(q)
        if kind == "name":
            return self.atom(val, pos)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_polynomial(text, vars):
    from .mpoly import MPoly
    vars = tuple(vars)

    def atom(name, pos):
        if name not in vars:
            raise ParseError(f"unknown symbol {name!r}", pos)
        return MPoly.var(name, vars)

    return ExprParser(text, atom, lambda q: MPoly.const(q, vars)).parse()
