"""Recursive-descent parser for scalar expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := base ('^' exponent)?
    base   := integer | variable | func '(' expr ')' | '(' expr ')'

Rationals are written ``int/int``; exponents are integers, optionally signed
or parenthesised.
"""
import re

from ..errors import ParseError
from .expr import FUNCTIONS
from .scalar import Scalar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        kind = ("int", "name", "op")[m.lastindex - 1]
        value = m.group(m.lastindex)
        if value == "**":
            value = "^"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables=None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = None if variables is None else tuple(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {value!r}, found {found}", tok[2], self.text)
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
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
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op, _, pos = self.take()[1], None, self.tokens[self.i - 1][2]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_exact and rhs.is_zero():
                    raise ParseError("division by zero", pos, self.text)
                value = value / rhs
        return value

    def factor(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return -self.factor()
        if self.peek()[1] == "+" and self.peek()[0] == "op":
            self.take()
            return self.factor()
        return self.power()

    def exponent(self):
        tok = self.peek()
        if tok[1] == "(":
            self.take()
            n = self.exponent()
            self.expect(")")
            return n
        sign = 1
        if tok[1] in ("-", "+"):
            self.take()
            sign = -1 if tok[1] == "-" else 1
            tok = self.peek()
        if tok[0] != "int":
            raise ParseError("exponent must be an integer", tok[2], self.text)
        self.take()
        return sign * int(tok[1])

    def power(self):
        base = self.base()
        if self.peek()[1] == "^":
            pos = self.take()[2]
            n = self.exponent()
            if n < 0 and base.is_exact and base.is_zero():
                raise ParseError("division by zero", pos, self.text)
            return base ** n
        return base

    def base(self):
        kind, value, pos = self.take()
        if kind == "int":
            return Scalar.const(int(value))
        if kind == "name":
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return arg.apply(value)
            if self.peek()[1] == "(":
                raise ParseError(f"unknown function {value!r}", pos, self.text)
            if self.variables is not None and value not in self.variables:
                raise ParseError(f"unknown variable {value!r}", pos, self.text)
            if self.variables is not None:
                return Scalar.var(value, self.variables)
            return Scalar.var(value)
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", pos, self.text)


def parse(text, variables=None):
    """Parse ``text`` into a Scalar.

    If ``variables`` is given, only those names are accepted and exact results
    live in the field on exactly those variables.
    """
    if isinstance(text, (int,)):
        return Scalar.const(text)
    value = _Parser(str(text), variables).parse()
    if variables is not None and value.is_exact:
        value = value.over(tuple(variables))
    return value
