"""Text syntax for polynomials and rational functions.

Grammar (standard precedence, ``^`` binds tightest and takes a signed
integer exponent; juxtaposition such as ``2X`` means multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | VAR | '(' expr ')'

Variables are ``X1..Xd``; for d <= 3 the aliases ``X, Y, Z`` also work.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .fields import CoefficientField
from .laurent import LaurentPoly
from .rational import RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")
_ALIASES = {"X": 0, "Y": 1, "Z": 2}


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize near {text[pos:]!r}")
        num, ident, sym = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif ident is not None:
            out.append(("var", ident))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}")
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, field, nvars):
        self.tokens = _tokenize(text)
        self.i = 0
        self.field = field
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val = self.take()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}, got {val!r}")

    def var_index(self, name):
        if name in _ALIASES and self.nvars <= 3:
            idx = _ALIASES[name]
        else:
            m = re.fullmatch(r"X(\d+)", name)
            if not m:
                raise ParseError(f"unknown variable {name!r}")
            idx = int(m.group(1)) - 1
        if not 0 <= idx < self.nvars:
            raise ParseError(f"variable {name!r} out of range for {self.nvars} variables")
        return idx

    def parse(self) -> RationalFunction:
        if not self.tokens:
            raise ParseError("empty expression")
        r = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return r

    def expr(self):
        r = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            _, op = self.take()
            rhs = self.term()
            r = r + rhs if op == "+" else r - rhs
        return r

    def starts_factor(self):
        kind, val = self.peek()
        return kind in ("int", "var") or (kind == "sym" and val == "(")

    def term(self):
        r = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "sym" and val in "*/":
                self.take()
                rhs = self.unary()
                r = r * rhs if val == "*" else r / rhs
            elif self.starts_factor():
                r = r * self.unary()
            else:
                return r

    def unary(self):
        kind, val = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            r = self.unary()
            return -r if val == "-" else r
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            sign = 1
            if self.peek() == ("sym", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer")
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return RationalFunction.constant(self.field, self.nvars, val)
        if kind == "var":
            return RationalFunction.variable(self.field, self.nvars, self.var_index(val))
        if kind == "sym" and val == "(":
            r = self.expr()
            self.expect(")")
            return r
        raise ParseError(f"unexpected token {val!r}")


def parse_rational(text: str, field: CoefficientField, nvars: int) -> RationalFunction:
    return _Parser(str(text), field, nvars).parse()


def parse_laurent(text: str, field: CoefficientField, nvars: int) -> LaurentPoly:
    r = parse_rational(text, field, nvars)
    if not r.is_laurent():
        raise ParseError(f"{text!r} is not a Laurent polynomial")
    return r.num
