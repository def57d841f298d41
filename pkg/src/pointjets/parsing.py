"""Recursive-descent parser for the ASCII expression language.

Identifiers::

    x y xt yt            plain coordinates
    y1 y2 y3             y', y'', y''' in the original coordinates
    yt1 yt2 yt3          jets of the transformed curve
    x10 x01 ... y03      partials x_{i.j}, y_{i.j} of the inverse map (1 <= i+j <= 3)
    B P Q R S L K M N T X Y
                         opaque class coefficients; a ``_o`` suffix (and
                         ``x_o``, ``y_o``) marks composition with the map

Precedence, tightest first: ``^`` (nonnegative integer literal exponent),
unary minus, ``*`` ``/``, ``+`` ``-``; binary operators are left-associative.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from .symexpr import DomainError, RationalExpr, symbols


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.column = col


class UnknownIdentifierError(ParseError):
    pass


class NegativeExponentError(ParseError):
    pass


class DegenerateDenominatorError(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_PHI = re.compile(r"^([xy])(\d)(\d)$")
_JET = re.compile(r"^y(t?)([123])$")


def resolve_identifier(name: str, extra: Mapping[str, int] | None = None) -> int | None:
    if extra and name in extra:
        return extra[name]
    if name in ("x", "y", "xt", "yt"):
        return symbols.var(name)
    m = _JET.match(name)
    if m:
        return symbols.jet(int(m.group(2)), tilde=bool(m.group(1)))
    m = _PHI.match(name)
    if m:
        i, j = int(m.group(2)), int(m.group(3))
        if 1 <= i + j <= 3:
            return symbols.phi(m.group(1), i, j)
        return None
    if name in symbols.CLASS_COEFF_NAMES:
        return symbols.coeff(name)
    if name.endswith("_o"):
        base = name[:-2]
        if base in symbols.CLASS_COEFF_NAMES or base in ("x", "y"):
            return symbols.coeff(base, composed=True)
    return None


class _Parser:
    def __init__(self, text: str, extra: Mapping[str, int] | None):
        self.text = text
        self.extra = extra
        self.tokens: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("id", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
                self.tokens.append(("op", ch, m.start(3)))
        self.tokens.append(("end", "", len(text.rstrip())))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, pos: int, cls=ParseError):
        raise cls(message, self.text, pos)

    def parse(self) -> RationalExpr:
        if self.peek()[0] == "end":
            self.error("empty expression", 0)
        e = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            self.error(f"unexpected {val!r}", pos)
        return e

    def sum(self) -> RationalExpr:
        e = self.product()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, _ = self.take()
            rhs = self.product()
            e = e + rhs if op == "+" else e - rhs
        return e

    def product(self) -> RationalExpr:
        e = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    self.error("denominator is identically zero", pos, DegenerateDenominatorError)
                try:
                    e = e / rhs
                except DomainError:
                    self.error("denominator is identically zero", pos, DegenerateDenominatorError)
        return e

    def unary(self) -> RationalExpr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> RationalExpr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind == "op" and val == "-":
                self.error("negative exponent", pos, NegativeExponentError)
            if kind != "num":
                self.error("exponent must be a nonnegative integer literal", pos)
            if self.peek()[:2] == ("op", "^"):
                self.error("chained exponents need parentheses", self.peek()[2])
            return base ** int(val)
        return base

    def atom(self) -> RationalExpr:
        kind, val, pos = self.take()
        if kind == "num":
            return RationalExpr(int(val))
        if kind == "id":
            sid = resolve_identifier(val, self.extra)
            if sid is None:
                self.error(f"unknown identifier {val!r}", pos, UnknownIdentifierError)
            return RationalExpr.symbol(sid)
        if kind == "op" and val == "(":
            e = self.sum()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                self.error("expected ')'", p2)
            return e
        if kind == "end":
            self.error("unexpected end of input", pos)
        self.error(f"unexpected {val!r}", pos)


def parse_expression(text: str, variables: Iterable[str] | Mapping[str, int] | None = None) -> RationalExpr:
    """Parse ``text`` into a canonical expression.

    ``variables`` admits extra plain variable names beyond the fixed grammar.
    """
    extra: dict[str, int] | None = None
    if variables is not None:
        if isinstance(variables, Mapping):
            extra = dict(variables)
        else:
            extra = {name: symbols.var(name) for name in variables}
    return _Parser(text, extra).parse()
