from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import rationals
from pointjets.parsing import (DegenerateDenominatorError, NegativeExponentError, ParseError,
                               UnknownIdentifierError, parse_expression)
from pointjets.symexpr import RationalExpr, symbols

x, y = RationalExpr.symbol(symbols.var("x")), RationalExpr.symbol(symbols.var("y"))
SURFACE = [symbols.var("x"), symbols.var("yt"), symbols.jet(1, False), symbols.jet(2),
           symbols.phi("x", 0, 1), symbols.coeff("B"), symbols.coeff("X", True)]


def _jet(k):
    return RationalExpr.symbol(symbols.jet(k, False))


def test_b_term_shape():
    Y, X = RationalExpr.symbol(symbols.coeff("Y")), RationalExpr.symbol(symbols.coeff("X"))
    e = parse_expression("y2^2/(Y - X*y1)")
    assert e == _jet(2) ** 2 / (Y - X * _jet(1))
    assert e.num.total_degree() == 2 and len(e.num.terms) == 1


def test_expanded_square():
    assert parse_expression("3*(x+y)^2") == 3 * x ** 2 + 6 * x * y + 3 * y ** 2


def test_degenerate_denominator():
    with pytest.raises(DegenerateDenominatorError):
        parse_expression("1/(x-x)")


def test_precedence_and_associativity():
    assert parse_expression("-x^2") == -(x ** 2)
    assert parse_expression("8-3-2") == 3
    assert parse_expression("x/3/y") == x / (3 * y)
    assert parse_expression("1 + 2*x^2") == 1 + 2 * x ** 2
    assert parse_expression("(2^3)^2") == 64
    assert parse_expression("3/4") == Fraction(3, 4)


@pytest.mark.parametrize(("text", "cls", "line", "column"), [
    ("x^-1", NegativeExponentError, 1, 3),
    ("foo+1", UnknownIdentifierError, 1, 1),
    ("x +\n (y", ParseError, 2, 4),
    ("x**2", ParseError, 1, 3),
    ("2^3^2", ParseError, 1, 4),
    ("x^y", ParseError, 1, 3),
])
def test_errors_carry_position(text, cls, line, column):
    with pytest.raises(cls) as info:
        parse_expression(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert f"line {line}, column {column}" in str(info.value)


def test_composed_names():
    e = parse_expression("B_o*x_o + yt2*x10")
    assert symbols.coeff("B", True) in e.variables()
    assert symbols.phi("x", 1, 0) in e.variables()


@settings(max_examples=200, deadline=None)
@given(rationals(SURFACE, max_terms=3))
def test_round_trip(e):
    text = str(e)
    again = parse_expression(text)
    assert again == e
    assert str(again) == text
