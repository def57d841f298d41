"""Exact multivariate polynomial and rational-function kernel."""

from . import symbols
from .errors import (DegenerateSubstitutionError, DomainError, NotDivisibleError,
                     NotPolynomialError, SymExprError, UnsupportedPoleError)
from .gcd import gcd, gcd_list, lcm, normalize
from .polynomial import ONE, ZERO, Polynomial, divexact, mono_key, mono_str
from .rational import (RationalExpr, add, collect, div, mul, neg,
                       residue_simple_pole, sub, substitute)
from .symbols import Symbol, SymbolKind


def sym(sid: int) -> RationalExpr:
    return RationalExpr.symbol(sid)


def var(name: str) -> RationalExpr:
    return RationalExpr.symbol(symbols.var(name))


def const(value) -> RationalExpr:
    return RationalExpr.coerce(value)


__all__ = [
    "DegenerateSubstitutionError", "DomainError", "NotDivisibleError",
    "NotPolynomialError", "ONE", "Polynomial", "RationalExpr", "Symbol",
    "SymbolKind", "SymExprError", "UnsupportedPoleError", "ZERO", "add",
    "collect", "const", "div", "divexact", "gcd", "gcd_list", "lcm",
    "mono_key", "mono_str", "mul", "neg", "normalize", "residue_simple_pole",
    "sub", "substitute", "sym", "symbols", "var",
]
