"""Exceptions raised by the expression kernel."""


class SymExprError(Exception):
    """Base class for kernel errors."""


class DomainError(SymExprError, ZeroDivisionError):
    """Division by the zero expression."""


class NotDivisibleError(SymExprError):
    """Exact polynomial division left a remainder."""


class DegenerateSubstitutionError(SymExprError):
    """A denominator vanished identically after substitution."""


class NotPolynomialError(SymExprError):
    """Collection variables occur in the denominator."""


class UnsupportedPoleError(SymExprError):
    """The denominator is not of degree one in the pole variable."""
