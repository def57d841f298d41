"""Reduced fractions of polynomials, the carrier of every formula."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from . import symbols as _sym
from .errors import (DegenerateSubstitutionError, DomainError,
                     NotPolynomialError, UnsupportedPoleError)
from .gcd import cancel, gcd
from .polynomial import ONE, ZERO, Coeff, Monomial, Polynomial, as_coeff, divexact
from .printing import rational_str

Scalar = Union[int, Fraction]


class RationalExpr:
    """``num/den`` with gcd(num, den) = 1 and a normalized denominator.

    The denominator has coprime integer coefficients and a positive leading
    coefficient, so two equal rational functions have identical fields and
    equality is structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial | Scalar = 0, den: Polynomial | Scalar = 1):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise DomainError("zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        elif den.is_constant():
            c = den.constant_value()
            if c != 1:
                num = num.scale(Fraction(1) / c)
            den = ONE
        else:
            num, den = cancel(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _canonical(cls, num: Polynomial, den: Polynomial) -> "RationalExpr":
        e = cls.__new__(cls)
        e.num = num
        e.den = den
        e._hash = None
        return e

    @classmethod
    def symbol(cls, sid: int) -> "RationalExpr":
        return cls._canonical(Polynomial.symbol(sid), ONE)

    @classmethod
    def coerce(cls, value) -> "RationalExpr":
        if isinstance(value, RationalExpr):
            return value
        if isinstance(value, Polynomial):
            return cls._canonical(value, ONE)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls._canonical(Polynomial.constant(value), ONE)
        raise TypeError(f"cannot convert {value!r} to RationalExpr")

    # -- inspection --
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    def free_of(self, sids: Iterable[int]) -> bool:
        return not (self.variables() & frozenset(sids))

    # -- arithmetic --
    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalExpr):
            try:
                other = RationalExpr.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other) -> "RationalExpr":
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalExpr":
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return add(self, neg(other))

    def __rsub__(self, other) -> "RationalExpr":
        return add(neg(self), RationalExpr.coerce(other))

    def __neg__(self) -> "RationalExpr":
        return neg(self)

    def __mul__(self, other) -> "RationalExpr":
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalExpr":
        try:
            other = RationalExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other) -> "RationalExpr":
        return div(RationalExpr.coerce(other), self)

    def __pow__(self, n: int) -> "RationalExpr":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return div(RationalExpr.coerce(1), self) ** (-n)
        return RationalExpr._canonical(self.num ** n, self.den ** n)

    # -- calculus and structure --
    def diff(self, sid: int) -> "RationalExpr":
        n, d = self.num, self.den
        if d.is_constant():
            return RationalExpr._canonical(n.diff(sid), ONE)
        return RationalExpr(n.diff(sid) * d - n * d.diff(sid), d * d)

    def degree(self, sid: int) -> tuple[int, int]:
        """(numerator degree, denominator degree) in one symbol."""
        return self.num.degree(sid), self.den.degree(sid)

    def substitute(self, bindings: Mapping[int, "RationalExpr"]) -> "RationalExpr":
        return substitute(self, bindings)

    def evaluate(self, values: Mapping[int, Scalar]) -> "RationalExpr":
        """Bind some symbols to rational numbers."""
        vals = {s: as_coeff(v) for s, v in values.items()}
        d = self.den.evaluate(vals)
        if d.is_zero():
            raise DomainError(f"denominator of {self} vanishes at the given values")
        return RationalExpr(self.num.evaluate(vals), d)

    def value(self, values: Mapping[int, Scalar]) -> Fraction:
        """Exact number after binding every symbol."""
        e = self.evaluate(values)
        if not e.is_constant():
            left = ", ".join(_sym.symbol(s).text for s in e.variables())
            raise ValueError(f"unbound symbols: {left}")
        return Fraction(e.constant_value())

    def rename(self, mapping: Mapping[int, int]) -> "RationalExpr":
        return RationalExpr(self.num.rename(mapping), self.den.rename(mapping))

    def __repr__(self) -> str:
        return f"RationalExpr({self})"

    def __str__(self) -> str:
        return rational_str(self.num, self.den)


def _rx(x) -> RationalExpr:
    return RationalExpr.coerce(x)


def neg(a: RationalExpr) -> RationalExpr:
    return RationalExpr._canonical(-a.num, a.den)


def add(a: RationalExpr, b: RationalExpr) -> RationalExpr:
    a, b = _rx(a), _rx(b)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.den == b.den:
        if a.den.is_constant():
            return RationalExpr._canonical(a.num + b.num, ONE)
        return RationalExpr(a.num + b.num, a.den)
    if a.den.is_constant():
        return RationalExpr._canonical(a.num * b.den + b.num, b.den)
    if b.den.is_constant():
        return RationalExpr._canonical(a.num + b.num * a.den, a.den)
    g = gcd(a.den, b.den)
    if g.is_constant():
        # sum of reduced fractions with coprime denominators stays reduced
        num = a.num * b.den + b.num * a.den
        den = a.den * b.den
        return RationalExpr(num, den) if num.is_zero() else _normalize_unit(num, den)
    ad, bd = divexact(a.den, g), divexact(b.den, g)
    num = a.num * bd + b.num * ad
    if num.is_zero():
        return RationalExpr(0)
    # common factors of num and ad*bd*g can only come from g
    h = gcd(num, g)
    if not h.is_constant():
        num = divexact(num, h)
        g = divexact(g, h)
    return _normalize_unit(num, ad * bd * g)


def _normalize_unit(num: Polynomial, den: Polynomial) -> RationalExpr:
    c = den.rational_content()
    if den.leading_coeff() < 0:
        c = -c
    if c != 1:
        inv = Fraction(1) / c
        num, den = num.scale(inv), den.scale(inv)
    if den.is_constant():
        return RationalExpr._canonical(num.scale(Fraction(1) / den.constant_value()), ONE)
    return RationalExpr._canonical(num, den)


def sub(a: RationalExpr, b: RationalExpr) -> RationalExpr:
    return add(_rx(a), neg(_rx(b)))


def mul(a: RationalExpr, b: RationalExpr) -> RationalExpr:
    a, b = _rx(a), _rx(b)
    if a.is_zero() or b.is_zero():
        return RationalExpr(0)
    an, ad, bn, bd = a.num, a.den, b.num, b.den
    if not bd.is_constant():
        g = gcd(an, bd)
        if not g.is_constant():
            an, bd = divexact(an, g), divexact(bd, g)
    if not ad.is_constant():
        g = gcd(bn, ad)
        if not g.is_constant():
            bn, ad = divexact(bn, g), divexact(ad, g)
    return _normalize_unit(an * bn, ad * bd)


def div(a: RationalExpr, b: RationalExpr) -> RationalExpr:
    a, b = _rx(a), _rx(b)
    if b.is_zero():
        raise DomainError("division by the zero expression")
    return mul(a, RationalExpr._inverse(b))


def _inverse(b: RationalExpr) -> RationalExpr:
    # den/num, renormalized (num already coprime with den)
    return _normalize_unit(b.den, b.num)


RationalExpr._inverse = staticmethod(_inverse)


# -- substitution ------------------------------------------------------------

def _subst_poly(p: Polynomial, binds: Mapping[int, RationalExpr]) -> tuple[Polynomial, Polynomial]:
    bound = [s for s in p.variables() if s in binds]
    if not bound:
        return p, ONE
    groups = p.collect(bound)
    maxdeg = {s: 0 for s in bound}
    for m in groups:
        for s, e in m:
            if e > maxdeg[s]:
                maxdeg[s] = e
    npow: dict[int, list[Polynomial]] = {}
    dpow: dict[int, list[Polynomial]] = {}
    for s in bound:
        b = binds[s]
        ns, ds = [ONE], [ONE]
        for _ in range(maxdeg[s]):
            ns.append(ns[-1] * b.num)
            if not b.den.is_constant():
                ds.append(ds[-1] * b.den)
        npow[s], dpow[s] = ns, ds
    den = ONE
    for s in bound:
        if len(dpow[s]) > 1:
            den = den * dpow[s][maxdeg[s]]
    total: dict = {}
    for m, c in groups.items():
        exps = dict(m)
        factor = c
        for s in bound:
            e = exps.get(s, 0)
            if e:
                factor = factor * npow[s][e]
            if len(dpow[s]) > 1 and maxdeg[s] - e:
                factor = factor * dpow[s][maxdeg[s] - e]
        for mm, cc in factor:
            v = total.get(mm, 0) + cc
            if v:
                total[mm] = v
            else:
                total.pop(mm, None)
    return Polynomial.from_terms(total.items()), den


def substitute(e: RationalExpr, bindings: Mapping[int, RationalExpr]) -> RationalExpr:
    """Simultaneous substitution of expressions for symbols."""
    e = _rx(e)
    binds = {s: _rx(v) for s, v in bindings.items()}
    n1, d1 = _subst_poly(e.num, binds)
    n2, d2 = _subst_poly(e.den, binds)
    if n2.is_zero():
        raise DegenerateSubstitutionError(f"denominator of {e} vanishes identically")
    return RationalExpr(n1 * d2, d1 * n2)


# -- coefficient extraction ----------------------------------------------------

def collect(e: RationalExpr, sids: Iterable[int]) -> dict[Monomial, RationalExpr]:
    """Coefficients of ``e`` as a polynomial in ``sids``."""
    e = _rx(e)
    keep = frozenset(sids)
    if e.den.variables() & keep:
        raise NotPolynomialError("collection variables occur in the denominator")
    out = {}
    for m, c in e.num.collect(keep).items():
        out[m] = RationalExpr(c, e.den) if not e.den.is_constant() else RationalExpr._canonical(c, ONE)
    return out


def residue_simple_pole(f: RationalExpr, z: int) -> RationalExpr:
    """Residue of ``f`` at the root of its denominator, linear in ``z``.

    A denominator free of ``z`` means no pole and the residue is 0.
    """
    f = _rx(f)
    D = f.den.univariate(z)
    dz = max(D)
    if dz == 0:
        return RationalExpr(0)
    if dz != 1:
        raise UnsupportedPoleError(f"denominator has degree {dz} in {_sym.symbol(z).text}")
    c0 = RationalExpr(D.get(0, ZERO))
    c1 = RationalExpr(D[1])
    z0 = -c0 / c1
    return substitute(RationalExpr(f.num), {z: z0}) / c1


def linear_combination(pairs: Iterable[tuple[RationalExpr, RationalExpr]]) -> RationalExpr:
    """Sum of products, accumulated over a common denominator."""
    acc = RationalExpr(0)
    for a, b in pairs:
        acc = acc + _rx(a) * _rx(b)
    return acc
