"""Sparse multivariate polynomials over the rationals.

A monomial is a tuple of ``(symbol_id, exponent)`` pairs sorted by symbol id,
with positive exponents only; ``()`` is the unit monomial.  Coefficients are
``int`` or ``Fraction`` (a ``Fraction`` with denominator 1 is stored as
``int``).  Values are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, Iterator, Mapping, Union

from . import symbols as _sym
from .errors import NotDivisibleError

Coeff = Union[int, Fraction]
Monomial = tuple

ONE_MONO: Monomial = ()


def qnorm(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_coeff(c) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return qnorm(c)
    if isinstance(c, str):
        return qnorm(Fraction(c))
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


# -- monomials ---------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        sa, ea = a[i]
        sb, eb = b[j]
        if sa == sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """``a / b`` if ``b`` divides ``a``, else None."""
    if not b:
        return a
    da = dict(a)
    for s, e in b:
        have = da.get(s, 0)
        if have < e:
            return None
        if have == e:
            del da[s]
        else:
            da[s] = have - e
    return tuple(sorted(da.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_from(exps: Mapping[int, int]) -> Monomial:
    return tuple(sorted((s, e) for s, e in exps.items() if e))


_pos_cache: dict[int, int] = {}
_pos_size = -1


def _positions() -> dict[int, int]:
    global _pos_cache, _pos_size
    n = _sym.table_size()
    if n != _pos_size:
        order = sorted(range(n), key=_sym.rank)
        _pos_cache = {sid: p for p, sid in enumerate(order)}
        _pos_size = n
    return _pos_cache


_key_cache: dict = {}
_key_size = -1


def mono_key(m: Monomial) -> tuple:
    """Sort key: graded lexicographic, larger key = larger monomial."""
    global _key_size
    if _key_size != _sym.table_size():
        _key_cache.clear()
        _key_size = _sym.table_size()
    key = _key_cache.get(m)
    if key is None:
        pos = _positions()
        pairs = sorted((pos[s], e) for s, e in m)
        key = (mono_degree(m), tuple((-p, e) for p, e in pairs))
        _key_cache[m] = key
    return key


def mono_str(m: Monomial) -> str:
    pos = _positions()
    parts = []
    for s, e in sorted(m, key=lambda se: pos[se[0]]):
        t = _sym.symbol(s).text
        parts.append(t if e == 1 else f"{t}^{e}")
    return "*".join(parts) if parts else "1"


# -- polynomials -------------------------------------------------------------

class Polynomial:
    __slots__ = ("_t", "_vars", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None):
        # trusted constructor: callers guarantee no zero coefficients
        self._t: dict = dict(terms) if terms else {}
        self._vars = None
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p._t = terms
        p._vars = None
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        c = as_coeff(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def symbol(cls, sid: int) -> "Polynomial":
        return cls._raw({((sid, 1),): 1})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Monomial, Coeff]]) -> "Polynomial":
        acc: dict = {}
        for m, c in items:
            c = as_coeff(c)
            if c:
                acc[m] = acc.get(m, 0) + c
        return cls._raw({m: qnorm(c) for m, c in acc.items() if c})

    # -- inspection --
    @property
    def term_dict(self) -> dict:
        return self._t

    @property
    def terms(self) -> list[tuple[Monomial, Coeff]]:
        """Terms in strictly descending canonical monomial order."""
        return sorted(self._t.items(), key=lambda mc: mono_key(mc[0]), reverse=True)

    def __len__(self) -> int:
        return len(self._t)

    def __iter__(self) -> Iterator[tuple[Monomial, Coeff]]:
        return iter(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and ONE_MONO in self._t)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._t.get(ONE_MONO, 0)

    def variables(self) -> frozenset:
        if self._vars is None:
            self._vars = frozenset(s for m in self._t for s, _ in m)
        return self._vars

    def degree(self, sid: int) -> int:
        """Degree in one symbol; -1 for the zero polynomial."""
        if not self._t:
            return -1
        best = 0
        for m in self._t:
            for s, e in m:
                if s == sid and e > best:
                    best = e
        return best

    def total_degree(self) -> int:
        if not self._t:
            return -1
        return max(mono_degree(m) for m in self._t)

    def leading_term(self) -> tuple[Monomial, Coeff]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return max(self._t.items(), key=lambda mc: mono_key(mc[0]))

    def leading_coeff(self) -> Coeff:
        return self.leading_term()[1]

    # -- arithmetic --
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({ONE_MONO: qnorm(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        a, b = (self._t, other._t) if len(self._t) >= len(other._t) else (other._t, self._t)
        out = dict(a)
        for m, c in b.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = qnorm(v + c)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = as_coeff(c)
        if not c:
            return Polynomial._raw({})
        if c == 1:
            return self
        return Polynomial._raw({m: qnorm(v * c) for m, v in self._t.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._t or not other._t:
            return Polynomial._raw({})
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            if not mb:
                return self.scale(cb) if b is other._t else other.scale(cb)
            return Polynomial._raw({mono_mul(ma, mb): qnorm(ca * cb) for ma, ca in a.items()})
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = mono_mul(ma, mb)
                out[m] = get(m, 0) + ca * cb
        return Polynomial._raw({m: qnorm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- structure --
    def univariate(self, sid: int) -> dict[int, "Polynomial"]:
        """Split as sum over k of c_k * sym^k; returns {k: c_k}."""
        parts: dict[int, dict] = {}
        for m, c in self._t.items():
            k = 0
            rest = m
            for idx, (s, e) in enumerate(m):
                if s == sid:
                    k = e
                    rest = m[:idx] + m[idx + 1:]
                    break
            parts.setdefault(k, {})[rest] = c
        return {k: Polynomial._raw(t) for k, t in parts.items()}

    @staticmethod
    def from_univariate(parts: Mapping[int, "Polynomial"], sid: int) -> "Polynomial":
        out: dict = {}
        for k, p in parts.items():
            if k == 0:
                for m, c in p._t.items():
                    out[m] = c
            else:
                xm = ((sid, k),)
                for m, c in p._t.items():
                    out[mono_mul(m, xm)] = c
        return Polynomial._raw(out)

    def collect(self, sids: Iterable[int]) -> dict[Monomial, "Polynomial"]:
        """Group by the monomial in ``sids``; values are free of ``sids``."""
        keep = frozenset(sids)
        parts: dict[Monomial, dict] = {}
        for m, c in self._t.items():
            inner = tuple(se for se in m if se[0] in keep)
            outer = tuple(se for se in m if se[0] not in keep) if inner else m
            parts.setdefault(inner, {})[outer] = c
        return {k: Polynomial._raw(t) for k, t in parts.items()}

    def diff(self, sid: int) -> "Polynomial":
        out: dict = {}
        for m, c in self._t.items():
            for idx, (s, e) in enumerate(m):
                if s == sid:
                    nm = m[:idx] + ((s, e - 1),) + m[idx + 1:] if e > 1 else m[:idx] + m[idx + 1:]
                    out[nm] = c * e
                    break
        return Polynomial._raw(out)

    def evaluate(self, values: Mapping[int, Coeff]) -> "Polynomial":
        """Substitute rational numbers for some symbols."""
        out: dict = {}
        for m, c in self._t.items():
            rest = []
            for s, e in m:
                v = values.get(s)
                if v is None:
                    rest.append((s, e))
                else:
                    c = c * v ** e
            if c:
                key = tuple(rest)
                out[key] = out.get(key, 0) + c
        return Polynomial._raw({m: qnorm(c) for m, c in out.items() if c})

    def rename(self, mapping: Mapping[int, int]) -> "Polynomial":
        """Symbol-for-symbol renaming (must not merge two symbols of one monomial)."""
        out: dict = {}
        for m, c in self._t.items():
            nm = mono_from({mapping.get(s, s): e for s, e in m})
            out[nm] = out.get(nm, 0) + c
        return Polynomial._raw({m: qnorm(c) for m, c in out.items() if c})

    def rational_content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self._t:
            return Fraction(1)
        num = 0
        den = 1
        for c in self._t.values():
            if type(c) is Fraction:
                n, d = c.numerator, c.denominator
                den = den * d // igcd(den, d)
            else:
                n = c
            num = igcd(num, n)
        return Fraction(num, den)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        from .printing import poly_str
        return poly_str(self)


ZERO = Polynomial._raw({})
ONE = Polynomial._raw({ONE_MONO: 1})


def divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact quotient ``a / b``; raises NotDivisibleError otherwise."""
    if not b._t:
        raise ZeroDivisionError("polynomial division by zero")
    if not a._t:
        return ZERO
    if b.is_constant():
        return a.scale(Fraction(1) / b.constant_value())
    if len(b._t) == 1:
        (mb, cb), = b._t.items()
        inv = Fraction(1) / cb
        out = {}
        for m, c in a._t.items():
            q = mono_div(m, mb)
            if q is None:
                raise NotDivisibleError("monomial divisor does not divide")
            out[q] = qnorm(c * inv)
        return Polynomial._raw(out)
    bv = b.variables()
    x = min(bv, key=_sym.rank)
    if x not in a.variables():
        raise NotDivisibleError("dividend is free of a divisor variable")
    A = a.univariate(x)
    B = b.univariate(x)
    db = max(B)
    lb = B[db]
    R = dict(A)
    Q: dict[int, Polynomial] = {}
    while R:
        dr = max(R)
        if dr < db:
            raise NotDivisibleError("nonzero remainder")
        c = divexact(R[dr], lb)
        shift = dr - db
        Q[shift] = c
        for k, bk in B.items():
            v = R.get(k + shift, ZERO) - c * bk
            if v._t:
                R[k + shift] = v
            else:
                R.pop(k + shift, None)
        if dr in R:
            raise NotDivisibleError("leading term did not cancel")
    return Polynomial.from_univariate(Q, x)


def try_divexact(a: Polynomial, b: Polynomial) -> Polynomial | None:
    try:
        return divexact(a, b)
    except NotDivisibleError:
        return None
