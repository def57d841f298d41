"""Total derivative along curves in the new coordinates and the prolongation
of an inverse point map ``x = x(xt, yt), y = y(xt, yt)`` to third-order jets.

Map-derivative symbols ``x_ij``/``y_ij`` stand for the partial derivatives of
the inverse map; ``yt1, yt2, yt3`` are the jet variables of the curve
``yt = yt(xt)``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Mapping

from .symexpr import RationalExpr, SymbolKind, collect, mono_str, symbols

MAX_PHI_ORDER = 3
MAX_JET_ORDER = 3


class MaxOrderError(ValueError):
    """Differentiation would leave the registered jet space."""


class StructureError(AssertionError):
    """The third derivative has a monomial outside the eleven-slot pattern."""


class DegenerateMapError(ValueError):
    """The Jacobian determinant of the map vanishes."""


def phi(name: str, i: int, j: int) -> RationalExpr:
    if i + j > MAX_PHI_ORDER:
        raise MaxOrderError(f"{name}_{i}.{j} exceeds order {MAX_PHI_ORDER}")
    return RationalExpr.symbol(symbols.phi(name, i, j))


def jet(k: int, tilde: bool = True) -> RationalExpr:
    if k > MAX_JET_ORDER:
        raise MaxOrderError(f"jet order {k} exceeds {MAX_JET_ORDER}")
    return RationalExpr.symbol(symbols.jet(k, tilde))


@dataclass(frozen=True)
class JetContext:
    max_phi_order: int
    phi_symbols: tuple[int, ...]
    jet_symbols: tuple[int, ...]

    @property
    def jacobian_inverse(self) -> tuple[tuple[RationalExpr, RationalExpr], ...]:
        """Matrix of first partials of the inverse map (rows x, y)."""
        return ((phi("x", 1, 0), phi("x", 0, 1)), (phi("y", 1, 0), phi("y", 0, 1)))

    @property
    def jacobian_direct(self) -> tuple[tuple[RationalExpr, RationalExpr], ...]:
        # registered for completeness; no formula consumes the direct partials
        return ((RationalExpr.symbol(symbols.var("xt_x")), RationalExpr.symbol(symbols.var("xt_y"))),
                (RationalExpr.symbol(symbols.var("yt_x")), RationalExpr.symbol(symbols.var("yt_y"))))


def context() -> JetContext:
    phis = tuple(symbols.phi(n, i, o - i)
                 for n in ("x", "y") for o in range(1, MAX_PHI_ORDER + 1) for i in range(o, -1, -1))
    jets = tuple(symbols.jet(k) for k in range(1, MAX_JET_ORDER + 1))
    return JetContext(MAX_PHI_ORDER, phis, jets)


def det_s() -> RationalExpr:
    """Jacobian determinant ``x10*y01 - x01*y10`` of the inverse map."""
    return phi("x", 1, 0) * phi("y", 0, 1) - phi("x", 0, 1) * phi("y", 1, 0)


def dx() -> RationalExpr:
    """Total derivative of the old abscissa, ``x10 + x01*yt1``."""
    return phi("x", 1, 0) + phi("x", 0, 1) * jet(1)


def dy() -> RationalExpr:
    return phi("y", 1, 0) + phi("y", 0, 1) * jet(1)


@lru_cache(maxsize=None)
def _derivative_of_symbol(sid: int) -> RationalExpr:
    s = symbols.symbol(sid)
    if s.kind is SymbolKind.PHI:
        if s.i + s.j + 1 > MAX_PHI_ORDER:
            raise MaxOrderError(f"D({s.text}) needs order {s.i + s.j + 1} partials")
        return phi(s.name, s.i + 1, s.j) + jet(1) * phi(s.name, s.i, s.j + 1)
    if s.kind is SymbolKind.JET and s.j == 1:
        if s.i + 1 > MAX_JET_ORDER:
            raise MaxOrderError(f"D({s.text}) exceeds jet order {MAX_JET_ORDER}")
        return jet(s.i + 1)
    if s.kind is SymbolKind.COEFF and s.composed:
        raise ValueError(f"derivative of opaque composed symbol {s.text} requested")
    raise ValueError(f"total derivative undefined for symbol {s.text}")


def total_derivative(e: RationalExpr) -> RationalExpr:
    """D = d/dxt along a curve: D(x_ij) = x_{i+1,j} + yt1*x_{i,j+1}, D(yt_k) = yt_{k+1}."""
    e = RationalExpr.coerce(e)
    if e.is_constant():
        return RationalExpr(0)

    def d_poly(p) -> RationalExpr:
        acc = RationalExpr(0)
        for sid in sorted(p.variables()):
            acc = acc + RationalExpr(p.diff(sid)) * _derivative_of_symbol(sid)
        return acc

    dn = d_poly(e.num)
    if e.den.is_constant():
        return dn * RationalExpr(1, e.den)
    dd = d_poly(e.den)
    n, d = RationalExpr(e.num), RationalExpr(e.den)
    return (dn * d - n * dd) / (d * d)


@dataclass(frozen=True)
class Prolongation:
    yp: RationalExpr
    ypp: RationalExpr | None = None
    yppp: RationalExpr | None = None

    def substitute(self, bindings: Mapping[int, RationalExpr]) -> "Prolongation":
        return Prolongation(*(None if v is None else v.substitute(bindings)
                              for v in (self.yp, self.ypp, self.yppp)))


@lru_cache(maxsize=None)
def prolong(order: int = 3) -> Prolongation:
    if order not in (1, 2, 3):
        raise MaxOrderError(f"prolongation order must be 1, 2 or 3, got {order}")
    v = dx()
    yp = dy() / v
    out = [yp]
    for _ in range(order - 1):
        out.append(total_derivative(out[-1]) / v)
    return Prolongation(*out)


_A_NAMES = tuple(f"a{k}" for k in range(1, 12))


@dataclass(frozen=True)
class CoefficientTable:
    a1: RationalExpr
    a2: RationalExpr
    a3: RationalExpr
    a4: RationalExpr
    a5: RationalExpr
    a6: RationalExpr
    a7: RationalExpr
    a8: RationalExpr
    a9: RationalExpr
    a10: RationalExpr
    a11: RationalExpr

    def items(self) -> list[tuple[str, RationalExpr]]:
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def __getitem__(self, k: int) -> RationalExpr:
        return getattr(self, f"a{k}")

    def replace(self, **changes: RationalExpr) -> "CoefficientTable":
        return CoefficientTable(**{**dict(self.items()), **changes})

    def substitute(self, bindings: Mapping[int, RationalExpr]) -> "CoefficientTable":
        return CoefficientTable(**{k: v.substitute(bindings) for k, v in self.items()})

    def jet_monomials(self) -> list[RationalExpr]:
        """The jet factor multiplying each a_k in the third-derivative numerator."""
        p, q, r = jet(1), jet(2), jet(3)
        return [r, q * q, q * p * p, q * p, q, p ** 5, p ** 4, p ** 3, p * p, p, RationalExpr(1)]

    def lower_part(self) -> RationalExpr:
        """sum_{k>=2} a_k * monomial_k, the part free of yt3."""
        total = RationalExpr(0)
        for (_, a), m in list(zip(self.items(), self.jet_monomials()))[1:]:
            total = total + a * m
        return total

    def reconstruct(self) -> RationalExpr:
        """(a1*yt3 + ... + a11) / (x10 + x01*yt1)^5."""
        return (self.a1 * jet(3) + self.lower_part()) / dx() ** 5


def _slot_of(exps: dict[int, int]) -> str | None:
    p, q, r = (symbols.jet(k) for k in (1, 2, 3))
    ep, eq, er = exps.get(p, 0), exps.get(q, 0), exps.get(r, 0)
    if er == 1 and eq == 0 and ep <= 1:
        return "a1"
    if er:
        return None
    if eq == 2 and ep == 0:
        return "a2"
    if eq == 1 and ep <= 2:
        return ("a5", "a4", "a3")[ep]
    if eq == 0 and ep <= 5:
        return f"a{11 - ep}"
    return None


def extract_coefficients(p: Prolongation | None = None) -> CoefficientTable:
    """Read a1..a11 off (x10 + x01*yt1)^5 * y'''."""
    if p is None:
        p = prolong(3)
    if p.yppp is None:
        raise ValueError("extract_coefficients needs a third-order prolongation")
    cleared = p.yppp * dx() ** 5
    jets = [symbols.jet(k) for k in (1, 2, 3)]
    slots: dict[str, RationalExpr] = {name: RationalExpr(0) for name in _A_NAMES}
    for mono, c in collect(cleared, jets).items():
        exps = dict(mono)
        slot = _slot_of(exps)
        if slot is None:
            raise StructureError(f"unexpected jet monomial {mono_str(mono)}")
        if slot == "a1" and exps.get(jets[0]):
            c = c * jet(1)
        slots[slot] = slots[slot] + c
    return CoefficientTable(**slots)


@lru_cache(maxsize=None)
def derived_coefficients() -> CoefficientTable:
    return extract_coefficients(prolong(3))
