"""Exact chain-rule jets of concrete curves under concrete polynomial maps.

Everything on the oracle side is univariate calculus on ``Fraction`` lists:
the curve is pushed through the map parametrically and differentiated with
the quotient rule, never through the symbolic prolongation formulas.  The
symbolic side is only consulted to produce the value being checked.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

MAX_ATTEMPTS = 100
SERIES_ORDER = 3


class VerticalTangentError(ArithmeticError):
    """dx/dxt vanishes at the base point."""


class DegenerateSampleError(ArithmeticError):
    """The Jacobian of the map vanishes at the sample."""


class ResampleLimitError(RuntimeError):
    pass


# -- univariate polynomials: coefficient lists, lowest degree first ------------

def _n(c):
    # integral values as int keeps the polynomial products cheap
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def uadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def uneg(a: Sequence[Fraction]) -> list[Fraction]:
    return [-c for c in a]


def umul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim([_n(c) for c in out])


def upow(a: Sequence[Fraction], n: int) -> list[Fraction]:
    out: list[Fraction] = [1]
    for _ in range(n):
        out = umul(out, a)
    return out


def uderiv(a: Sequence[Fraction]) -> list[Fraction]:
    return _trim([i * a[i] for i in range(1, len(a))])


def ueval(a: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * t + c
    return acc


# univariate rational functions as (num, den) pairs, unreduced

def rderiv(f: tuple[list, list]) -> tuple[list, list]:
    n, d = f
    return uadd(umul(uderiv(n), d), uneg(umul(n, uderiv(d)))), umul(d, d)


def rdiv(f: tuple[list, list], g: tuple[list, list]) -> tuple[list, list]:
    return umul(f[0], g[1]), umul(f[1], g[0])


def reval(f: tuple[list, list], t: Fraction) -> Fraction:
    d = ueval(f[1], t)
    if d == 0:
        raise ZeroDivisionError("rational function has a pole at the base point")
    return Fraction(ueval(f[0], t)) / d


# -- concrete data -------------------------------------------------------------

Bivariate = dict  # {(i, j): Fraction} for sum c * xt^i * yt^j


def bderiv(p: Bivariate, di: int, dj: int) -> Bivariate:
    out = {}
    for (i, j), c in p.items():
        if i >= di and j >= dj:
            f = Fraction(c)
            for k in range(di):
                f *= i - k
            for k in range(dj):
                f *= j - k
            out[(i - di, j - dj)] = f
    return {k: v for k, v in out.items() if v}


def beval(p: Bivariate, xt: Fraction, yt: Fraction) -> Fraction:
    return sum((Fraction(c) * xt ** i * yt ** j for (i, j), c in p.items()), Fraction(0))


def bcompose(p: Bivariate, curve: Sequence[Fraction]) -> list[Fraction]:
    """p(t, phi(t)) as a univariate polynomial in t."""
    out: list[Fraction] = []
    curve = [_n(Fraction(c)) for c in curve]
    for (i, j), c in p.items():
        term = umul([0] * i + [_n(Fraction(c))], upow(curve, j))
        out = uadd(out, term)
    return out


@dataclass(frozen=True)
class ConcreteMap:
    """Inverse map x = chi(xt, yt), y = psi(xt, yt) with a base point."""

    chi: Bivariate
    psi: Bivariate
    base: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    name: str = ""

    def partials(self, xt: Fraction, yt: Fraction, max_order: int = 3) -> dict[tuple[str, int, int], Fraction]:
        out = {}
        for order in range(1, max_order + 1):
            for i in range(order, -1, -1):
                j = order - i
                out[("x", i, j)] = beval(bderiv(self.chi, i, j), xt, yt)
                out[("y", i, j)] = beval(bderiv(self.psi, i, j), xt, yt)
        return out

    def det_s(self, xt: Fraction, yt: Fraction) -> Fraction:
        d = self.partials(xt, yt, 1)
        return d[("x", 1, 0)] * d[("y", 0, 1)] - d[("x", 0, 1)] * d[("y", 1, 0)]

    def value(self, xt: Fraction, yt: Fraction) -> tuple[Fraction, Fraction]:
        return beval(self.chi, xt, yt), beval(self.psi, xt, yt)

    def degree(self) -> int:
        return max(i + j for (i, j) in (*self.chi, *self.psi))


@dataclass(frozen=True)
class ConcreteCurve:
    """The curve yt = phi(xt), coefficients lowest degree first."""

    phi: tuple[Fraction, ...]

    def derivatives(self, t: Fraction, upto: int = 3) -> list[Fraction]:
        out, p = [], list(self.phi)
        for _ in range(upto + 1):
            out.append(ueval(p, t))
            p = uderiv(p)
        return out


def _fr(coeffs: dict) -> Bivariate:
    return {k: Fraction(v) for k, v in coeffs.items() if v}


IDENTITY = ConcreteMap(_fr({(1, 0): 1}), _fr({(0, 1): 1}), name="identity")
SWAP = ConcreteMap(_fr({(0, 1): 1}), _fr({(1, 0): 1}), name="swap")


# -- parametric jets -------------------------------------------------------------

def parametric_jets(m: ConcreteMap, curve: ConcreteCurve,
                    at: Fraction | None = None) -> tuple[Fraction, Fraction, Fraction]:
    """(y', y'', y''') of the image curve at the base abscissa, by the chain rule."""
    t0 = Fraction(m.base[0] if at is None else at)
    xs = bcompose(m.chi, curve.phi)
    ys = bcompose(m.psi, curve.phi)
    xdot = (uderiv(xs), [1])
    if reval(xdot, t0) == 0:
        raise VerticalTangentError(f"dx/dxt vanishes at xt = {t0}")
    d1 = rdiv((uderiv(ys), [1]), xdot)
    d2 = rdiv(rderiv(d1), xdot)
    d3 = rdiv(rderiv(d2), xdot)
    return reval(d1, t0), reval(d2, t0), reval(d3, t0)


# -- symbolic side -----------------------------------------------------------------

def _bindings(m: ConcreteMap, curve: ConcreteCurve, t0: Fraction) -> dict[int, Fraction]:
    from .symexpr import symbols
    f0, f1, f2, f3 = curve.derivatives(t0)
    values = {symbols.phi(n, i, j): v for (n, i, j), v in m.partials(t0, f0).items()}
    values.update({symbols.jet(1): f1, symbols.jet(2): f2, symbols.jet(3): f3})
    return values


def check_prolongation_at(m: ConcreteMap, curve: ConcreteCurve, table=None) -> bool:
    """Symbolic y', y'', y''' at the sample equal the parametric ones exactly.

    ``table`` overrides the coefficient table used for y''' (fault injection
    and arbitration); the default is the derived one.
    """
    from . import jets
    from .symexpr import DomainError
    t0 = Fraction(m.base[0])
    expected = parametric_jets(m, curve, t0)
    values = _bindings(m, curve, t0)
    p = jets.prolong(3)
    t = table if table is not None else jets.derived_coefficients()
    try:
        got = (p.yp.value(values), p.ypp.value(values), _reconstructed(t).value(values))
    except DomainError as exc:
        raise VerticalTangentError(str(exc)) from exc
    return got == expected


@lru_cache(maxsize=64)
def _reconstructed(table):
    return table.reconstruct()


# -- seeded sampling ---------------------------------------------------------------

def _rng(seed: int, index: int, attempt: int, tag: str) -> random.Random:
    return random.Random(f"{tag}:{seed}:{index}:{attempt}")


def _random_bivariate(rng: random.Random, degree: int, bound: int = 9, density: float = 0.7) -> Bivariate:
    out = {}
    for d in range(degree + 1):
        for i in range(d + 1):
            if rng.random() < density:
                c = rng.randint(-bound, bound)
                if c:
                    out[(i, d - i)] = Fraction(c)
    return out


def random_map(rng: random.Random, degree: int = 3, bound: int = 9) -> ConcreteMap:
    chi = _random_bivariate(rng, degree, bound)
    psi = _random_bivariate(rng, degree, bound)
    base = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
    return ConcreteMap(chi, psi, base, name="random")


def random_case(seed: int, index: int, map_degree: int = 3,
                curve_degree: int = 5) -> tuple[ConcreteMap, ConcreteCurve]:
    """A nondegenerate (map, curve) pair, a pure function of (seed, index)."""
    for attempt in range(MAX_ATTEMPTS):
        rng = _rng(seed, index, attempt, "prolong")
        m = random_map(rng, map_degree)
        x0, y0 = m.base
        coeffs = [Fraction(rng.randint(-9, 9)) for _ in range(curve_degree + 1)]
        # shift the constant term so the curve passes through the base point
        coeffs[0] += y0 - ueval(coeffs, x0)
        curve = ConcreteCurve(tuple(coeffs))
        if m.det_s(x0, y0) == 0:
            continue
        f1 = curve.derivatives(x0, 1)[1]
        d = m.partials(x0, y0, 1)
        if d[("x", 1, 0)] + d[("x", 0, 1)] * f1 == 0:
            continue
        return m, curve
    raise ResampleLimitError(f"no nondegenerate case for seed={seed} index={index}")


@dataclass
class BatchResult:
    name: str
    seed: int
    cases: int
    passed: int
    failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.cases

    def as_dict(self) -> dict:
        return {"name": self.name, "seed": self.seed, "cases": self.cases,
                "passed": self.passed, "failed_indices": self.failures}


def prolongation_batch(seed: int = 0, cases: int = 100, table=None) -> BatchResult:
    res = BatchResult("check_prolongation_at", seed, cases, 0)
    for k in range(cases):
        m, c = random_case(seed, k)
        if check_prolongation_at(m, c, table):
            res.passed += 1
        else:
            res.failures.append(k)
    return res


def arbitrate(derived, candidate, seed: int = 0, cases: int = 20) -> str:
    """Which coefficient table the parametric jets support."""
    d_ok = prolongation_batch(seed, cases, derived).ok
    c_ok = prolongation_batch(seed, cases, candidate).ok
    if d_ok and not c_ok:
        return "derived"
    if c_ok and not d_ok:
        return "claimed"
    return "both" if d_ok else "neither"


# -- solutions of y''' = 0 pushed into the new coordinates ------------------------

def _smul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (SERIES_ORDER + 1)
    for i, ca in enumerate(a):
        if ca:
            for j in range(SERIES_ORDER + 1 - i):
                out[i + j] += ca * b[j]
    return out


def _spow(a: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(1)] + [Fraction(0)] * SERIES_ORDER
    for _ in range(n):
        out = _smul(out, a)
    return out


def _scompose(p: Bivariate, X: list[Fraction], Y: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (SERIES_ORDER + 1)
    for (i, j), c in p.items():
        term = _smul(_spow(X, i), _spow(Y, j))
        for k in range(SERIES_ORDER + 1):
            out[k] += c * term[k]
    return out


def _sderiv(a: list[Fraction]) -> list[Fraction]:
    return [k * a[k] for k in range(1, len(a))]


def _sdiv(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = min(len(a), len(b))
    out: list[Fraction] = []
    for k in range(n):
        s = a[k] - sum((out[i] * b[k - i] for i in range(k)), Fraction(0))
        out.append(s / b[0])
    return out


def image_jets(m: ConcreteMap, sample: tuple[Fraction, Fraction],
               slope: Fraction, curvature: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """Jets (yt', yt'', yt''') of the preimage of the parabola through m(sample).

    The parabola in the original coordinates is
    y = y0 + slope*(x - x0) + curvature*(x - x0)^2 with (x0, y0) = m(sample);
    the preimage is parametrized by h = x - x0 and solved order by order.
    """
    xt0, yt0 = Fraction(sample[0]), Fraction(sample[1])
    d = m.partials(xt0, yt0, 1)
    a, b, c, e = d[("x", 1, 0)], d[("x", 0, 1)], d[("y", 1, 0)], d[("y", 0, 1)]
    det = a * e - b * c
    if det == 0:
        raise DegenerateSampleError(f"det S vanishes at {sample}")
    X = [xt0] + [Fraction(0)] * SERIES_ORDER
    Y = [yt0] + [Fraction(0)] * SERIES_ORDER
    target_x = [Fraction(0), Fraction(1), Fraction(0), Fraction(0)]
    target_y = [Fraction(0), Fraction(slope), Fraction(curvature), Fraction(0)]
    for k in range(1, SERIES_ORDER + 1):
        fx = _scompose(m.chi, X, Y)
        fy = _scompose(m.psi, X, Y)
        rx, ry = target_x[k] - fx[k], target_y[k] - fy[k]
        X[k] = (e * rx - b * ry) / det
        Y[k] = (a * ry - c * rx) / det
    Xd, Yd = _sderiv(X), _sderiv(Y)
    if Xd[0] == 0:
        raise VerticalTangentError("preimage curve has a vertical tangent")
    j1 = _sdiv(Yd, Xd)
    j2 = _sdiv(_sderiv(j1), Xd)
    j3 = _sdiv(_sderiv(j2), Xd)
    return j1[0], j2[0], j3[0]


def check_y3zero_mapping(m: ConcreteMap, parabola: ConcreteCurve,
                         samples: Iterable[tuple[Fraction, Fraction]], rhs=None) -> bool:
    """The transformed right-hand side reproduces yt''' on preimages of parabolas.

    ``parabola`` supplies slope and curvature (its linear and quadratic
    coefficients); it is re-anchored at the image of every sample.  ``rhs``
    is an expression in x_ij, y_ij, yt1, yt2; by default the derived
    transform of y''' = 0.
    """
    from .symexpr import symbols
    if len(parabola.phi) > 3:
        raise ValueError("parabola must have degree <= 2")
    coeffs = list(parabola.phi) + [Fraction(0)] * 3
    slope, curvature = coeffs[1], coeffs[2]
    if rhs is None:
        rhs = derived_y3zero_rhs()
    for sample in samples:
        j1, j2, j3 = image_jets(m, sample, slope, curvature)
        values = {symbols.phi(n, i, j): v for (n, i, j), v in m.partials(*sample).items()}
        values.update({symbols.jet(1): j1, symbols.jet(2): j2})
        if rhs.value(values) != j3:
            return False
    return True


def derived_y3zero_rhs():
    from . import jets
    t = jets.derived_coefficients()
    return -t.lower_part() / t.a1


def random_affine_quadratic_map(rng: random.Random) -> ConcreteMap:
    chi = _random_bivariate(rng, 2, 9, density=0.8)
    psi = _random_bivariate(rng, 2, 9, density=0.8)
    return ConcreteMap(chi, psi, name="quadratic")


def y3zero_case(seed: int, index: int, n_samples: int = 2):
    """(map, parabola, samples) with every sample nondegenerate."""
    for attempt in range(MAX_ATTEMPTS):
        rng = _rng(seed, index, attempt, "y3zero")
        m = random_affine_quadratic_map(rng)
        parabola = ConcreteCurve(tuple(Fraction(rng.randint(-9, 9)) for _ in range(3)))
        samples = [(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4))) for _ in range(n_samples)]
        try:
            for s in samples:
                d = m.partials(*s, 1)
                j1 = image_jets(m, s, parabola.phi[1], parabola.phi[2])[0]
                if d[("x", 1, 0)] + d[("x", 0, 1)] * j1 == 0:
                    raise VerticalTangentError("pole of the symbolic formula")
        except (DegenerateSampleError, VerticalTangentError):
            continue
        return m, parabola, samples
    raise ResampleLimitError(f"no nondegenerate y'''=0 case for seed={seed} index={index}")


def y3zero_batch(seed: int = 0, cases: int = 25, rhs=None) -> BatchResult:
    res = BatchResult("check_y3zero_mapping", seed, cases, 0)
    if rhs is None:
        rhs = derived_y3zero_rhs()
    for k in range(cases):
        m, parabola, samples = y3zero_case(seed, k)
        if check_y3zero_mapping(m, parabola, samples, rhs):
            res.passed += 1
        else:
            res.failures.append(k)
    return res


def corrupt(table, name: str):
    """Table with one coefficient perturbed by x10*y01 (fault injection)."""
    from .symexpr import RationalExpr, symbols
    bump = RationalExpr.symbol(symbols.phi("x", 1, 0)) * RationalExpr.symbol(symbols.phi("y", 0, 1))
    return table.replace(**{name: getattr(table, name) + bump})

