"""Shared hypothesis strategies and seeded generators for the test suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from pointjets import invariance
from pointjets.parsing import parse_expression
from pointjets.symexpr import Polynomial, RationalExpr, symbols

PLAIN = [symbols.var(n) for n in ("u", "v", "w")]
LOW_PHI = [symbols.phi(n, i, o - i) for n in ("x", "y") for o in (1, 2) for i in range(o, -1, -1)]
LOW_JETS = [symbols.jet(1), symbols.jet(2)]


def polynomials(sids, max_terms: int = 4, max_exp: int = 2, bound: int = 5):
    term = st.tuples(
        st.lists(st.tuples(st.sampled_from(sids), st.integers(1, max_exp)), max_size=3),
        st.integers(-bound, bound),
    )

    def build(terms):
        acc = Polynomial.constant(0)
        for factors, c in terms:
            mono = Polynomial.constant(c)
            for sid, e in factors:
                mono = mono * Polynomial.symbol(sid) ** e
            acc = acc + mono
        return acc

    return st.lists(term, max_size=max_terms).map(build)


def nonzero(strategy):
    return strategy.filter(lambda p: not p.is_zero())


def rationals(sids, **kw):
    return st.builds(lambda n, d: RationalExpr(n, d), polynomials(sids, **kw),
                     nonzero(polynomials(sids, **kw)))


def class_coeffs(rng: random.Random, names, sids) -> dict[str, RationalExpr]:
    """Random small polynomial coefficients in the given variables."""
    out = {}
    for name in names:
        e = RationalExpr(0)
        for _ in range(rng.randint(0, 2)):
            mono = RationalExpr(rng.randint(-4, 4))
            for sid in sids:
                mono = mono * RationalExpr.symbol(sid) ** rng.randint(0, 1)
            e = e + mono
        out[name] = e
    if out.get("X", RationalExpr(0)).is_zero() and out.get("Y", RationalExpr(0)).is_zero():
        out["Y"] = RationalExpr(1 + rng.randint(0, 3))
    return out


def random_point_map(rng: random.Random) -> invariance.PointMap:
    """Inverse map: invertible linear part plus one quadratic term per component."""
    while True:
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c == 0:
            continue
        q1, q2 = rng.randint(-2, 2), rng.randint(-2, 2)
        return invariance.PointMap(parse_expression(f"{a}*xt + {b}*yt + {q1}*yt^2"),
                                   parse_expression(f"{c}*xt + {d}*yt + {q2}*xt*yt"))
