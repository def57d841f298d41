from __future__ import annotations

import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import PLAIN, nonzero, polynomials, rationals
from pointjets.symexpr import (DegenerateSubstitutionError, DomainError, NotPolynomialError,
                               Polynomial, RationalExpr, UnsupportedPoleError, collect,
                               divexact, gcd, residue_simple_pole, substitute, symbols)
from pointjets.symexpr.gcd import cancel

U, V, W = (RationalExpr.symbol(s) for s in PLAIN)
X, Y = RationalExpr.symbol(symbols.var("x")), RationalExpr.symbol(symbols.var("y"))
Z = symbols.var("z")
ZE = RationalExpr.symbol(Z)


def test_like_terms():
    assert X / Y + X / Y == 2 * X / Y


def test_cancellation_needs_gcd():
    e = ((X + Y) / (X - Y)) * (X - Y)
    assert e == X + Y
    assert e.is_polynomial()


def test_additive_identity():
    e = (X ** 2 - 3 * Y) / (X + 1)
    assert e + 0 == e


def test_division_by_zero():
    with pytest.raises(DomainError):
        X / (Y - Y)
    with pytest.raises(ZeroDivisionError):
        RationalExpr(1, 0)


def test_sign_normalized_by_denominator():
    e = X / (-Y - 1)
    assert e.den.leading_coeff() > 0
    assert e == -X / (Y + 1)


def test_rational_coefficients_are_exact():
    e = X * Fraction(1, 3) + Fraction(2, 3)
    assert e * 3 == X + 2
    assert e.value({symbols.var("x"): Fraction(1, 2)}) == Fraction(5, 6)


def test_substitute_examples():
    x = symbols.var("x")
    assert substitute(X ** 2, {x: Y + 1}) == Y ** 2 + 2 * Y + 1
    assert substitute(X / Y, {x: Y}) == 1


def test_substitute_degenerate():
    with pytest.raises(DegenerateSubstitutionError):
        substitute(1 / (X - Y), {symbols.var("x"): Y})


def test_collect_examples():
    v = PLAIN[1]
    parts = collect(3 * U * V ** 2 + U, [v])
    assert parts == {((v, 2),): 3 * U, (): U}
    assert collect(RationalExpr(0), [v]) == {}


def test_collect_rejects_denominator():
    with pytest.raises(NotPolynomialError):
        collect(U / V, [PLAIN[1]])


def test_residue_examples():
    assert residue_simple_pole((3 + 4 * ZE) / (1 + 2 * ZE), Z) == Fraction(1, 2)
    lam = X ** 2 + Y
    assert residue_simple_pole(lam * (X + Y * ZE) / (X + Y * ZE), Z) == 0


def test_residue_general_formula():
    b0, b1, c0, c1 = U, V, W, X
    got = residue_simple_pole((b0 + b1 * ZE) / (c0 + c1 * ZE), Z)
    assert got == (b0 * c1 - b1 * c0) / (c1 * c1)


def test_residue_higher_pole_unsupported():
    with pytest.raises(UnsupportedPoleError):
        residue_simple_pole(1 / (1 + ZE ** 2), Z)


def test_interning_is_injective_and_stable():
    a = symbols.var("fresh_name")
    assert symbols.var("fresh_name") == a
    assert symbols.var("other_fresh") != a
    assert symbols.phi("x", 1, 0) != symbols.phi("y", 1, 0)


def test_concurrent_interning_is_atomic():
    ids: list[int] = []

    def worker():
        ids.extend(symbols.var(f"thread_sym_{k}") for k in range(50))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    by_name = {symbols.symbol(i).name: i for i in ids}
    assert len(by_name) == 50
    assert all(by_name[symbols.symbol(i).name] == i for i in ids)


def test_terms_strictly_descending():
    p = ((X + Y + 1) ** 3).num
    keys = [m for m, _ in p.terms]
    assert len(set(keys)) == len(keys)
    assert all(c != 0 for _, c in p.terms)


polys = polynomials(PLAIN)


@settings(max_examples=200, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=100, deadline=None)
@given(rationals(PLAIN), rationals(PLAIN), rationals(PLAIN))
def test_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == 0
    if not b.is_zero():
        assert (a / b) * b == a
    # equality is compatible with addition
    assert a + c == RationalExpr(a.num, a.den) + c


@settings(max_examples=100, deadline=None)
@given(rationals(PLAIN))
def test_canonical_idempotent(a):
    again = RationalExpr(a.num, a.den)
    assert again.num == a.num and again.den == a.den


@settings(max_examples=100, deadline=None)
@given(nonzero(polys), nonzero(polys), nonzero(polys))
def test_gcd_reduction(p, q, r):
    assert RationalExpr(p * r, q * r) == RationalExpr(p, q)
    n, d = cancel(p * r, q * r)
    assert (n, d) == (RationalExpr(p, q).num, RationalExpr(p, q).den)
    g = gcd(p * r, q * r)
    assert divexact(p * r, g) * g == p * r
    assert divexact(q * r, g) * g == q * r


@settings(max_examples=100, deadline=None)
@given(rationals(PLAIN), rationals(PLAIN), polynomials(PLAIN), polynomials(PLAIN))
def test_substitution_homomorphism(a, b, s1, s2):
    binds = {PLAIN[0]: RationalExpr(s1), PLAIN[1]: RationalExpr(s2) + 7}
    try:
        sa, sb = substitute(a, binds), substitute(b, binds)
    except DegenerateSubstitutionError:
        return
    assert substitute(a * b, binds) == sa * sb
    assert substitute(a + b, binds) == sa + sb


@settings(max_examples=100, deadline=None)
@given(polynomials(PLAIN), polynomials(PLAIN), polynomials(PLAIN), polynomials(PLAIN),
       st.integers(-5, 5))
def test_residue_linear(n1, n2, n3, n4, k):
    den = U + (V ** 2 + 1) * ZE
    f = (RationalExpr(n1) + RationalExpr(n2) * ZE) / den
    g = (RationalExpr(n3) + RationalExpr(n4) * ZE) / den
    lhs = residue_simple_pole(f + k * g, Z)
    assert lhs == residue_simple_pole(f, Z) + k * residue_simple_pole(g, Z)


def test_polynomial_degree_queries():
    p = Polynomial.symbol(PLAIN[0]) ** 3 * Polynomial.symbol(PLAIN[1]) + 1
    assert p.degree(PLAIN[0]) == 3
    assert p.total_degree() == 4
