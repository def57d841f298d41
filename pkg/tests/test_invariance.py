from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from helpers import class_coeffs, random_point_map
from pointjets import invariance as inv, jets
from pointjets.jets import DegenerateMapError
from pointjets.paper_formulas import CLAIMED_B_TILDE, claimed_y3zero_rhs
from pointjets.parsing import parse_expression
from pointjets.symexpr import RationalExpr, symbols

x10, x01, y10, y01 = (jets.phi(n, i, j) for n, i, j in
                      (("x", 1, 0), ("x", 0, 1), ("y", 1, 0), ("y", 0, 1)))
p, q = jets.jet(1), jets.jet(2)
V = jets.dx()
Bo, Xo, Yo = (RationalExpr.symbol(symbols.coeff(n, True)) for n in ("B", "X", "Y"))
XT, YT = symbols.var("xt"), symbols.var("yt")


def test_transform_zero_general():
    g = inv.transform_equation(0)
    assert g == claimed_y3zero_rhs()
    q2 = RationalExpr(g.num).num.collect([symbols.jet(2)])[((symbols.jet(2), 2),)]
    assert RationalExpr(q2, g.den) == 3 * x01 / V


def test_transform_zero_identity():
    assert inv.transform_equation(0, inv.identity_map()) == 0


def test_b_term_pair_is_transcription_with_entries_exchanged():
    b1, b2 = inv.derived_b_tilde()
    c1, c2 = (parse_expression(CLAIMED_B_TILDE[k]) for k in ("B1", "B2"))
    assert (b1, b2) == (c2, c1)
    assert (b1, b2) != (c1, c2)


def test_b_term_yt2_squared_part():
    B, X, Y = (RationalExpr.symbol(symbols.coeff(n)) for n in ("B", "X", "Y"))
    f = B * jets.jet(2, False) ** 2 / (Y - X * jets.jet(1, False))
    g = inv.transform_equation(f)
    b1, b2 = inv.derived_b_tilde()
    q2 = RationalExpr(g.num).num.collect([symbols.jet(2)])[((symbols.jet(2), 2),)]
    assert RationalExpr(q2, g.den) == (b1 + b2 * p) / (inv.class_denominator_image() * V)


def test_omega_value_and_relation():
    omega = inv.omega_necessary_condition()
    assert omega == (Bo + 3 * Xo) * jets.det_s() / x01
    assert omega.substitute({symbols.coeff("B", True): -3 * Xo}) == 0


def test_omega_concrete():
    # B = 0, X = 1, det S = 2 with x01 = 1
    binds = {symbols.coeff("B", True): RationalExpr(0), symbols.coeff("X", True): RationalExpr(1),
             symbols.phi("x", 1, 0): RationalExpr(2), symbols.phi("x", 0, 1): RationalExpr(1),
             symbols.phi("y", 1, 0): RationalExpr(0), symbols.phi("y", 0, 1): RationalExpr(1)}
    assert jets.det_s().substitute(binds) == 2
    assert inv.omega_necessary_condition().substitute(binds) == 6


def test_membership_examples():
    r = inv.class_membership(RationalExpr(0))
    assert r.in_class
    assert r.coefficients["Y"] == 1
    assert all(v.is_zero() for k, v in r.coefficients.items() if k != "Y")

    r = inv.class_membership(q ** 3)
    assert not r.in_class
    assert r.obstructions[0].detail == "yt2-degree 3 exceeds 2"


def test_membership_of_transformed_zero():
    r = inv.class_membership(inv.transform_equation(0), theorem1=True)
    assert r.in_class
    c = r.coefficients
    assert c["B"] == -3 * c["X"]
    assert c["B"] / (c["Y"] - c["X"] * p) == 3 * x01 / V
    assert (c["X"] / x01).free_of([symbols.jet(1)])


def test_membership_obstructions():
    assert not inv.class_membership(1 / (1 + p ** 2)).in_class
    assert not inv.class_membership(1 / q).in_class
    assert not inv.class_membership(q * p ** 3).in_class
    r = inv.class_membership(q ** 2 / (1 - p), theorem1=True)
    assert not r.in_class and r.obstructions[0].kind == "theorem1"


def test_theorem1_certificate():
    cert = inv.theorem1_closure_check()
    assert cert.ok
    assert cert.identities["B~ = -3 X~"]
    assert cert.provenance == "artifact-derived"
    assert set(cert.laws) == set("BPQRSLKMNTXY")


def test_free_b_is_refuted_with_residue():
    with pytest.raises(inv.ClosureRefutedError) as info:
        inv.theorem1_closure_check(impose_relation=False)
    ob = [o for o in info.value.obstructions if o.kind == "ydd-residue"][0]
    assert ob.residue == inv.omega_claimed() * ob.gauge_factor
    coeff_syms = {symbols.coeff(n, True) for n in "BXY"} | {symbols.jet(1), symbols.jet(2)}
    assert ob.gauge_factor.free_of(coeff_syms)
    assert not ob.gauge_factor.is_zero()


def test_second_order_certificates():
    certs = inv.second_order_closure_checks()
    assert [c.class_name for c in certs] == [inv.CUBIC_SECOND_ORDER.name, inv.POINT_EXPANSION.name]
    assert all(c.ok for c in certs)


def test_swap_keeps_free_motion():
    g = inv.transform_equation(0, inv.swap_map(), order=2)
    assert g == 0
    r = inv.class_membership(g, inv.CUBIC_SECOND_ORDER)
    assert r.in_class and all(v.is_zero() for v in r.coefficients.values())


def test_degenerate_map():
    m = inv.PointMap(parse_expression("xt + yt"), parse_expression("2*xt + 2*yt"))
    with pytest.raises(DegenerateMapError):
        inv.transform_equation(0, m)
    m = inv.PointMap(parse_expression("xt^2"), parse_expression("yt"), base=(0, 1))
    with pytest.raises(DegenerateMapError):
        inv.transform_equation(0, m)


def test_rejects_third_derivative_in_rhs():
    with pytest.raises(ValueError):
        inv.transform_equation(jets.jet(3, False))


def test_gauge_invariance():
    rng = random.Random(2024)
    sids = [XT, YT]
    for _ in range(50):
        c = class_coeffs(rng, inv.THIRD_ORDER.names, sids)
        lam = RationalExpr(0)
        while lam.is_zero():
            lam = RationalExpr(rng.randint(-3, 3)) + rng.randint(-2, 2) * RationalExpr.symbol(XT) \
                + rng.randint(-2, 2) * RationalExpr.symbol(YT) ** 2
        scaled = {k: v * lam for k, v in c.items()}
        g = inv.build_rhs(inv.THIRD_ORDER, c, tilde_jets=True)
        r1 = inv.class_membership(g)
        r2 = inv.class_membership(inv.build_rhs(inv.THIRD_ORDER, scaled, tilde_jets=True))
        assert r1.in_class and r2.in_class
        assert r1.coefficients == r2.coefficients
        assert r1.rebuild() == g


def test_round_trip_second_order():
    rng = random.Random(7)
    for pattern in (inv.CUBIC_SECOND_ORDER, inv.POINT_EXPANSION):
        for _ in range(10):
            c = class_coeffs(rng, pattern.names, [XT, YT])
            g = inv.build_rhs(pattern, c, tilde_jets=True)
            r = inv.class_membership(g, pattern)
            assert r.in_class and r.rebuild() == g


def test_identity_fixed_point():
    rng = random.Random(11)
    xs, ys = symbols.var("x"), symbols.var("y")
    for _ in range(20):
        c = class_coeffs(rng, inv.THIRD_ORDER.names, [xs, ys])
        f = inv.build_rhs(inv.THIRD_ORDER, c)
        assert inv.transform_equation(f, inv.identity_map()) == inv.tilde(f)


_TEMPLATES = ["x*y2 + y1^2 + y", "y2^2/(y - x*y1 + 3)", "y1^3 - 2*x*y", "(y2 + x)/(1 + y1^2)"]


def test_concrete_composition():
    rng = random.Random(99)
    for case in range(25):
        m1, m2 = random_point_map(rng), random_point_map(rng)
        f = parse_expression(rng.choice(_TEMPLATES))
        lhs = inv.transform_equation(f, inv.compose(m1, m2))
        rhs = inv.transform_equation(inv.untilde(inv.transform_equation(f, m1)), m2)
        for _ in range(20):
            point = {XT: F(rng.randint(-5, 5), rng.randint(1, 4)),
                     YT: F(rng.randint(-5, 5), rng.randint(1, 4)),
                     symbols.jet(1): F(rng.randint(-5, 5), rng.randint(1, 4)),
                     symbols.jet(2): F(rng.randint(-5, 5), rng.randint(1, 4))}
            try:
                value = lhs.value(point)
            except ZeroDivisionError:
                continue
            assert value == rhs.value(point), case
            break
        else:
            pytest.fail(f"no regular point found for case {case}")
