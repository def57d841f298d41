"""Acceptance criteria, one printed PASS/FAIL line per criterion.

Every check is exact (tolerance zero). Criteria that cannot be met are
reported as failures rather than relaxed.
"""

from __future__ import annotations

import time

import pytest

import test_invariance
import test_jets
import test_symexpr
from pointjets import invariance as inv, jets, numeric_oracle as no
from pointjets.paper_formulas import (CLAIMED_OMEGA, CLAIMED_YPP, claimed_coefficients,
                                      claimed_y3zero_rhs, compare_tables, verify_prolongation)
from pointjets.parsing import parse_expression
from pointjets.symexpr import symbols

x10, x01, y10, y01 = (jets.phi(n, i, j) for n, i, j in
                      (("x", 1, 0), ("x", 0, 1), ("y", 1, 0), ("y", 0, 1)))


def _report(capsys, number: int, title: str, ok: bool, elapsed: float, limit: float | None,
            detail: str = "") -> None:
    within = limit is None or elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"criterion {number} {status}: {title} [{elapsed:.2f} s{budget}]"
    if detail:
        line += f" {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, detail
    assert within, f"took {elapsed:.2f} s, limit {limit} s"


def test_criterion_1_coefficients(capsys):
    start = time.perf_counter()
    report = verify_prolongation(seed=0, oracle_cases=20)
    # the arbitration path must also work: corrupt one entry and expect a named mismatch
    claimed = claimed_coefficients().table
    bad = claimed.replace(a4=claimed.a4 + x01)
    arb = compare_tables(jets.derived_coefficients(), bad, seed=0, oracle_cases=20)
    mism = arb.mismatches()
    arbitrated = (len(mism) == 1 and mism[0].name == "a4" and mism[0].verdict == "derived"
                  and bool(mism[0].difference))
    elapsed = time.perf_counter() - start
    ok = report.matches == 11 and report.ok and arbitrated
    _report(capsys, 1, "coefficient verification", ok, elapsed, 10,
            f"{report.matches}/11 matches, arbitration {'ok' if arbitrated else 'broken'}")


def test_criterion_2_second_derivative(capsys):
    start = time.perf_counter()
    ok = jets.prolong(2).ypp == parse_expression(CLAIMED_YPP)
    _report(capsys, 2, "second-derivative rule", ok, time.perf_counter() - start, None)


def test_criterion_3_residue_identity(capsys):
    start = time.perf_counter()
    omega = inv.omega_necessary_condition()
    claimed = parse_expression(CLAIMED_OMEGA)
    identity = omega == claimed
    vanishes = omega.substitute({symbols.coeff("B", True): -3 * parse_expression("X_o")}) == 0
    ratio = omega / claimed if not claimed.is_zero() else None
    detail = f"identity {identity}, vanishes under B = -3X {vanishes}, derived/claimed = {ratio}"
    _report(capsys, 3, "residue identity", identity and vanishes,
            time.perf_counter() - start, None, detail)


def test_criterion_4_y3zero_transform(capsys):
    start = time.perf_counter()
    g = inv.transform_equation(0)
    q2 = g.num.collect([symbols.jet(2)])[((symbols.jet(2), 2),)]
    lead = type(g)(q2, g.den)
    ok = g == claimed_y3zero_rhs() and lead == 3 * x01 / jets.dx()
    _report(capsys, 4, "transform of y''' = 0", ok, time.perf_counter() - start, None,
            f"leading coefficient {lead}")


def test_criterion_5_theorem1_closure(capsys):
    start = time.perf_counter()
    cert = inv.theorem1_closure_check()
    refuted, gauge = False, None
    try:
        inv.theorem1_closure_check(impose_relation=False)
    except inv.ClosureRefutedError as exc:
        obs = [o for o in exc.obstructions if o.kind == "ydd-residue"]
        refuted = bool(obs) and obs[0].residue == inv.omega_claimed() * obs[0].gauge_factor
        gauge = obs[0].gauge_factor if obs else None
    elapsed = time.perf_counter() - start
    ok = cert.ok and cert.identities.get("B~ = -3 X~", False) and refuted
    _report(capsys, 5, "closure with B = -3X, refutation with free B", ok, elapsed, 60,
            f"gauge factor {gauge}")


def test_criterion_6_second_order(capsys):
    start = time.perf_counter()
    certs = inv.second_order_closure_checks()
    ok = len(certs) == 2 and all(c.ok for c in certs)
    _report(capsys, 6, "second-order classes closed", ok, time.perf_counter() - start, 30,
            ", ".join(f"{c.class_name}: {c.ok}" for c in certs))


def test_criterion_7_oracle(capsys):
    start = time.perf_counter()
    pro = no.prolongation_batch(seed=0, cases=100)
    y3 = no.y3zero_batch(seed=0, cases=25)
    derived = jets.derived_coefficients()
    caught = [name for name, _ in derived.items()
              if not no.prolongation_batch(seed=0, cases=20, table=no.corrupt(derived, name)).ok]
    ok = pro.ok and y3.ok and len(caught) == 11
    _report(capsys, 7, "oracle suite", ok, time.perf_counter() - start, 60,
            f"prolongation {pro.ok}, y3zero {y3.ok}, faults detected {len(caught)}/11")


@pytest.mark.parametrize("name", ["leibniz", "substitution homomorphism", "gauge invariance",
                                  "identity fixed point", "composition"])
def test_criterion_8_properties(name, capsys):
    run = {
        "leibniz": test_jets.test_leibniz,
        "substitution homomorphism": test_symexpr.test_substitution_homomorphism,
        "gauge invariance": test_invariance.test_gauge_invariance,
        "identity fixed point": test_invariance.test_identity_fixed_point,
        "composition": test_invariance.test_concrete_composition,
    }[name]
    start = time.perf_counter()
    try:
        run()
        ok, detail = True, ""
    except AssertionError as exc:
        ok, detail = False, str(exc)[:200]
    _report(capsys, 8, f"property suite: {name}", ok, time.perf_counter() - start, None, detail)
