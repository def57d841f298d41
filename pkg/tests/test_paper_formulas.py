from __future__ import annotations

from importlib.resources import files

import pytest

from pointjets import jets, paper_formulas as pf
from pointjets.invariance import OdeClassCoeffs
from pointjets.paper_formulas import DegenerateClassError, theorem1_rhs
from pointjets.symexpr import RationalExpr, symbols

x10, x01, y10, y01 = (jets.phi(n, i, j) for n, i, j in
                      (("x", 1, 0), ("x", 0, 1), ("y", 1, 0), ("y", 0, 1)))
x20, x30, y20, y30 = (jets.phi(n, i, j) for n, i, j in
                      (("x", 2, 0), ("x", 3, 0), ("y", 2, 0), ("y", 3, 0)))
p = jets.jet(1)
yp, ypp = jets.jet(1, False), jets.jet(2, False)


def test_claimed_entries():
    t = pf.claimed_coefficients().table
    assert t.a2 == 3 * x01 * (y10 * x01 - x10 * y01)
    assert t.a1 == -(x10 + x01 * p) * (y10 * x01 - x10 * y01)
    assert t.a11 == -y10 * x30 * x10 + y30 * x10 ** 2 + 3 * y10 * x20 ** 2 - 3 * y20 * x10 * x20


def test_claimed_entries_are_polynomial():
    for name, a in pf.claimed_coefficients().items():
        assert a.is_polynomial()
        jet_vars = a.variables() & {symbols.jet(k) for k in (1, 2, 3)}
        assert jet_vars == (set() if name != "a1" else {symbols.jet(1)})


def test_golden_table_and_checksum():
    table = pf.claimed_coefficients().table
    data = files("pointjets").joinpath("data")
    assert pf.serialize_table(table) == data.joinpath("claimed_table.txt").read_text()
    assert pf.table_checksum(table) == data.joinpath("claimed_table.sha256").read_text().split()[0]


def test_verify_all_match():
    report = pf.verify_prolongation()
    assert report.matches == 11
    assert report.ok
    assert report.oracle_cases == 0


def test_corrupted_entry_is_arbitrated():
    derived = jets.derived_coefficients()
    claimed = pf.claimed_coefficients().table
    bad = claimed.replace(a7=claimed.a7 + x10 * y01)
    report = pf.compare_tables(derived, bad, seed=1, oracle_cases=20)
    assert [c.name for c in report.mismatches()] == ["a7"]
    chk = report.mismatches()[0]
    assert chk.verdict == "derived"
    assert chk.difference == ["-1*x10*y01"]
    assert report.as_dict()["coefficients"][6]["oracle_verdict"] == "derived"


def test_identity_specialization_agrees():
    ident = {sid: RationalExpr(0) for sid in jets.context().phi_symbols}
    ident[symbols.phi("x", 1, 0)] = RationalExpr(1)
    ident[symbols.phi("y", 0, 1)] = RationalExpr(1)
    d = jets.derived_coefficients().substitute(ident)
    c = pf.claimed_coefficients().table.substitute(ident)
    assert d == c
    assert d.a1 == 1


def _coeffs(**kw) -> OdeClassCoeffs:
    return OdeClassCoeffs.from_mapping(kw)


def test_theorem1_rhs_examples():
    assert theorem1_rhs(_coeffs(Y=1)) == 0
    assert theorem1_rhs(_coeffs(Y=1, R=1)) == ypp
    X = RationalExpr.symbol(symbols.coeff("X"))
    c = OdeClassCoeffs.opaque(theorem1=True)
    rhs = theorem1_rhs(c)
    num_q2 = rhs.num.collect([symbols.jet(2, False)])[((symbols.jet(2, False), 2),)]
    Y = RationalExpr.symbol(symbols.coeff("Y"))
    assert RationalExpr(num_q2, rhs.den) == -3 * X / (Y - X * yp)


def test_theorem1_rhs_degenerate():
    with pytest.raises(DegenerateClassError):
        theorem1_rhs(_coeffs(B=1))


def test_theorem1_rhs_linear_in_each_slot():
    base = OdeClassCoeffs.opaque()
    den = RationalExpr.symbol(symbols.coeff("Y")) - RationalExpr.symbol(symbols.coeff("X")) * yp
    for name in pf.THIRD_ORDER_SLOTS[:-2]:
        values = base.as_dict()
        values[name] = values[name] * 2
        doubled = theorem1_rhs(OdeClassCoeffs.from_mapping(values))
        values[name] = RationalExpr(0)
        without = theorem1_rhs(OdeClassCoeffs.from_mapping(values))
        single = theorem1_rhs(base) - without
        assert doubled - without == 2 * single
        assert (single * den).is_polynomial()


def test_provenance_labels():
    assert pf.claimed_coefficients().provenance["a5"] == "transcribed a5"
