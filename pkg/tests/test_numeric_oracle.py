from __future__ import annotations

import ast
import inspect
from fractions import Fraction as F

import pytest

from pointjets import jets, numeric_oracle as no
from pointjets.numeric_oracle import ConcreteCurve, ConcreteMap
from pointjets.paper_formulas import claimed_y3zero_rhs

PARABOLA = ConcreteCurve((F(0), F(0), F(1)))


def test_identity_parabola():
    m = ConcreteMap(no.IDENTITY.chi, no.IDENTITY.psi, (F(1), F(1)))
    assert no.parametric_jets(m, PARABOLA) == (2, 2, 0)


def test_swap_parabola():
    m = ConcreteMap(no.SWAP.chi, no.SWAP.psi, (F(1), F(1)))
    assert no.parametric_jets(m, PARABOLA) == (F(1, 2), F(-1, 4), F(3, 8))


def test_affine_map_sends_lines_to_lines():
    m = ConcreteMap({(1, 0): F(2), (0, 1): F(-1), (0, 0): F(5)},
                    {(1, 0): F(3), (0, 1): F(4)}, (F(2), F(0)))
    line = ConcreteCurve((F(-3), F(7, 2)))
    _, ypp, yppp = no.parametric_jets(m, line)
    assert ypp == 0 and yppp == 0


def test_vertical_tangent():
    m = ConcreteMap({(0, 1): F(1)}, {(1, 0): F(1)}, (F(0), F(0)))
    with pytest.raises(no.VerticalTangentError):
        no.parametric_jets(m, PARABOLA)


def test_identity_always_consistent():
    for curve in (PARABOLA, ConcreteCurve((F(1), F(-2), F(0), F(3), F(1, 2)))):
        m = ConcreteMap(no.IDENTITY.chi, no.IDENTITY.psi, (F(-1), F(0)))
        assert no.check_prolongation_at(m, curve)


def test_prolongation_batch():
    res = no.prolongation_batch(seed=0, cases=100)
    assert res.ok, res.failures


def test_seeded_determinism():
    assert no.random_case(7, 3) == no.random_case(7, 3)
    assert no.random_case(7, 3) != no.random_case(8, 3)
    assert no.y3zero_case(5, 1) == no.y3zero_case(5, 1)


@pytest.mark.parametrize("name", [f"a{k}" for k in range(1, 12)])
def test_fault_injection_detected(name):
    bad = no.corrupt(jets.derived_coefficients(), name)
    assert not no.prolongation_batch(seed=0, cases=20, table=bad).ok


def _swap_at(xt, yt):
    return ConcreteMap(no.SWAP.chi, no.SWAP.psi, (F(xt), F(yt)))


def test_y3zero_identity_and_swap():
    # y = x^2 re-expanded at each sample: slope 2*x0, curvature 1
    for xt0 in (F(1), F(-2), F(1, 3)):
        local = ConcreteCurve((F(0), 2 * xt0, F(1)))
        assert no.check_y3zero_mapping(no.IDENTITY, local, [(xt0, xt0 ** 2)])
    for x0 in (F(1), F(3), F(-1, 2)):
        # swap: the sample (xt, yt) = (x0^2, x0) lies over (x0, x0^2)
        local = ConcreteCurve((F(0), 2 * x0, F(1)))
        assert no.check_y3zero_mapping(no.SWAP, local, [(x0 ** 2, x0)])


def test_y3zero_batch_with_both_forms():
    assert no.y3zero_batch(seed=0, cases=25).ok
    assert no.y3zero_batch(seed=0, cases=25, rhs=claimed_y3zero_rhs()).ok


def test_y3zero_wrong_rhs_rejected():
    rhs = no.derived_y3zero_rhs() + jets.jet(1)
    assert not no.y3zero_batch(seed=0, cases=5, rhs=rhs).ok


def test_oracle_is_independent_of_transcriptions():
    tree = ast.parse(inspect.getsource(no))
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            imported.update(a.name for a in node.names)
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    assert not any("paper_formulas" in name for name in imported)
