"""Hand-transcribed reference closed forms and the harness that compares
them with the derived ones.

The strings below are typed term by term from the reference displays, keeping
their term order, in the ASCII grammar of :mod:`pointjets.parsing` (``x10`` is
x_{1.0}, ``yt1`` is the first jet of the new curve).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping

from . import jets
from .jets import CoefficientTable
from .parsing import parse_expression
from .symexpr import RationalExpr, mono_str, symbols

CLAIMED_SOURCE: dict[str, tuple[str, str]] = {
    "a1": ("transcribed a1", "-(x10 + x01*yt1)*(y10*x01 - x10*y01)"),
    "a2": ("transcribed a2", "3*x01*(y10*x01 - x10*y01)"),
    "a3": ("transcribed a3", "-6*y01*x10*x02 - 3*y11*x01^2 + 3*y10*x02*x01"
                  " + 3*y02*x10*x01 + 3*y01*x11*x01"),
    "a4": ("transcribed a4", "9*y10*x01*x11 - 3*y20*x01^2 + 3*y01*x20*x01"
                  " + 3*y02*x10^2 - 3*y10*x02*x10 - 9*y01*x11*x10"),
    # the reference spells the second term's partial y_{1,0}
    "a5": ("transcribed a5", "-3*y10*x11*x10 + 6*y10*x20*x01 - 3*y01*x10*x20"
                  " + 3*y11*x10^2 - 3*y20*x10*x01"),
    "a6": ("transcribed a6", "3*y01*x02^2 - 3*y02*x01*x02 + y03*x01^2 - y01*x03*x01"),
    "a7": ("transcribed a7", "-3*y01*x12*x01 - 3*y02*x10*x02 - y01*x03*x10"
                   " - 6*y11*x02*x01 + 2*y03*x10*x01 + 3*y10*x02^2"
                   " - y10*x03*x01 - 6*y02*x11*x01 + 12*y01*x11*x02 + 3*y12*x01^2"),
    "a8": ("transcribed a8", "-3*y01*x21*x01 - 6*y02*x11*x10 - y10*x03*x10"
                   " - 3*y01*x12*x10 + 12*y01*x11^2 - 3*y02*x20*x01"
                   " - 3*y20*x02*x01 - 6*y11*x02*x10 + 6*y01*x20*x02"
                   " - 12*y11*x01*x11 + 6*y12*x10*x01 + y03*x10^2"
                   " + 3*y21*x01^2 - 3*y10*x12*x01 + 12*y10*x11*x02"),
    "a9": ("transcribed a9", "-3*y10*x12*x10 + 12*y01*x20*x11 + 3*y12*x10^2"
                   " + y30*x01^2 - 6*y20*x11*x01 - 3*y01*x21*x10"
                   " - 6*y11*x20*x01 - 3*y10*x21*x01 - y01*x30*x01"
                   " - 3*y02*x20*x10 + 6*y10*x20*x02 + 6*y21*x10*x01"
                   " - 12*y11*x10*x11 + 12*y10*x11^2 - 3*y20*x02*x10"),
    "a10": ("transcribed a10", "-3*y20*x01*x20 + 12*y10*x20*x11 - 6*y20*x11*x10"
                    " - 6*y11*x20*x10 - 3*y10*x21*x10 - y01*x30*x10"
                    " + 2*y30*x10*x01 + 3*y01*x20^2 + 3*y21*x10^2 - y10*x30*x01"),
    "a11": ("transcribed a11", "-y10*x30*x10 + y30*x10^2 + 3*y10*x20^2 - 3*y20*x10*x20"),
}

# second derivative rule as displayed: two fractions over (x10 + x01*yt1)^2, ^3
CLAIMED_YPP = ("(y20 + 2*y11*yt1 + y02*yt1^2 + y01*yt2)/(x10 + x01*yt1)^2"
               " - (y10 + y01*yt1)*(x20 + 2*x11*yt1 + x02*yt1^2 + x01*yt2)/(x10 + x01*yt1)^3")

CLAIMED_YP = "(y10 + y01*yt1)/(x10 + x01*yt1)"

# the yt2^2 coefficient pair of the transformed class member, as displayed
CLAIMED_B_TILDE = {
    "B1": "3*x01*(Y_o*x01 - X_o*y01)",
    "B2": "3*x01*(Y_o*x10 - X_o*y10) + B_o*(x10*y01 - x01*y10)",
}

CLAIMED_OMEGA = "(B_o + 3*X_o)*(x10*y01 - x01*y10)"


@dataclass(frozen=True)
class ClaimedTable:
    table: CoefficientTable
    provenance: dict[str, str]

    def items(self) -> list[tuple[str, RationalExpr]]:
        return self.table.items()


def claimed_coefficients() -> ClaimedTable:
    values = {k: parse_expression(text) for k, (_, text) in CLAIMED_SOURCE.items()}
    return ClaimedTable(CoefficientTable(**values), {k: src for k, (src, _) in CLAIMED_SOURCE.items()})


def serialize_table(table: CoefficientTable) -> str:
    """One ``name = canonical-expression`` record per line."""
    return "".join(f"{k} = {v}\n" for k, v in table.items())


def table_checksum(table: CoefficientTable) -> str:
    return hashlib.sha256(serialize_table(table).encode()).hexdigest()


def claimed_y3zero_rhs(table: CoefficientTable | None = None) -> RationalExpr:
    """Right-hand side of the transformed y''' = 0 in the reference two-line shape."""
    t = table if table is not None else claimed_coefficients().table
    x10, x01, y10, y01 = (jets.phi(n, i, j) for n, i, j in
                          (("x", 1, 0), ("x", 0, 1), ("y", 1, 0), ("y", 0, 1)))
    p, q = jets.jet(1), jets.jet(2)
    v = x10 + x01 * p
    lead = 3 * x01 * q * q / v
    rest = RationalExpr(0)
    for k, m in zip(range(3, 12), t.jet_monomials()[2:]):
        rest = rest + t[k] * m
    return lead + rest / (v * (y10 * x01 - x10 * y01))


# -- comparison ------------------------------------------------------------------

@dataclass
class CoefficientCheck:
    name: str
    source: str
    status: str
    difference: list[str] = field(default_factory=list)
    verdict: str | None = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "source": self.source, "status": self.status}
        if self.status != "match":
            d["difference_monomials"] = self.difference
            d["oracle_verdict"] = self.verdict
        return d


@dataclass
class VerificationReport:
    checks: list[CoefficientCheck]
    oracle_cases: int = 0
    seed: int | None = None

    @property
    def matches(self) -> int:
        return sum(c.status == "match" for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.matches == len(self.checks)

    def mismatches(self) -> list[CoefficientCheck]:
        return [c for c in self.checks if c.status != "match"]

    def as_dict(self) -> dict:
        return {
            "matches": self.matches,
            "total": len(self.checks),
            "oracle_cases": self.oracle_cases,
            "seed": self.seed,
            "coefficients": [c.as_dict() for c in self.checks],
        }


def _difference_monomials(diff: RationalExpr) -> list[str]:
    out = []
    for m, c in diff.num.terms:
        out.append(f"{c}*{mono_str(m)}" if m else str(c))
    if not diff.den.is_constant():
        out.append(f"/ ({diff.den})")
    return out


def compare_tables(derived: CoefficientTable, claimed: CoefficientTable,
                   provenance: Mapping[str, str] | None = None, *,
                   seed: int = 0, oracle_cases: int = 20) -> VerificationReport:
    """Entry-wise canonical comparison, with oracle arbitration of mismatches."""
    checks = []
    for (name, d), (_, c) in zip(derived.items(), claimed.items()):
        diff = d - c
        src = (provenance or {}).get(name, "")
        if diff.is_zero():
            checks.append(CoefficientCheck(name, src, "match"))
        else:
            checks.append(CoefficientCheck(name, src, "mismatch", _difference_monomials(diff)))
    report = VerificationReport(checks, seed=seed)
    bad = report.mismatches()
    if bad:
        from .numeric_oracle import arbitrate
        for chk in bad:
            single = derived.replace(**{chk.name: getattr(claimed, chk.name)})
            chk.verdict = arbitrate(derived, single, seed=seed, cases=oracle_cases)
        report.oracle_cases = oracle_cases
    return report


def verify_prolongation(seed: int = 0, oracle_cases: int = 20) -> VerificationReport:
    claimed = claimed_coefficients()
    return compare_tables(jets.derived_coefficients(), claimed.table, claimed.provenance,
                          seed=seed, oracle_cases=oracle_cases)


# -- class right-hand side -------------------------------------------------------

THIRD_ORDER_SLOTS = ("B", "P", "Q", "R", "S", "L", "K", "M", "N", "T", "X", "Y")


class DegenerateClassError(ValueError):
    """Both X and Y vanish, so the class denominator is zero."""


def theorem1_rhs(c, tilde: bool = False) -> RationalExpr:
    """(B y2^2 + P y2 y1^2 + Q y2 y1 + R y2 + S y1^5 + ... + T) / (Y - X y1).

    ``c`` is an :class:`~pointjets.invariance.OdeClassCoeffs`; with its
    ``theorem1`` flag set, B is replaced by -3X.
    """
    v = {name: RationalExpr.coerce(getattr(c, name)) for name in THIRD_ORDER_SLOTS}
    if v["X"].is_zero() and v["Y"].is_zero():
        raise DegenerateClassError("X and Y are both identically zero")
    if c.theorem1:
        v["B"] = -3 * v["X"]
    p, q = jets.jet(1, tilde), jets.jet(2, tilde)
    num = (v["B"] * q * q + v["P"] * q * p * p + v["Q"] * q * p + v["R"] * q
           + v["S"] * p ** 5 + v["L"] * p ** 4 + v["K"] * p ** 3 + v["M"] * p * p
           + v["N"] * p + v["T"])
    return num / (v["Y"] - v["X"] * p)


def opaque(name: str, composed: bool = False) -> RationalExpr:
    return RationalExpr.symbol(symbols.coeff(name, composed))
