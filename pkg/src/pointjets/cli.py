"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a check failure or refutation,
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import invariance, jets, numeric_oracle, paper_formulas
from .parsing import ParseError, parse_expression
from .symexpr import RationalExpr, SymExprError, symbols

SCHEMA_VERSION = 1

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "seed", "checks", "verdict", "wall_time"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "array", "items": {"type": "string"}},
        "seed": {"type": "integer"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "details"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail"]},
                    "details": {"type": "object"},
                },
            },
        },
        "verdict": {"enum": ["pass", "fail", "error"]},
        "wall_time": {"type": "number", "minimum": 0},
    },
}


class UsageError(Exception):
    """Bad input; maps to exit code 2."""


@dataclass
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail",
                "details": self.details}


@dataclass
class RunReport:
    command: list[str]
    seed: int
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0
    error: str | None = None

    @property
    def verdict(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if all(c.passed for c in self.checks) else "fail"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.verdict]

    def as_dict(self) -> dict:
        d = {"schema_version": SCHEMA_VERSION, "command": self.command, "seed": self.seed,
             "checks": [c.as_dict() for c in self.checks], "verdict": self.verdict,
             "wall_time": round(self.wall_time, 6)}
        if self.error is not None:
            d["checks"] = d["checks"] + [{"name": "input", "status": "fail",
                                           "details": {"error": self.error}}]
        return d


# -- map files ---------------------------------------------------------------------------

_ASSIGN = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*(.+?)\s*$")
_BASE = re.compile(r"^\(\s*([^,]+?)\s*,\s*([^,]+?)\s*\)$")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact rational: {text!r}") from exc


def parse_map_text(text: str, forward: bool = False) -> invariance.PointMap:
    """Parse ``x = ...``, ``y = ...`` and an optional ``base = (r, s)``.

    With ``forward`` the file gives ``xt = ...``, ``yt = ...`` in x, y and the
    map is inverted exactly (affine or triangular forms only).
    """
    lhs = ("xt", "yt") if forward else ("x", "y")
    exprs: dict[str, RationalExpr] = {}
    base = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _ASSIGN.match(line)
        if not m:
            raise UsageError(f"line {lineno}: expected 'name = value'")
        name, rhs = m.groups()
        if name == "base":
            b = _BASE.match(rhs)
            if not b:
                raise UsageError(f"line {lineno}: base must look like (r, s)")
            base = (_rational(b.group(1)), _rational(b.group(2)))
        elif name in lhs:
            if name in exprs:
                raise UsageError(f"line {lineno}: {name} assigned twice")
            exprs[name] = parse_expression(rhs)
        else:
            raise UsageError(f"line {lineno}: unexpected name {name!r}")
    missing = [n for n in lhs if n not in exprs]
    if missing:
        raise UsageError(f"map file lacks {', '.join(missing)}")
    allowed = {symbols.var(n) for n in (("x", "y") if forward else ("xt", "yt"))}
    for n in lhs:
        extra = exprs[n].variables() - allowed
        if extra:
            names = ", ".join(sorted(symbols.symbol(s).text for s in extra))
            raise UsageError(f"{n} may only depend on {', '.join(sorted(symbols.symbol(s).text for s in allowed))}; found {names}")
    if forward:
        chi, psi = invert_forward(exprs["xt"], exprs["yt"])
    else:
        chi, psi = exprs["x"], exprs["y"]
    pm = invariance.PointMap(chi, psi, "file", base)
    if base is not None:
        point = {symbols.var("xt"): base[0], symbols.var("yt"): base[1]}
        try:
            det = pm.det_s().value(point)
        except ZeroDivisionError as exc:
            raise UsageError(f"map is singular at base {base}") from exc
        if det == 0:
            raise UsageError(f"det S vanishes at base {base}")
    return pm


def _linear_parts(e: RationalExpr, sids: Sequence[int]) -> tuple[list[Fraction], Fraction] | None:
    """Coefficients of an affine polynomial with constant coefficients."""
    if not e.is_polynomial():
        return None
    coeffs = [Fraction(0)] * len(sids)
    const = Fraction(0)
    for mono, c in e.num.terms:
        if not mono:
            const = Fraction(c)
        elif len(mono) == 1 and mono[0][1] == 1 and mono[0][0] in sids:
            coeffs[list(sids).index(mono[0][0])] = Fraction(c)
        else:
            return None
    den = e.den.constant_value()
    return [c / den for c in coeffs], const / den


def invert_forward(f: RationalExpr, g: RationalExpr) -> tuple[RationalExpr, RationalExpr]:
    """Exact inverse of ``xt = f(x, y), yt = g(x, y)``.

    Supported: affine maps, and triangular maps where one new coordinate is
    affine in a single old one and the other is affine in the remaining old
    coordinate with a constant slope.
    """
    x, y = symbols.var("x"), symbols.var("y")
    xt, yt = RationalExpr.symbol(symbols.var("xt")), RationalExpr.symbol(symbols.var("yt"))
    lf, lg = _linear_parts(f, (x, y)), _linear_parts(g, (x, y))
    if lf and lg:
        (a, b), c = lf
        (d, e), h = lg
        det = a * e - b * d
        if det == 0:
            raise UsageError("forward map is singular")
        u, v = xt - c, yt - h
        return (e * u - b * v) / det, (a * v - d * u) / det
    for first, second, p, q in ((f, g, x, y), (g, f, x, y), (f, g, y, x), (g, f, y, x)):
        target_first = xt if first is f else yt
        target_second = yt if first is f else xt
        lin = _linear_parts(first, (p,))
        if not lin or lin[0][0] == 0:
            continue
        (a,), c = lin
        # second must be slope*q + poly(p) with constant slope
        if not second.is_polynomial() or second.num.degree(q) != 1:
            continue
        parts = second.num.univariate(q)
        slope = RationalExpr(parts[1], second.den)
        rest = RationalExpr(parts.get(0, RationalExpr(0).num), second.den)
        if not slope.is_constant() or slope.is_zero() or q in rest.variables():
            continue
        p_val = (target_first - c) / a
        q_val = (target_second - rest.substitute({p: p_val})) / slope
        return (p_val, q_val) if p == x else (q_val, p_val)
    raise UsageError("forward map is neither affine nor triangular; give the inverse map instead")


def load_map(spec: str, forward: bool = False) -> invariance.PointMap | None:
    if spec == "general":
        return None
    if spec == "identity":
        return invariance.identity_map()
    if spec == "swap":
        return invariance.swap_map()
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"map file not found: {spec}")
    return parse_map_text(path.read_text(), forward=forward)


# -- commands ------------------------------------------------------------------------------

def _str_map(d) -> dict[str, str]:
    return {k: str(v) for k, v in d.items()}


def cmd_verify_paper(args, report: RunReport) -> None:
    pv = paper_formulas.verify_prolongation(seed=args.seed, oracle_cases=args.oracle_cases)
    for chk in pv.checks:
        report.checks.append(Check(f"coefficient {chk.name}", chk.status == "match", chk.as_dict()))
    claimed = paper_formulas.claimed_coefficients()
    golden = golden_checksum()
    actual = paper_formulas.table_checksum(claimed.table)
    report.checks.append(Check("transcription checksum", golden == actual,
                               {"expected": golden, "actual": actual}))

    prol = jets.prolong(3)
    for name, derived, text in (("first-derivative rule", prol.yp, paper_formulas.CLAIMED_YP),
                                ("second-derivative rule", prol.ypp, paper_formulas.CLAIMED_YPP)):
        claim = parse_expression(text)
        report.checks.append(Check(name, derived == claim, {"derived": str(derived)}))

    omega = invariance.omega_necessary_condition()
    claim = invariance.omega_claimed()
    details = {"derived": str(omega), "claimed": str(claim)}
    if omega != claim and not claim.is_zero():
        details["derived_over_claimed"] = str(omega / claim)
    report.checks.append(Check("residue identity", omega == claim, details))
    xs, bs = symbols.coeff("X", True), symbols.coeff("B", True)
    relation = omega.substitute({bs: -3 * RationalExpr.symbol(xs)})
    report.checks.append(Check("residue vanishes under B = -3X", relation.is_zero(),
                               {"value": str(relation)}))

    b1, b2 = invariance.derived_b_tilde()
    c1, c2 = (parse_expression(paper_formulas.CLAIMED_B_TILDE[k]) for k in ("B1", "B2"))
    pair = {"derived_B1": str(b1), "derived_B2": str(b2)}
    if (b1, b2) == (c2, c1):
        pair["note"] = "derived pair equals the transcribed pair with B1 and B2 exchanged"
    report.checks.append(Check("yt2^2 coefficient pair", (b1, b2) == (c1, c2), pair))

    g = invariance.transform_equation(0)
    report.checks.append(Check("transform of y''' = 0", g == paper_formulas.claimed_y3zero_rhs(),
                               {"leading": "3*x01*yt2^2/(x10 + x01*yt1)"}))


def golden_checksum() -> str:
    from importlib.resources import files
    return files("pointjets").joinpath("data/claimed_table.sha256").read_text().split()[0]


def cmd_closure(args, report: RunReport) -> None:
    if args.order == 3:
        try:
            cert = invariance.theorem1_closure_check(impose_relation=not args.free_b)
        except invariance.ClosureRefutedError as exc:
            report.checks.append(Check("third-order closure", False,
                                       {"obstructions": [o.as_dict() for o in exc.obstructions]}))
            return
        certs = [cert]
    else:
        if args.free_b:
            raise UsageError("--free-b applies to --order 3 only")
        try:
            certs = invariance.second_order_closure_checks()
        except invariance.ClosureRefutedError as exc:
            report.checks.append(Check("second-order closure", False,
                                       {"obstructions": [o.as_dict() for o in exc.obstructions]}))
            return
    for cert in certs:
        report.checks.append(Check(f"closure of {cert.class_name}", cert.ok, cert.as_dict()))


def cmd_transform(args, report: RunReport) -> None:
    m = load_map(args.map, forward=args.forward)
    f = parse_expression(args.rhs)
    try:
        g = invariance.transform_equation(f, m, order=args.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report.checks.append(Check("transform", True, {"map": "general" if m is None else m.describe(),
                                                   "rhs": str(f), "transformed": str(g)}))


_PATTERNS = {"third": invariance.THIRD_ORDER, "cubic": invariance.CUBIC_SECOND_ORDER,
             "point-expansion": invariance.POINT_EXPANSION}


def cmd_check_class(args, report: RunReport) -> None:
    g = parse_expression(args.rhs)
    pattern = _PATTERNS[args.cls]
    if args.theorem1 and pattern is not invariance.THIRD_ORDER:
        raise UsageError("--theorem1 applies to the third-order class only")
    try:
        res = invariance.class_membership(g, pattern, theorem1=args.theorem1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report.checks.append(Check("membership", res.in_class, res.as_dict()))


def cmd_oracle(args, report: RunReport) -> None:
    batches = [numeric_oracle.prolongation_batch(args.seed, args.cases)]
    if args.y3zero_cases:
        batches.append(numeric_oracle.y3zero_batch(args.seed, args.y3zero_cases))
    for b in batches:
        report.checks.append(Check(b.name, b.ok, b.as_dict()))


# -- argument handling -----------------------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False),
                        help="emit the run report as JSON")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for oracle sampling")
    parser.add_argument("--quiet", action="store_true", default=d(False),
                        help="print only the verdict line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pointjets", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-paper", parents=[common],
                       help="compare derived formulas with the transcribed reference")
    p.add_argument("--oracle-cases", type=int, default=20)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("closure", parents=[common], help="closure certificates")
    p.add_argument("--order", type=int, choices=(2, 3), default=3)
    p.add_argument("--free-b", action="store_true",
                   help="leave B independent of X (expected to be refuted)")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("transform", parents=[common], help="transform a right-hand side")
    p.add_argument("--map", default="general",
                   help="map file, or one of: general, identity, swap")
    p.add_argument("--rhs", required=True)
    p.add_argument("--order", type=int, choices=(2, 3), default=3)
    p.add_argument("--forward", action="store_true",
                   help="map file gives xt, yt in terms of x, y")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("check-class", parents=[common], help="class membership")
    p.add_argument("--rhs", required=True)
    p.add_argument("--theorem1", action="store_true", help="also demand B = -3X")
    p.add_argument("--class", dest="cls", choices=sorted(_PATTERNS), default="third")
    p.set_defaults(func=cmd_check_class)

    p = sub.add_parser("oracle", parents=[common], help="exact numeric oracle batches")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--y3zero-cases", type=int, default=25)
    p.set_defaults(func=cmd_oracle)
    return parser


def _print_text(report: RunReport, quiet: bool, out) -> None:
    if not quiet:
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            print(f"{mark} {c.name}", file=out)
            for key, val in c.details.items():
                if isinstance(val, dict):
                    for k2, v2 in val.items():
                        print(f"    {k2} = {v2}", file=out)
                elif isinstance(val, list):
                    for item in val:
                        print(f"    {key}: {item}", file=out)
                else:
                    print(f"    {key}: {val}", file=out)
        if report.error:
            print(f"error: {report.error}", file=sys.stderr)
    passed = sum(c.passed for c in report.checks)
    print(f"verdict: {report.verdict} ({passed}/{len(report.checks)} checks passed)", file=out)


def run_command(argv: Sequence[str] | None = None, out=None) -> tuple[int, RunReport]:
    out = out if out is not None else sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code, RunReport(argv, 0, error="usage" if code else None)
    report = RunReport(argv, args.seed)
    start = time.perf_counter()
    try:
        args.func(args, report)
    except (UsageError, ParseError, SymExprError, jets.DegenerateMapError, OSError) as exc:
        report.error = str(exc)
    report.wall_time = time.perf_counter() - start
    if args.json:
        print(json.dumps(report.as_dict(), indent=2), file=out)
    else:
        _print_text(report, args.quiet, out)
    return report.exit_code, report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run_command(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
