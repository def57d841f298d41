"""Canonical text form, readable back by the expression parser."""

from __future__ import annotations

from fractions import Fraction

from .polynomial import Polynomial, mono_str


def _coeff_str(c) -> str:
    return str(c) if not isinstance(c, Fraction) else f"{c.numerator}/{c.denominator}"


def poly_str(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    out: list[str] = []
    for idx, (m, c) in enumerate(p.terms):
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = _coeff_str(a)
        elif a == 1:
            body = mono_str(m)
        else:
            body = f"{_coeff_str(a)}*{mono_str(m)}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _is_single_power(p: Polynomial) -> bool:
    if len(p) != 1:
        return False
    (m, c), = p.term_dict.items()
    return c == 1 and len(m) == 1


def rational_str(num: Polynomial, den: Polynomial) -> str:
    n = poly_str(num)
    if den.is_constant():
        return n
    if len(num) > 1:
        n = f"({n})"
    d = poly_str(den)
    if not _is_single_power(den):
        d = f"({d})"
    return f"{n}/{d}"
