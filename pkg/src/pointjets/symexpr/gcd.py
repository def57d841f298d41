"""Multivariate polynomial GCD over the rationals.

Recursive content / primitive-part Euclid, one variable at a time in the
canonical symbol order.  Two shortcuts keep the common case cheap: a
variable present in only one argument cannot occur in the gcd, so that
argument is replaced by its coefficients with respect to such variables,
and the fold over those coefficients stops as soon as the running gcd is a
unit.  Before running Euclid, a modular image at a random point bounds the
degree of the gcd in each shared variable; an image of degree zero (with the
leading coefficients surviving) proves the gcd is free of that variable.
Results are normalized to integer coefficients with content 1 and a positive
leading coefficient.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd as igcd, isqrt
from typing import Iterable

from . import symbols as _sym
from .errors import NotDivisibleError
from .polynomial import ONE, ZERO, Polynomial, divexact, qnorm


def normalize(p: Polynomial) -> Polynomial:
    """Unique associate: coprime integer coefficients, positive leading term."""
    if p.is_zero():
        return p
    c = p.rational_content()
    if p.leading_coeff() < 0:
        c = -c
    return p.scale(1 / c) if c != 1 else p


def _by_size(polys: Iterable[Polynomial]) -> list[Polynomial]:
    return sorted(polys, key=len)


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero():
        return normalize(b)
    if b.is_zero():
        return normalize(a)
    if a.is_constant() or b.is_constant():
        return ONE
    if a == b:
        return normalize(a)
    va, vb = a.variables(), b.variables()
    if not (va & vb):
        return ONE
    only_a = va - vb
    if only_a:
        return gcd_list([b, *a.collect(only_a).values()])
    only_b = vb - va
    if only_b:
        return gcd_list([a, *b.collect(only_b).values()])
    if len(a) == 1 or len(b) == 1:
        return _monomial_gcd(a, b)
    free = {z for z in va if _image_degree(a, b, z) == 0}
    if free == va:
        return ONE
    if free:
        return gcd_list([*a.collect(free).values(), *b.collect(free).values()])
    if len(va) <= _HEU_MAX_VARS:
        h = _heu_gcd(normalize(a), normalize(b))
        if h is not None:
            return h
    x = min(va, key=_sym.rank)
    return _gcd_main(a, b, x)


# -- heuristic gcd (evaluation at a large integer, xi-adic reconstruction) --------

_HEU_MAX_VARS = 4


def _maxnorm(p: Polynomial) -> int:
    return max(abs(c) for _, c in p)


def _smod(c: int, m: int) -> int:
    r = c % m
    return r - m if r > m // 2 else r


def _int_content(p: Polynomial) -> int:
    c = 0
    for _, v in p:
        c = igcd(c, int(v))
    return c


def _exact(a: Polynomial, b: Polynomial) -> Polynomial | None:
    try:
        return divexact(a, b)
    except NotDivisibleError:
        return None


def _heu_rec(f: Polynomial, g: Polynomial, xs: list[int]):
    """(h, f/h, g/h) for integer polynomials in ``xs``, or None on failure."""
    if f.is_zero() or g.is_zero():
        return None
    if not xs:
        a, b = int(f.constant_value()), int(g.constant_value())
        h = igcd(a, b)
        return (Polynomial.constant(h), Polynomial.constant(a // h), Polynomial.constant(b // h))
    cf, cg = _int_content(f), _int_content(g)
    c = igcd(cf, cg)
    f, g = f.scale(Fraction(1, cf)), g.scale(Fraction(1, cg))
    x, rest = xs[0], xs[1:]
    f_norm, g_norm = _maxnorm(f), _maxnorm(g)
    bound = 2 * min(f_norm, g_norm) + 29
    lf, lg = abs(_ground_lc(f, xs)), abs(_ground_lc(g, xs))
    xi = max(min(bound, 99 * isqrt(bound)), 2 * min(f_norm // lf, g_norm // lg) + 4)

    def finish(h, cff, cfg):
        # restore the contents removed above
        return h.scale(c), cff.scale(Fraction(cf, c)), cfg.scale(Fraction(cg, c))

    for _ in range(6):
        ff, gg = f.evaluate({x: xi}), g.evaluate({x: xi})
        sub = _heu_rec(ff, gg, rest) if not (ff.is_zero() or gg.is_zero()) else None
        if sub is not None:
            h, cff, cfg = sub
            h = _xi_adic(h, xi, x)
            h = h.scale(Fraction(1, _int_content(h))) if not h.is_zero() else h
            if not h.is_zero():
                if h.leading_coeff() < 0:
                    h = -h
                qf = _exact(f, h)
                qg = _exact(g, h) if qf is not None else None
                if qg is not None:
                    return finish(h, qf, qg)
            for cof, this, other in ((cff, f, g), (cfg, g, f)):
                cof = _xi_adic(cof, xi, x)
                if cof.is_zero():
                    continue
                h2 = _exact(this, cof)
                if h2 is None:
                    continue
                q2 = _exact(other, h2)
                if q2 is not None:
                    return finish(h2, cof, q2) if this is f else finish(h2, q2, cof)
        xi = 73794 * xi * isqrt(isqrt(xi)) // 27011
    return None


def _ground_lc(p: Polynomial, xs: list[int]) -> int:
    """Leading coefficient in lexicographic order of ``xs``."""
    best = max(p, key=lambda mc: tuple(dict(mc[0]).get(s, 0) for s in xs))
    return int(best[1])


def _xi_adic(h: Polynomial, xi: int, x: int) -> Polynomial:
    out: dict = {}
    i = 0
    while not h.is_zero():
        digit = {}
        for m, c in h:
            r = _smod(c, xi)
            if r:
                digit[m] = r
        for m, r in digit.items():
            key = tuple(sorted(m + ((x, i),))) if i else m
            out[key] = r
        h = Polynomial.from_terms(((m, (c - digit.get(m, 0)) // xi) for m, c in h))
        i += 1
    return Polynomial.from_terms(out.items())


def _coprime(a: Polynomial, b: Polynomial) -> bool:
    if a.is_constant() or b.is_constant():
        return True
    shared = a.variables() & b.variables()
    return all(_image_degree(a, b, z) == 0 for z in shared)


def _heu_gcd(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """Candidate from the heuristic, accepted only when it divides both inputs
    and the cofactors are provably coprime."""
    xs = sorted(a.variables() | b.variables(), key=_sym.rank)
    res = _heu_rec(a, b, xs)
    if res is None:
        return None
    h = normalize(res[0])
    if h.is_constant():
        return None
    try:
        ca, cb = divexact(a, h), divexact(b, h)
    except NotDivisibleError:
        return None
    return h if _coprime(ca, cb) else None


_PRIME = 2 ** 61 - 1


def _mod(c) -> int | None:
    if isinstance(c, Fraction):
        if c.denominator % _PRIME == 0:
            return None
        return c.numerator * pow(c.denominator, -1, _PRIME) % _PRIME
    return c % _PRIME


def _image(p: Polynomial, z: int, point: dict[int, int]) -> list[int] | None:
    """Coefficients in ``z`` of ``p`` mod the prime, other symbols evaluated."""
    out: dict[int, int] = {}
    for m, c in p:
        v = _mod(c)
        if v is None:
            return None
        k = 0
        for s, e in m:
            if s == z:
                k = e
            else:
                v = v * pow(point[s], e, _PRIME) % _PRIME
        out[k] = (out.get(k, 0) + v) % _PRIME
    deg = p.degree(z)
    if out.get(deg, 0) == 0:
        return None
    return [out.get(k, 0) for k in range(deg + 1)]


def _ugcd_degree(a: list[int], b: list[int]) -> int:
    def trim(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = trim(a[:]), trim(b[:])
    while b:
        inv = pow(b[-1], -1, _PRIME)
        while len(a) >= len(b):
            f = a[-1] * inv % _PRIME
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] = (a[i + shift] - f * c) % _PRIME
            trim(a)
        a, b = b, a
    return len(a) - 1


def _image_degree(a: Polynomial, b: Polynomial, z: int, tries: int = 3) -> int | None:
    """Upper bound for deg_z gcd(a, b), or None if no good point was found."""
    syms = sorted((a.variables() | b.variables()) - {z})
    rng = random.Random(z)
    for _ in range(tries):
        point = {s: rng.randrange(2, _PRIME) for s in syms}
        ia, ib = _image(a, z, point), _image(b, z, point)
        if ia is not None and ib is not None:
            return _ugcd_degree(ia, ib)
    return None


def gcd_list(polys: Iterable[Polynomial]) -> Polynomial:
    items = [p for p in polys if not p.is_zero()]
    if not items:
        return ZERO
    items = _by_size(items)
    g = normalize(items[0])
    for p in items[1:]:
        if g.is_constant():
            return ONE
        g = gcd(g, p)
    return g if not g.is_constant() else ONE


def _monomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    # the gcd divides a monomial, so it is the common monomial factor
    common: dict[int, int] | None = None
    for p in (a, b):
        for m, _ in p:
            exps = dict(m)
            if common is None:
                common = exps
            else:
                common = {s: min(e, exps[s]) for s, e in common.items() if s in exps}
            if not common:
                return ONE
    return Polynomial._raw({tuple(sorted(common.items())): 1})


def content(p: Polynomial, x: int) -> Polynomial:
    return gcd_list(p.univariate(x).values())


def primitive_part(p: Polynomial, x: int) -> Polynomial:
    c = content(p, x)
    return normalize(divexact(p, c) if not c.is_constant() else p)


def prem(a: Polynomial, b: Polynomial, x: int) -> Polynomial:
    """Sparse pseudo-remainder of ``a`` by ``b`` in the main variable ``x``."""
    B = b.univariate(x)
    db = max(B)
    lb = B[db]
    R = a.univariate(x)
    while R and max(R) >= db:
        dr = max(R)
        lr = R[dr]
        shift = dr - db
        new: dict[int, Polynomial] = {}
        for k, c in R.items():
            if k != dr:
                new[k] = c * lb
        for k, c in B.items():
            if k == db:
                continue
            v = new.get(k + shift, ZERO) - lr * c
            new[k + shift] = v
        R = {k: v for k, v in new.items() if not v.is_zero()}
    return Polynomial.from_univariate(R, x)


def _gcd_main(a: Polynomial, b: Polynomial, x: int) -> Polynomial:
    ca, cb = content(a, x), content(b, x)
    pa = divexact(a, ca) if not ca.is_constant() else a
    pb = divexact(b, cb) if not cb.is_constant() else b
    c = gcd(ca, cb)
    if pa.degree(x) < pb.degree(x):
        pa, pb = pb, pa
    if pb.degree(x) == 0:
        return normalize(c)
    while True:
        r = prem(pa, pb, x)
        if r.is_zero():
            break
        if r.degree(x) == 0:
            return normalize(c)
        pa, pb = pb, primitive_part(r, x)
    return normalize(c * primitive_part(pb, x))


def lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return ZERO
    g = gcd(a, b)
    return normalize(divexact(a, g) * b)


def cancel(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Reduce ``num/den``; the returned denominator is normalized."""
    g = gcd(num, den)
    if not g.is_constant():
        num = divexact(num, g)
        den = divexact(den, g)
    c = den.rational_content()
    if den.leading_coeff() < 0:
        c = -c
    if c != 1:
        inv = Fraction(1) / c
        num, den = num.scale(inv), den.scale(inv)
    return num, den


__all__ = ["gcd", "gcd_list", "lcm", "cancel", "normalize", "content",
           "primitive_part", "prem", "qnorm"]
