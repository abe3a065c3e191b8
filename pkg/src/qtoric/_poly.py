"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of Fractions, lowest degree first, with no trailing
zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = tuple  # tuple[Fraction, ...]

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
X: Poly = (Fraction(0), Fraction(1))


def trim(coeffs: Sequence) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _strip(c: list) -> Poly:
    # internal results already hold Fractions
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def const(c) -> Poly:
    return trim((c,))


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _strip(out)


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, c) -> Poly:
    if c == 0:
        return ZERO
    return tuple(x * c for x in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _strip(out)


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        c = r[-1] / lead
        quot[k] = c
        for i, b in enumerate(q):
            r[i + k] -= c * b
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return _strip(quot), tuple(r)


def monic(p: Poly) -> Poly:
    if not p:
        return p
    lead = p[-1]
    return tuple(c / lead for c in p)


def gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def exgcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = p, q
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    lead = r0[-1]
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)


def deriv(p: Poly) -> Poly:
    return trim([i * c for i, c in enumerate(p)][1:])


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _imul(a, b, c, d):
    prods = (a * c, a * d, b * c, b * d)
    return min(prods), max(prods)


def eval_interval(p: Poly, lo, hi) -> tuple[Fraction, Fraction]:
    """Enclosure of p over [lo, hi] by interval Horner evaluation."""
    if not p:
        return Fraction(0), Fraction(0)
    alo = ahi = p[-1]
    for c in reversed(p[:-1]):
        alo, ahi = _imul(alo, ahi, lo, hi)
        alo += c
        ahi += c
    return alo, ahi


def squarefree(p: Poly) -> Poly:
    if len(p) <= 2:
        return monic(p)
    g = gcd(p, deriv(p))
    return monic(divmod_(p, g)[0])


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(seq: list[Poly], x) -> int:
    signs = [s for s in (_sign(evaluate(q, x)) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_open(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of p in the open interval (lo, hi)."""
    q = squarefree(p)
    if len(q) <= 1:
        return 0
    for end in (lo, hi):
        # deflate rational roots sitting on an endpoint
        while len(q) > 1 and evaluate(q, end) == 0:
            q = divmod_(q, (-Fraction(end), Fraction(1)))[0]
    if len(q) <= 1:
        return 0
    seq = [q, deriv(q)]
    while True:
        r = divmod_(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(neg(r))
    return _variations(seq, lo) - _variations(seq, hi)


def is_irreducible(p: Poly) -> bool:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p))
    return sympy.Poly(expr, x, domain="QQ").is_irreducible
