"""Sparse multivariate polynomials over Q.

A polynomial is a plain ``dict`` mapping exponent tuples (dense, one entry per
chart coordinate) to nonzero ``mpq`` coefficients.  Dicts handed out by these
helpers are never mutated afterwards, so they can be shared freely.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    mpq = Fraction

Poly = dict

ZERO = mpq(0)
ONE = mpq(1)


def to_mpq(value) -> "mpq":
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def grlex_key(mono: tuple) -> tuple:
    return (sum(mono), mono)


def const(c, nvars: int) -> Poly:
    c = to_mpq(c)
    return {(0,) * nvars: c} if c else {}


def var(i: int, nvars: int) -> Poly:
    mono = [0] * nvars
    mono[i] = 1
    return {tuple(mono): ONE}


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def sub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        if v is None:
            out[m] = -c
        else:
            v = v - c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def scale(a: Poly, c) -> Poly:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = tuple([x + y for x, y in zip(ma, mb)])
            v = get(m)
            out[m] = ca * cb if v is None else v + ca * cb
    return {m: c for m, c in out.items() if c}


def mul_term(a: Poly, mono: tuple, c) -> Poly:
    return {tuple([x + y for x, y in zip(m, mono)]): v * c for m, v in a.items()}


def power(a: Poly, n: int, nvars: int) -> Poly:
    out = const(1, nvars)
    base = a
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def diff(a: Poly, i: int) -> Poly:
    out = {}
    for m, c in a.items():
        e = m[i]
        if e:
            mm = list(m)
            mm[i] = e - 1
            out[tuple(mm)] = c * e
    return out


def evaluate(a: Poly, point) -> "mpq":
    total = ZERO
    for m, c in a.items():
        term = c
        for x, e in zip(point, m):
            if e:
                term = term * x**e
        total = total + term
    return total


def evaluate_float(a: Poly, point) -> float:
    total = 0.0
    for m, c in a.items():
        term = float(c)
        for x, e in zip(point, m):
            if e:
                term *= x**e
        total += term
    return total


def leading(a: Poly) -> tuple:
    m = max(a, key=grlex_key)
    return m, a[m]


def is_constant(a: Poly) -> bool:
    return not a or (len(a) == 1 and not any(next(iter(a))))


def divexact(a: Poly, b: Poly):
    """Return ``q`` with ``a == q*b``, or ``None`` when ``b`` does not divide ``a``."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lm_b, lc_b = leading(b)
    q: dict = {}
    r = a
    while r:
        lm_r, lc_r = leading(r)
        if any(x < y for x, y in zip(lm_r, lm_b)):
            return None
        m = tuple([x - y for x, y in zip(lm_r, lm_b)])
        c = lc_r / lc_b
        q[m] = c
        r = sub(r, mul_term(b, m, c))
    return q


def primitive(a: Poly):
    """Split ``a`` into ``(content, prim)`` with ``prim`` integral, primitive and
    with positive grlex-leading coefficient."""
    den = 1
    for c in a.values():
        d = int(c.denominator)
        den = den * d // gcd(den, d)
    num_gcd = 0
    for c in a.values():
        num_gcd = gcd(num_gcd, int(c.numerator) * (den // int(c.denominator)))
    _, lc = leading(a)
    sign = -1 if lc < 0 else 1
    content = mpq(sign * num_gcd, den)
    return content, {m: c / content for m, c in a.items()}


def fmt_coeff(c) -> str:
    c = to_fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_poly(a: Poly, names) -> str:
    if not a:
        return "0"
    parts = []
    for m in sorted(a, key=grlex_key, reverse=True):
        c = a[m]
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        neg_ = c < 0
        mag = -c if neg_ else c
        if not factors:
            body = fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = fmt_coeff(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append("-" + body if neg_ else body)
        else:
            parts.append(("- " if neg_ else "+ ") + body)
    return " ".join(parts)


class Atom:
    """An irreducible, primitive denominator factor with positive leading coefficient."""

    __slots__ = ("poly", "key", "_hash")

    def __init__(self, poly: Poly):
        self.poly = poly
        self.key = tuple(sorted(((m, to_fraction(c)) for m, c in poly.items()),
                                key=lambda t: grlex_key(t[0]), reverse=True))
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Atom) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (len(self.key), self.key) < (len(other.key), other.key)

    def __repr__(self):
        return f"Atom({self.key})"


@lru_cache(maxsize=4096)
def _factor_cached(key: tuple, nvars: int):
    from sympy import Poly as SPoly, QQ, symbols

    gens = symbols(f"x0:{nvars}") if nvars > 1 else (symbols("x0"),)
    sp = SPoly.from_dict({m: QQ(c.numerator, c.denominator) for m, c in key}, *gens, domain=QQ)
    coeff, factors = sp.factor_list()
    coeff = mpq(int(coeff.p), int(coeff.q))
    out = []
    for f, e in factors:
        fp = {tuple(m): mpq(int(c.p), int(c.q)) for m, c in f.terms()}
        content, prim = primitive(fp)
        coeff *= content**e
        out.append((Atom(prim), e))
    out.sort(key=lambda t: t[0])
    return coeff, tuple(out)


def factor(a: Poly, nvars: int):
    """Factor a nonzero polynomial as ``coeff * prod(atom**e)``."""
    if is_constant(a):
        return next(iter(a.values())), ()
    key = tuple(sorted((m, to_fraction(c)) for m, c in a.items()))
    return _factor_cached(key, nvars)
