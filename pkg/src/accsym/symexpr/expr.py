"""Scalar expressions over chart coordinates.

Two layers live here.  The syntax tree nodes (``Const``, ``Coord``, ``Add``,
``Mul``, ``Neg``, ``Div``, ``IntPow``, ``Func``) are what the parser produces and
are compared structurally.  ``RatFunc`` is a canonical leaf holding a reduced
rational function ``num / prod(atom**e)`` with irreducible denominator atoms.

Python operators on expressions are *semantic*: when both operands are
rational functions the result is a canonical ``RatFunc``; otherwise a
flattened tree is built (like terms collected, constants folded), which is the
best we promise for transcendental input.
"""

from __future__ import annotations

import math
import re
import numbers
from dataclasses import dataclass
from fractions import Fraction

from ..chart import Chart
from ..errors import ChartError, PoleError
from . import _poly as P
from ._poly import mpq


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, numbers.Rational) or type(x).__name__ == "mpq":
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


class Expr:
    __slots__ = ()

    # semantic arithmetic
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        return power(self, n)

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.children())

    def children(self) -> tuple:
        return ()

    def chart(self) -> Chart | None:
        for c in self.children():
            ch = c.chart()
            if ch is not None:
                return ch
        return None

    def diff(self, i: int) -> "Expr":
        raise NotImplementedError

    def _eval(self, point, exact: bool):
        raise NotImplementedError

    def is_syntactic_zero(self) -> bool:
        return False


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", _frac(self.value))

    @property
    def is_rational(self):
        return True

    def diff(self, i):
        return Const(0)

    def _eval(self, point, exact):
        return P.to_mpq(self.value) if exact else float(self.value)

    def is_syntactic_zero(self):
        return self.value == 0

    def __str__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True, slots=True)
class Coord(Expr):
    chart_: Chart
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.chart_.dim:
            raise ChartError(f"coordinate index {self.index} invalid for chart {self.chart_}")

    @property
    def is_rational(self):
        return True

    def chart(self):
        return self.chart_

    @property
    def name(self) -> str:
        return self.chart_.names[self.index]

    def diff(self, i):
        return Const(1 if i == self.index else 0)

    def _eval(self, point, exact):
        return point[self.index]

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Coord({self.name})"


@dataclass(frozen=True, slots=True)
class Add(Expr):
    terms: tuple

    def children(self):
        return self.terms

    def diff(self, i):
        out = Const(0)
        for t in self.terms:
            out = add(out, t.diff(i))
        return out

    def _eval(self, point, exact):
        total = mpq(0) if exact else 0.0
        for t in self.terms:
            total = total + t._eval(point, exact)
        return total

    def __str__(self):
        parts = []
        for k, t in enumerate(self.terms):
            if isinstance(t, Neg):
                body = _wrap(t.arg, _PREC_ADD + 1)
                parts.append(("-" if k == 0 else "- ") + body)
            else:
                s = _wrap(t, _PREC_ADD)
                if k and s.startswith("-"):
                    parts.append("- " + s[1:].lstrip())
                else:
                    parts.append(s if k == 0 else "+ " + s)
        return " ".join(parts)


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    factors: tuple

    def children(self):
        return self.factors

    def diff(self, i):
        out = Const(0)
        fs = self.factors
        for k, f in enumerate(fs):
            d = f.diff(i)
            if d.is_syntactic_zero() or (isinstance(d, RatFunc) and not d.num):
                continue
            term = d
            for j, g in enumerate(fs):
                if j != k:
                    term = mul(term, g)
            out = add(out, term)
        return out

    def _eval(self, point, exact):
        total = mpq(1) if exact else 1.0
        for f in self.factors:
            total = total * f._eval(point, exact)
        return total

    def __str__(self):
        return "*".join(_wrap(f, _PREC_MUL) for f in self.factors)


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def diff(self, i):
        return neg(self.arg.diff(i))

    def _eval(self, point, exact):
        return -self.arg._eval(point, exact)

    def __str__(self):
        return "-" + _wrap(self.arg, _PREC_NEG)


@dataclass(frozen=True, slots=True)
class Div(Expr):
    num: Expr
    den: Expr

    def __post_init__(self):
        if self.den.is_syntactic_zero():
            raise ZeroDivisionError("division by the syntactic zero expression")

    def children(self):
        return (self.num, self.den)

    def diff(self, i):
        a, b = self.num, self.den
        return div(add(mul(a.diff(i), b), neg(mul(a, b.diff(i)))), power(b, 2))

    def _eval(self, point, exact):
        d = self.den._eval(point, exact)
        if d == 0:
            raise PoleError("denominator vanishes at point")
        return self.num._eval(point, exact) / d

    def __str__(self):
        return _wrap(self.num, _PREC_MUL) + "/" + _wrap(self.den, _PREC_MUL + 1)


@dataclass(frozen=True, slots=True)
class IntPow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or isinstance(self.exponent, bool):
            raise TypeError("IntPow exponent must be an integer")

    def children(self):
        return (self.base,)

    def diff(self, i):
        n = self.exponent
        if n == 0:
            return Const(0)
        return mul(mul(Const(n), power(self.base, n - 1)), self.base.diff(i))

    def _eval(self, point, exact):
        b = self.base._eval(point, exact)
        if self.exponent < 0 and b == 0:
            raise PoleError("negative power of zero")
        return b**self.exponent

    def __str__(self):
        return _wrap(self.base, _PREC_POW + 1) + "^" + str(self.exponent)


@dataclass(frozen=True, slots=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in _FUNCS:
            raise ValueError(f"unknown function {self.name!r}")

    @property
    def is_rational(self):
        return False

    def children(self):
        return (self.arg,)

    def diff(self, i):
        u = self.arg
        du = u.diff(i)
        if self.name == "sin":
            outer = func("cos", u)
        elif self.name == "cos":
            outer = neg(func("sin", u))
        else:
            outer = func("exp", u)
        return mul(outer, du)

    def _eval(self, point, exact):
        return _FUNCS[self.name](float(self.arg._eval(point, False)))

    def __str__(self):
        return f"{self.name}({self.arg})"


_FUNCS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, Add):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, IntPow):
        return _PREC_POW
    if isinstance(e, Const):
        return _PREC_ATOM if e.value.denominator == 1 and e.value >= 0 else _PREC_MUL
    if isinstance(e, RatFunc):
        return e._prec()
    return _PREC_ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    s = str(e)
    return f"({s})" if _prec(e) < min_prec else s


class RatFunc(Expr):
    """Canonical rational function: ``num / prod(atom**exp)``.

    The numerator carries all scalar content; each atom is irreducible,
    primitive and has a positive grlex-leading coefficient; no atom divides the
    numerator.  Equal functions therefore have identical representations.
    """

    __slots__ = ("chart_", "num", "den", "_hash")

    def __init__(self, chart: Chart, num: dict, den: tuple = ()):
        self.chart_ = chart
        self.num = num
        self.den = den if num else ()
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, chart: Chart, c) -> "RatFunc":
        return cls(chart, P.const(P.to_mpq(_frac(c)), chart.dim))

    @classmethod
    def variable(cls, chart: Chart, i: int) -> "RatFunc":
        return cls(chart, P.var(i, chart.dim))

    @property
    def is_rational(self):
        return True

    def chart(self):
        return self.chart_

    @property
    def dim(self) -> int:
        return self.chart_.dim

    def is_zero(self) -> bool:
        return not self.num

    def is_syntactic_zero(self):
        return not self.num

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return not self.den and P.is_constant(self.num)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return P.to_fraction(next(iter(self.num.values()))) if self.num else Fraction(0)

    def denominator_poly(self) -> dict:
        out = P.const(1, self.dim)
        for atom, e in self.den:
            out = P.mul(out, P.power(atom.poly, e, self.dim))
        return out

    # equality -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.chart_ == other.chart_ and self.den == other.den and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart_, self.den, frozenset(self.num.items())))
        return self._hash

    def _check(self, other: "RatFunc"):
        if other.chart_ != self.chart_:
            raise ChartError(f"chart mismatch: {self.chart_} vs {other.chart_}")

    # arithmetic ---------------------------------------------------------
    def _cancel(self, num: dict, den: dict) -> "RatFunc":
        out = []
        for atom in sorted(den):
            e = den[atom]
            while e and num:
                q = P.divexact(num, atom.poly)
                if q is None:
                    break
                num = q
                e -= 1
            if e:
                out.append((atom, e))
        return RatFunc(self.chart_, num, tuple(out) if num else ())

    def _add(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = P.add(self.num, other.num)
            if not self.den:
                return RatFunc(self.chart_, num)
            return self._cancel(num, dict(self.den))
        da, db = dict(self.den), dict(other.den)
        lcm = dict(da)
        for atom, e in db.items():
            if e > lcm.get(atom, 0):
                lcm[atom] = e
        na = self.num
        for atom, e in lcm.items():
            k = e - da.get(atom, 0)
            if k:
                na = P.mul(na, P.power(atom.poly, k, self.dim))
        nb = other.num
        for atom, e in lcm.items():
            k = e - db.get(atom, 0)
            if k:
                nb = P.mul(nb, P.power(atom.poly, k, self.dim))
        return self._cancel(P.add(na, nb), lcm)

    def _neg(self) -> "RatFunc":
        return RatFunc(self.chart_, P.neg(self.num), self.den)

    def _mul(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        if not self.num or not other.num:
            return RatFunc(self.chart_, {})
        if not self.den and not other.den:
            return RatFunc(self.chart_, P.mul(self.num, other.num))
        a, other_rest = _cross_cancel(self.num, other.den)
        b, self_rest = _cross_cancel(other.num, self.den)
        merged = dict(self_rest)
        for atom, e in other_rest.items():
            merged[atom] = merged.get(atom, 0) + e
        den = tuple(sorted(((t, e) for t, e in merged.items() if e), key=lambda t: t[0]))
        return RatFunc(self.chart_, P.mul(a, b), den)

    def _inv(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("division by the zero rational function")
        c, atoms = P.factor(self.num, self.dim)
        num = P.scale(self.denominator_poly(), 1 / c)
        return RatFunc(self.chart_, num, atoms)

    def _pow(self, n: int) -> "RatFunc":
        if n < 0:
            return self._inv()._pow(-n)
        if n == 0:
            return RatFunc.constant(self.chart_, 1)
        num = P.power(self.num, n, self.dim)
        return RatFunc(self.chart_, num, tuple((a, e * n) for a, e in self.den))

    def diff(self, i: int) -> "RatFunc":
        if not 0 <= i < self.dim:
            raise ChartError(f"coordinate index {i} out of range")
        if not self.den:
            return RatFunc(self.chart_, P.diff(self.num, i))
        atoms = [a for a, _ in self.den]
        prod_all = P.const(1, self.dim)
        for a in atoms:
            prod_all = P.mul(prod_all, a.poly)
        num = P.mul(P.diff(self.num, i), prod_all)
        for k, (a, e) in enumerate(self.den):
            da = P.diff(a.poly, i)
            if not da:
                continue
            others = P.const(e, self.dim)
            for j, b in enumerate(atoms):
                if j != k:
                    others = P.mul(others, b.poly)
            num = P.sub(num, P.mul(P.mul(self.num, da), others))
        return self._cancel(num, {a: e + 1 for a, e in self.den})

    def _eval(self, point, exact):
        if exact:
            d = mpq(1)
            for atom, e in self.den:
                v = P.evaluate(atom.poly, point)
                if v == 0:
                    raise PoleError("denominator vanishes at point")
                d *= v**e
            return P.evaluate(self.num, point) / d
        d = 1.0
        for atom, e in self.den:
            v = P.evaluate_float(atom.poly, point)
            if v == 0:
                raise PoleError("denominator vanishes at point")
            d *= v**e
        return P.evaluate_float(self.num, point) / d

    def denominators(self):
        return [a.poly for a, _ in self.den]

    # printing -----------------------------------------------------------
    def _prec(self) -> int:
        if self.den:
            return _PREC_MUL
        if len(self.num) > 1:
            return _PREC_ADD
        text = str(self)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+", text):
            return _PREC_ATOM
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*\^[0-9]+", text):
            return _PREC_POW
        return _PREC_MUL

    def __str__(self):
        names = self.chart_.names
        num = P.fmt_poly(self.num, names)
        if not self.den:
            return num
        if len(self.num) > 1:
            num = f"({num})"
        parts = []
        for atom, e in self.den:
            s = P.fmt_poly(atom.poly, names)
            if len(atom.poly) > 1 or "*" in s or "^" in s:
                s = f"({s})"
            parts.append(s if e == 1 else f"{s}^{e}")
        den = parts[0] if len(parts) == 1 and "^" not in parts[0] and "*" not in parts[0] else "(" + "*".join(parts) + ")"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFunc({self})"


def _cross_cancel(num: dict, den: tuple):
    """Cancel ``num`` against the atoms of ``den``; returns the reduced numerator
    and the remaining exponents of ``den``."""
    rest = {}
    for atom, e in den:
        while e:
            q = P.divexact(num, atom.poly)
            if q is None:
                break
            num = q
            e -= 1
        rest[atom] = e
    return num, rest


# --------------------------------------------------------------------------
# semantic construction


def coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpq":
        return Const(_frac(x))
    raise TypeError(f"cannot use {type(x).__name__} as an expression")


def to_ratfunc(e: Expr, chart: Chart) -> RatFunc:
    """Convert a rational-class expression to canonical form on ``chart``."""
    if isinstance(e, RatFunc):
        if e.chart_ != chart:
            raise ChartError(f"chart mismatch: {e.chart_} vs {chart}")
        return e
    if isinstance(e, Const):
        return RatFunc.constant(chart, e.value)
    if isinstance(e, Coord):
        if e.chart_ != chart:
            raise ChartError(f"chart mismatch: {e.chart_} vs {chart}")
        return RatFunc.variable(chart, e.index)
    if isinstance(e, Add):
        out = RatFunc(chart, {})
        for t in e.terms:
            out = out._add(to_ratfunc(t, chart))
        return out
    if isinstance(e, Mul):
        out = RatFunc.constant(chart, 1)
        for f in e.factors:
            out = out._mul(to_ratfunc(f, chart))
        return out
    if isinstance(e, Neg):
        return to_ratfunc(e.arg, chart)._neg()
    if isinstance(e, Div):
        return to_ratfunc(e.num, chart)._mul(to_ratfunc(e.den, chart)._inv())
    if isinstance(e, IntPow):
        return to_ratfunc(e.base, chart)._pow(e.exponent)
    raise TypeError(f"{type(e).__name__} is not a rational-function expression")


def _common_chart(a: Expr, b: Expr) -> Chart | None:
    ca, cb = a.chart(), b.chart()
    if ca is not None and cb is not None and ca != cb:
        raise ChartError(f"chart mismatch: {ca} vs {cb}")
    return ca or cb


def _is_zero_node(e: Expr) -> bool:
    return e.is_syntactic_zero()


def _is_one_node(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value == 1
    if isinstance(e, RatFunc):
        return e.is_constant() and e.constant_value() == 1
    return False


def add(a, b) -> Expr:
    a, b = coerce(a), coerce(b)
    if isinstance(a, RatFunc) and isinstance(b, RatFunc):
        return a._add(b)
    if a.is_rational and b.is_rational:
        chart = _common_chart(a, b)
        if chart is None:
            return Const(_const_value(a) + _const_value(b))
        return to_ratfunc(a, chart)._add(to_ratfunc(b, chart))
    return _flat_add([a, b])


def neg(a) -> Expr:
    a = coerce(a)
    if isinstance(a, RatFunc):
        return a._neg()
    if isinstance(a, Const):
        return Const(-a.value)
    if a.is_rational:
        chart = a.chart()
        return to_ratfunc(a, chart)._neg() if chart else Const(-_const_value(a))
    return _flat_mul([Const(-1), a])


def mul(a, b) -> Expr:
    a, b = coerce(a), coerce(b)
    if isinstance(a, RatFunc) and isinstance(b, RatFunc):
        return a._mul(b)
    if a.is_rational and b.is_rational:
        chart = _common_chart(a, b)
        if chart is None:
            return Const(_const_value(a) * _const_value(b))
        return to_ratfunc(a, chart)._mul(to_ratfunc(b, chart))
    return _flat_mul([a, b])


def div(a, b) -> Expr:
    a, b = coerce(a), coerce(b)
    if isinstance(a, RatFunc) and isinstance(b, RatFunc):
        return a._mul(b._inv())
    if a.is_rational and b.is_rational:
        chart = _common_chart(a, b)
        if chart is None:
            d = _const_value(b)
            if d == 0:
                raise ZeroDivisionError("division by zero")
            return Const(_const_value(a) / d)
        return to_ratfunc(a, chart)._mul(to_ratfunc(b, chart)._inv())
    if b.is_rational:
        chart = b.chart()
        inv = to_ratfunc(b, chart)._inv() if chart else Const(1 / _const_value(b))
        return _flat_mul([a, inv])
    return _flat_mul([a, IntPow(b, -1)])


def power(a, n: int) -> Expr:
    a = coerce(a)
    if isinstance(a, RatFunc):
        return a._pow(n)
    if a.is_rational:
        chart = a.chart()
        if chart is None:
            return Const(_const_value(a) ** n)
        return to_ratfunc(a, chart)._pow(n)
    if n == 0:
        return Const(1)
    if n == 1:
        return a
    return _flat_mul([IntPow(a, n)])


def func(name: str, arg) -> Expr:
    arg = normalize(coerce(arg))
    if arg.is_rational and arg.chart() is None or (isinstance(arg, RatFunc) and arg.is_constant()):
        v = _const_value(arg) if not isinstance(arg, RatFunc) else arg.constant_value()
        if v == 0:
            return Const(0) if name == "sin" else Const(1)
    return Func(name, arg)


def sin(arg) -> Expr:
    return func("sin", arg)


def cos(arg) -> Expr:
    return func("cos", arg)


def exp(arg) -> Expr:
    return func("exp", arg)


def _const_value(e: Expr) -> Fraction:
    if isinstance(e, RatFunc):
        return e.constant_value()
    return P.to_fraction(e._eval((), True))


def _is_coefficient(e: Expr) -> bool:
    return e.is_rational


def _split_factors(e: Expr, sign: int = 1):
    """Yield (coefficient, [(base, exponent)]) for a product-like node."""
    coef: Expr = Const(sign)
    bases: list = []
    stack = [e]
    while stack:
        f = stack.pop()
        if _is_coefficient(f):
            coef = mul(coef, f)
        elif isinstance(f, Mul):
            stack.extend(f.factors)
        elif isinstance(f, Neg):
            coef = neg(coef)
            stack.append(f.arg)
        elif isinstance(f, IntPow):
            bases.append((f.base, f.exponent))
        elif isinstance(f, Div):
            stack.append(f.num)
            if f.den.is_rational:
                coef = div(coef, f.den)
            else:
                bases.append((f.den, -1))
        else:
            bases.append((f, 1))
    return coef, bases


def _flat_mul(factors) -> Expr:
    coef: Expr = Const(1)
    powers: dict = {}
    order: dict = {}
    for f in factors:
        c, bases = _split_factors(f)
        coef = mul(coef, c)
        for base, e in bases:
            key = str(base)
            order.setdefault(key, base)
            powers[key] = powers.get(key, 0) + e
    if _is_zero_node(coef) or (isinstance(coef, RatFunc) and coef.is_zero()):
        return Const(0)
    rest = []
    for key in sorted(powers):
        e = powers[key]
        if e == 0:
            continue
        base = order[key]
        rest.append(base if e == 1 else IntPow(base, e))
    if not rest:
        return coef
    if _is_one_node(coef):
        return rest[0] if len(rest) == 1 else Mul(tuple(rest))
    return Mul((coef, *rest))


def _term_parts(t: Expr):
    if _is_coefficient(t):
        return t, ()
    c, bases = _split_factors(t)
    rest = _flat_mul([IntPow(b, e) if e != 1 else b for b, e in bases]) if bases else Const(1)
    return c, (rest,)


def _flat_add(terms) -> Expr:
    groups: dict = {}
    reps: dict = {}
    rational: Expr = Const(0)
    stack = list(terms)
    flat = []
    while stack:
        t = stack.pop(0)
        if isinstance(t, Add):
            stack[0:0] = list(t.terms)
        else:
            flat.append(t)
    for t in flat:
        c, rest = _term_parts(t)
        if not rest:
            rational = add(rational, c)
            continue
        key = str(rest[0])
        reps.setdefault(key, rest[0])
        groups[key] = add(groups.get(key, Const(0)), c)
    out = []
    for key in sorted(groups):
        c = groups[key]
        if _is_zero_node(c):
            continue
        base = reps[key]
        out.append(base if _is_one_node(c) else _flat_mul([c, base]))
    if not _is_zero_node(rational):
        out.append(rational)
    if not out:
        return Const(0)
    return out[0] if len(out) == 1 else Add(tuple(out))


def normalize(e: Expr, chart: Chart | None = None) -> Expr:
    """Canonical form for rational-function input, flattened tree otherwise."""
    e = coerce(e)
    chart = chart or e.chart()
    if e.is_rational:
        if chart is None:
            return Const(_const_value(e))
        return to_ratfunc(e, chart)
    if isinstance(e, Func):
        return func(e.name, normalize(e.arg, chart))
    if isinstance(e, Add):
        return _flat_add([normalize(t, chart) for t in e.terms])
    if isinstance(e, Mul):
        return _flat_mul([normalize(f, chart) for f in e.factors])
    if isinstance(e, Neg):
        return neg(normalize(e.arg, chart))
    if isinstance(e, Div):
        return div(normalize(e.num, chart), normalize(e.den, chart))
    if isinstance(e, IntPow):
        return power(normalize(e.base, chart), e.exponent)
    raise TypeError(f"cannot normalize {type(e).__name__}")


def as_scalar(value, chart: Chart) -> Expr:
    """Canonical scalar on ``chart``: a ``RatFunc`` when possible."""
    if isinstance(value, RatFunc) and value.chart_ == chart:
        return value
    if isinstance(value, str):
        from .parser import parse_expr

        value = parse_expr(value, chart)
    e = coerce(value)
    ch = e.chart()
    if ch is not None and ch != chart:
        raise ChartError(f"chart mismatch: {ch} vs {chart}")
    if e.is_rational:
        return to_ratfunc(e, chart)
    return normalize(e, chart)
