"""Differential forms, multivector fields and their calculus on a chart.

Storage follows the determinant convention: a k-form is a map from strictly
increasing index tuples ``I`` to coefficients, representing
``sum_I a_I dx^I`` with no ``1/k!``.  Multivectors mirror this with
``dx^I`` replaced by ``d_I``.  Interior products always contract the first
slot, so ``i_X (dx^a ^ dx^b) = X^a dx^b - X^b dx^a``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .chart import Chart
from .errors import ChartError, DegreeError
from .symexpr import EXACT, Const, Expr, Policy, RatFunc, coerce, evaluate, is_zero
from .symexpr.expr import add as _add, mul as _mul


def sort_sign(idx: Iterable[int]):
    """Sort ``idx`` and return ``(sign, sorted_tuple)``; sign is 0 on a repeat."""
    items = list(idx)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, None
    return sign, tuple(items)


def _is_trivial_zero(c: Expr) -> bool:
    if isinstance(c, RatFunc):
        return c.is_zero()
    return c.is_syntactic_zero()


class _Field:
    """Sparse antisymmetric field; subclasses fix the variance."""

    kind = "field"
    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart: Chart, degree: int, comps: Mapping | None = None):
        if not 0 <= degree <= chart.dim:
            raise DegreeError(f"degree {degree} out of range for dimension {chart.dim}")
        self.chart = chart
        self.degree = degree
        out: dict = {}
        for key, value in (comps or {}).items():
            idx = self._parse_key(key)
            if len(idx) != degree:
                raise DegreeError(f"index {key!r} does not have {degree} entries")
            sign, idx = sort_sign(idx)
            if not sign:
                continue
            c = chart.scalar(value)
            if sign < 0:
                c = -c
            out[idx] = _add(out[idx], c) if idx in out else c
        self.comps = {k: v for k, v in sorted(out.items()) if not _is_trivial_zero(v)}

    def _parse_key(self, key) -> tuple:
        if isinstance(key, int):
            key = (key,)
        if isinstance(key, str):
            key = tuple(key.split("^")) if key else ()
        out = []
        for k in key:
            if isinstance(k, str):
                out.append(self.chart.index(k))
            elif isinstance(k, int) and 0 <= k < self.chart.dim:
                out.append(k)
            else:
                raise ChartError(f"invalid index {k!r}")
        return tuple(out)

    @classmethod
    def _raw(cls, chart, degree, comps):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj.comps = {k: v for k, v in sorted(comps.items()) if not _is_trivial_zero(v)}
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls(chart, degree)

    # access
    def __getitem__(self, key):
        sign, idx = sort_sign(self._parse_key(key))
        if not sign:
            return Const(0)
        c = self.comps.get(idx)
        if c is None:
            return Const(0)
        return c if sign > 0 else -c

    def items(self):
        return self.comps.items()

    def key_name(self, idx: tuple) -> str:
        return "^".join(self.chart.names[i] for i in idx) if idx else "1"

    def to_dict(self) -> dict:
        return {self.key_name(k): str(v) for k, v in self.comps.items()}

    def is_zero(self, policy: Policy = EXACT) -> bool:
        return all(is_zero(c, policy) for c in self.comps.values())

    def evaluate(self, point) -> dict:
        return {k: evaluate(v, point) for k, v in self.comps.items()}

    # arithmetic
    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {self.kind} with {getattr(other, 'kind', type(other).__name__)}")
        if other.chart != self.chart:
            raise ChartError(f"chart mismatch: {self.chart} vs {other.chart}")
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._same(other)
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = _add(out[k], v) if k in out else v
        return self._raw(self.chart, self.degree, out)

    def __neg__(self):
        return self._raw(self.chart, self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, _Field):
            return NotImplemented
        f = self.chart.scalar(f) if isinstance(f, str) else coerce(f)
        return self._raw(self.chart, self.degree, {k: _mul(f, v) for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __truediv__(self, f):
        f = self.chart.scalar(f) if isinstance(f, str) else coerce(f)
        return self._raw(self.chart, self.degree, {k: v / f for k, v in self.comps.items()})

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.chart == other.chart and self.degree == other.degree
                and self.comps == other.comps)

    def __hash__(self):
        return hash((type(self).__name__, self.chart, self.degree, tuple(self.comps.items())))

    def __str__(self):
        if not self.comps:
            return "0"
        return "{" + ", ".join(f"{k}: {v}" for k, v in self.to_dict().items()) + "}"

    def __repr__(self):
        return f"{type(self).__name__}({self.degree}, {self})"


class DiffForm(_Field):
    """A differential k-form ``sum_I a_I dx^I`` over increasing ``I``."""

    kind = "form"
    __slots__ = ()


class MultiVector(_Field):
    """A k-vector field ``sum_I P^I d_I`` over increasing ``I``."""

    kind = "multivector"
    __slots__ = ()

    def scalar(self) -> Expr:
        if self.degree:
            raise DegreeError("only degree-0 multivectors are scalars")
        return self.comps.get((), Const(0))


def dx(chart: Chart, which) -> DiffForm:
    i = which if isinstance(which, int) else chart.index(which)
    return DiffForm(chart, 1, {(i,): 1})


def partial(chart: Chart, which) -> MultiVector:
    i = which if isinstance(which, int) else chart.index(which)
    return MultiVector(chart, 1, {(i,): 1})


def function_form(chart: Chart, f) -> DiffForm:
    return DiffForm(chart, 0, {(): f})


def scalar_field(chart: Chart, f) -> MultiVector:
    return MultiVector(chart, 0, {(): f})


def _check_pair(a: _Field, b: _Field):
    if a.chart != b.chart:
        raise ChartError(f"chart mismatch: {a.chart} vs {b.chart}")


def _accumulate(out: dict, idx: tuple, value: Expr):
    if idx in out:
        out[idx] = _add(out[idx], value)
    else:
        out[idx] = value


def wedge(a: _Field, b: _Field) -> _Field:
    """Exterior product, determinant convention."""
    if type(a) is not type(b):
        raise TypeError("wedge needs two forms or two multivectors")
    _check_pair(a, b)
    deg = a.degree + b.degree
    if deg > a.chart.dim:
        raise DegreeError(f"wedge degree {deg} exceeds dimension {a.chart.dim}")
    out: dict = {}
    for I, x in a.comps.items():
        for J, y in b.comps.items():
            sign, K = sort_sign(I + J)
            if sign:
                term = _mul(x, y)
                _accumulate(out, K, term if sign > 0 else -term)
    return type(a)._raw(a.chart, deg, out)


def exterior_derivative(a: DiffForm) -> DiffForm:
    if not isinstance(a, DiffForm):
        raise TypeError("exterior derivative takes a form")
    if a.degree >= a.chart.dim:
        raise DegreeError("exterior derivative of a top-degree form")
    out: dict = {}
    for I, c in a.comps.items():
        for i in range(a.chart.dim):
            if i in I:
                continue
            dc = c.diff(i)
            if _is_trivial_zero(dc):
                continue
            sign, K = sort_sign((i,) + I)
            _accumulate(out, K, dc if sign > 0 else -dc)
    return DiffForm._raw(a.chart, a.degree + 1, out)


def _interior(v: _Field, t: _Field) -> _Field:
    if v.degree != 1:
        raise DegreeError("interior product needs a degree-1 argument")
    if t.degree < 1:
        raise DegreeError("interior product into a degree-0 field")
    _check_pair(v, t)
    out: dict = {}
    for I, c in t.comps.items():
        for m, i in enumerate(I):
            vi = v.comps.get((i,))
            if vi is None:
                continue
            term = _mul(vi, c)
            _accumulate(out, I[:m] + I[m + 1:], term if m % 2 == 0 else -term)
    return type(t)._raw(t.chart, t.degree - 1, out)


def interior_form(X: MultiVector, a: DiffForm) -> DiffForm:
    """``i_X a``, contracting the first slot."""
    if not isinstance(X, MultiVector) or not isinstance(a, DiffForm):
        raise TypeError("interior_form(vector, form)")
    return _interior(X, a)


def interior_vector(alpha: DiffForm, P: MultiVector) -> MultiVector:
    """``i_alpha P``, contracting the first slot."""
    if not isinstance(alpha, DiffForm) or not isinstance(P, MultiVector):
        raise TypeError("interior_vector(form, multivector)")
    return _interior(alpha, P)


def pairing(a: _Field, *args: _Field) -> Expr:
    """Evaluate ``a(args[0], ..., args[k-1])``."""
    if len(args) != a.degree:
        raise DegreeError(f"{a.degree}-field evaluated on {len(args)} arguments")
    t = a
    for v in args:
        t = _interior(v, t)
    return t.comps.get((), Const(0))


def directional(X: MultiVector, f) -> Expr:
    """``X.f``."""
    if X.degree != 1:
        raise DegreeError("directional derivative along a non-vector")
    f = X.chart.scalar(f) if not isinstance(f, Expr) else f
    out: Expr = Const(0)
    for (i,), c in X.comps.items():
        out = _add(out, _mul(c, f.diff(i)))
    return X.chart.scalar(out)


def differential(chart: Chart, f) -> DiffForm:
    return exterior_derivative(function_form(chart, f))


def lie_bracket(X: MultiVector, Y: MultiVector) -> MultiVector:
    if X.degree != 1 or Y.degree != 1:
        raise DegreeError("lie_bracket takes vector fields")
    _check_pair(X, Y)
    out: dict = {}
    for (i,), yi in Y.comps.items():
        _accumulate(out, (i,), directional(X, yi))
    for (i,), xi in X.comps.items():
        _accumulate(out, (i,), -directional(Y, xi))
    return MultiVector._raw(X.chart, 1, out)


def lie_derivative_form(X: MultiVector, a: DiffForm) -> DiffForm:
    """Cartan's formula ``L_X a = i_X da + d i_X a``."""
    if a.degree == 0:
        return function_form(a.chart, directional(X, a.comps.get((), Const(0))))
    out = exterior_derivative(interior_form(X, a))
    if a.degree < a.chart.dim:
        out = out + interior_form(X, exterior_derivative(a))
    return out


def _right_derivative(P: MultiVector, i: int) -> MultiVector:
    # remove d_i from the right end: d_I = +-(d_{I without i}) ^ d_i
    out: dict = {}
    k = P.degree
    for I, c in P.comps.items():
        if i in I:
            m = I.index(i) + 1
            out[I[:m - 1] + I[m:]] = c if (k - m) % 2 == 0 else -c
    return MultiVector._raw(P.chart, k - 1, out)


def _partial_field(P: MultiVector, i: int) -> MultiVector:
    return MultiVector._raw(P.chart, P.degree, {I: c.diff(i) for I, c in P.comps.items()})


def _as_multivector(P, chart: Chart | None = None) -> MultiVector:
    if isinstance(P, MultiVector):
        return P
    if chart is None:
        raise TypeError("scalar arguments need a chart")
    return scalar_field(chart, P)


def schouten(P, Q) -> MultiVector:
    """Schouten-Nijenhuis bracket ``[P, Q]``.

    Computed in coordinates with right derivatives in the odd variables and
    then twisted by ``(-1)^((p-1)(q-1))``.  This is the convention in which
    ``[X, Y]`` is the Lie bracket, ``[X, Q] = L_X Q`` and a contact Jacobi pair
    satisfies ``[Lambda, Lambda] = -2 E ^ Lambda``.  In it the Leibniz rule
    reads ``[P, Q^R] = (-1)^((p-1)r) [P,Q]^R + Q^[P,R]``.
    """
    chart = P.chart if isinstance(P, MultiVector) else getattr(Q, "chart", None)
    P, Q = _as_multivector(P, chart), _as_multivector(Q, chart)
    _check_pair(P, Q)
    p, q = P.degree, Q.degree
    deg = p + q - 1
    if deg < 0 or deg > P.chart.dim:
        raise DegreeError(f"Schouten bracket degree {deg} out of range")
    eps = -1 if ((p - 1) * (q - 1)) % 2 else 1
    out = MultiVector.zero(P.chart, deg)
    for i in range(P.chart.dim):
        if p:
            RP = _right_derivative(P, i)
            if RP.comps:
                dQ = _partial_field(Q, i)
                if dQ.comps:
                    out = out + wedge(RP, dQ)
        if q:
            RQ = _right_derivative(Q, i)
            if RQ.comps:
                dP = _partial_field(P, i)
                if dP.comps:
                    term = wedge(RQ, dP)
                    out = out - term if eps > 0 else out + term
    return out if eps > 0 else -out


def lie_derivative_multivector(X: MultiVector, Q) -> MultiVector:
    return schouten(X, Q)


def lambda_sharp_transport(Lam: MultiVector, a: DiffForm) -> MultiVector:
    """The bivector ``W(alpha, beta) = a(Lam# alpha, Lam# beta)``."""
    if Lam.degree != 2 or a.degree != 2:
        raise DegreeError("lambda_sharp_transport takes a bivector and a 2-form")
    _check_pair(Lam, a)
    chart = Lam.chart
    sharps = [interior_vector(dx(chart, i), Lam) for i in range(chart.dim)]
    out: dict = {}
    for i in range(chart.dim):
        if not sharps[i].comps:
            continue
        left = interior_form(sharps[i], a)
        if not left.comps:
            continue
        for j in range(i + 1, chart.dim):
            if sharps[j].comps:
                out[(i, j)] = pairing(left, sharps[j])
    return MultiVector._raw(chart, 2, out)
