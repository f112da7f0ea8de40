"""Exact scalar expressions: parsing, arithmetic, derivatives, zero tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..chart import Chart, Point
from ..errors import ChartError, PolicyError, PoleError
from . import _poly
from .expr import (
    Add,
    Const,
    Coord,
    Div,
    Expr,
    Func,
    IntPow,
    Mul,
    Neg,
    RatFunc,
    as_scalar,
    coerce,
    cos,
    exp,
    normalize,
    sin,
    to_ratfunc,
)
from .parser import parse_expr

__all__ = [
    "Add", "Const", "Coord", "Div", "Expr", "Func", "IntPow", "Mul", "Neg", "RatFunc",
    "Policy", "EXACT", "as_scalar", "coerce", "cos", "exp", "sin", "normalize", "to_ratfunc",
    "parse_expr", "differentiate", "is_zero", "evaluate", "sample_points", "expr_class",
    "denominators",
]

RATIONAL = "rational-function"
TRANSCENDENTAL = "transcendental"


@dataclass(frozen=True)
class Policy:
    """How ``= 0`` predicates are decided."""

    mode: str = "exact"
    samples: int = 50
    seed: int = 0
    tol: float = 1e-9

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown policy mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")

    @classmethod
    def sampled(cls, samples: int = 50, seed: int = 0, tol: float = 1e-9) -> "Policy":
        return cls("sampled", samples, seed, tol)


EXACT = Policy()


def expr_class(e: Expr) -> str:
    return RATIONAL if coerce(e).is_rational else TRANSCENDENTAL


def differentiate(e, coord, chart: Chart | None = None) -> Expr:
    """Partial derivative of ``e`` with respect to a coordinate (index or name)."""
    e = coerce(e)
    chart = chart or e.chart()
    if isinstance(coord, str):
        if chart is None:
            raise ChartError("coordinate names need a chart")
        coord = chart.index(coord)
    if not isinstance(coord, int) or coord < 0 or (chart is not None and coord >= chart.dim):
        raise ChartError(f"invalid coordinate index {coord!r}")
    if chart is None:
        return Const(0)
    return normalize(e, chart).diff(coord)


def _point_values(point, dim: int | None):
    values = tuple(point.coordinates if isinstance(point, Point) else point)
    if dim is not None and len(values) != dim:
        raise ChartError(f"point has {len(values)} coordinates, chart has {dim}")
    return values


def evaluate(e, point):
    """Value of ``e`` at ``point``.

    Exact (a ``Fraction``) when every coordinate is rational and ``e`` has no
    transcendental node; a float otherwise.  Raises ``PoleError`` on a pole.
    """
    e = coerce(e)
    chart = e.chart()
    values = _point_values(point, chart.dim if chart else None)
    exact = e.is_rational and not any(isinstance(v, float) for v in values)
    if exact:
        pt = tuple(_poly.to_mpq(Fraction(v)) for v in values)
        return _poly.to_fraction(e._eval(pt, True))
    pt = tuple(float(v) for v in values)
    try:
        return float(e._eval(pt, False))
    except ZeroDivisionError as exc:
        if isinstance(exc, PoleError):
            raise
        raise PoleError(str(exc)) from None


def denominators(e: Expr) -> list:
    """Subexpressions whose vanishing makes ``e`` undefined."""
    e = coerce(e)
    if isinstance(e, RatFunc):
        return [RatFunc(e.chart_, a) for a in e.denominators()]
    out = []
    if isinstance(e, Div):
        out.append(e.den)
    elif isinstance(e, IntPow) and e.exponent < 0:
        out.append(e.base)
    for c in e.children():
        out.extend(denominators(c))
    return out


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-100, 100), rng.randint(1, 10))


def sample_points(chart: Chart, count: int, seed: int = 0, exprs: Iterable = (),
                  max_attempts: int = 1000) -> list[Point]:
    """Seeded rational points from the sampling box avoiding poles of ``exprs``.

    Each point is redrawn up to ``max_attempts`` times if any expression is
    undefined there.
    """
    rng = random.Random(seed)
    exprs = [coerce(x) for x in exprs]
    points = []
    for _ in range(count):
        for _attempt in range(max_attempts):
            pt = tuple(_random_rational(rng) for _ in range(chart.dim))
            if _regular_at(exprs, pt):
                points.append(Point(chart, pt))
                break
        else:
            raise PolicyError(f"no pole-free sample point found in {max_attempts} attempts")
    return points


def _regular_at(exprs: Sequence[Expr], pt) -> bool:
    for e in exprs:
        try:
            evaluate(e, pt)
        except (PoleError, ValueError, OverflowError):
            return False
    return True


def is_zero(e, policy: Policy = EXACT, context: Iterable = ()) -> bool:
    """Decide ``e == 0``.

    Exact mode needs a rational-function expression and tests the canonical
    numerator.  Sampled mode checks ``|e| <= tol`` at seeded points drawn
    from the sampling box; ``context`` lists further expressions whose poles
    are avoided so that related checks share the same points.
    """
    e = coerce(e)
    if policy.mode == "exact":
        if not e.is_rational:
            raise PolicyError("exact zero test requested on a transcendental expression")
        chart = e.chart()
        if chart is None:
            return normalize(e).is_syntactic_zero()
        return to_ratfunc(e, chart).is_zero()
    if isinstance(e, RatFunc) and e.is_zero():
        return True
    if isinstance(e, Const):
        return abs(e.value) <= policy.tol
    chart = e.chart()
    if chart is None:
        return abs(evaluate(e, ())) <= policy.tol
    points = sample_points(chart, policy.samples, policy.seed, [e, *context])
    for pt in points:
        if abs(evaluate(e, pt)) > policy.tol:
            return False
    return True
