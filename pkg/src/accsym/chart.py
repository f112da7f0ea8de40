"""Coordinate charts and points."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ChartError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
FUNCTION_NAMES = frozenset({"sin", "cos", "exp"})


@dataclass(frozen=True)
class Chart:
    """An odd-dimensional coordinate chart ``(x_0, ..., x_{2n})``."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(names) < 3 or len(names) % 2 == 0:
            raise ChartError(f"chart dimension must be odd and >= 3, got {len(names)}")
        if len(set(names)) != len(names):
            raise ChartError(f"coordinate names must be distinct: {names}")
        for name in names:
            if not _IDENT.match(name):
                raise ChartError(f"invalid coordinate name {name!r}")
            if name in FUNCTION_NAMES:
                raise ChartError(f"coordinate name {name!r} clashes with a function name")

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ChartError(f"unknown coordinate {name!r}") from None

    def coord(self, which):
        from .symexpr import Coord

        i = which if isinstance(which, int) else self.index(which)
        if not 0 <= i < self.dim:
            raise ChartError(f"coordinate index {i} out of range for dim {self.dim}")
        return Coord(self, i)

    @property
    def coords(self):
        return tuple(self.coord(i) for i in range(self.dim))

    def scalar(self, value):
        """Canonical scalar on this chart (DSL strings are parsed)."""
        from .symexpr import as_scalar

        return as_scalar(value, self)

    def point(self, values: Sequence) -> "Point":
        return Point(self, values)

    def __str__(self):
        return "(" + ", ".join(self.names) + ")"


@dataclass(frozen=True)
class Point:
    chart: Chart
    coordinates: tuple

    def __init__(self, chart: Chart, coordinates: Sequence):
        coords = tuple(
            c if isinstance(c, float) else Fraction(c) for c in coordinates
        )
        if len(coords) != chart.dim:
            raise ChartError(f"point has {len(coords)} coordinates, chart has {chart.dim}")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "coordinates", coords)

    def __iter__(self):
        return iter(self.coordinates)

    def __len__(self):
        return len(self.coordinates)

    def __getitem__(self, i):
        return self.coordinates[i]
