"""Built-in example structures and the pair fixtures used by the suites.

Each entry carries, besides the structure, a few generators known in closed
form: conserved functions, a sampler of generators of symmetries of
``(omega, Omega)``, and vector fields that are exact symmetries of ``(E, Lambda)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .chart import Chart
from .duality import CONTACT, COSYMPLECTIC, MIXED, ACCStructure, ACPJStructure, compute_dual, validate_acc
from .errors import AccSymError
from .exterior import MultiVector
from .structfile import StructureSpec
from .symalg import PairFH
from .symexpr import EXACT, Expr, RatFunc


class UnknownExample(AccSymError, KeyError):
    pass


@dataclass(frozen=True, eq=False)
class ExampleEntry:
    name: str
    spec: StructureSpec
    expected_class: str
    expected_E: dict | None
    expected_Lambda: dict | None
    notes: str
    conserved: tuple = ()
    sample_generator: Callable | None = field(default=None, repr=False)
    symmetry_fields: tuple = ()
    strip_from_f: tuple = ()

    @property
    def chart(self) -> Chart:
        return self.spec.chart

    @property
    def structure(self) -> ACCStructure:
        return _structure(self.name)

    @property
    def dual(self) -> ACPJStructure:
        return _dual(self.name)

    @property
    def expected_dual(self):
        if self.expected_E is None:
            return None
        return (MultiVector(self.chart, 1, self.expected_E), MultiVector(self.chart, 2, self.expected_Lambda))

    def conserved_exprs(self) -> list[Expr]:
        return [self.chart.scalar(c) for c in self.conserved]

    def generator(self, rng: random.Random) -> PairFH:
        """A random generator of a symmetry of ``(omega, Omega)``."""
        f, h = self.sample_generator(self, rng)
        return PairFH.of(self.chart, f, h)

    def symmetry_vector_fields(self) -> list[MultiVector]:
        return [MultiVector(self.chart, 1, comps) for comps in self.symmetry_fields]

    def normalize_pair(self, pair: PairFH) -> PairFH:
        """Drop from ``f`` the terms whose differential lies in the kernel of ``#``.

        Such terms change the pair but not its lift; they only occur when
        ``omega`` is closed.
        """
        if not self.strip_from_f or not isinstance(pair.f, RatFunc) or pair.f.den:
            return pair
        keep = [self.chart.index(n) for n in self.strip_from_f]
        num = {m: c for m, c in pair.f.num.items()
               if not any(m) or any(m[i] for i in range(len(m)) if i not in keep)}
        return PairFH(RatFunc(self.chart, num), pair.h)


# --------------------------------------------------------------------------
# random polynomials


def random_coefficient(rng: random.Random) -> Fraction:
    c = rng.choice([1, 1, 2, 3, -1, -2, Fraction(1, 2), Fraction(-3, 2)])
    return Fraction(c)


def random_polynomial(rng: random.Random, gens, max_degree: int = 2, terms: int = 3,
                      constant: bool = True) -> Expr:
    """Random polynomial in the expressions ``gens`` with small rational coefficients."""
    gens = list(gens)
    chart = gens[0].chart()
    out: Expr = RatFunc.constant(chart, random_coefficient(rng) if constant and rng.random() < 0.5 else 0)
    for _ in range(terms):
        term: Expr = RatFunc.constant(chart, random_coefficient(rng))
        for _ in range(rng.randint(1, max_degree)):
            term = term * rng.choice(gens)
        out = out + term
    return out


def random_function(rng: random.Random, chart: Chart, max_degree: int = 2, terms: int = 3) -> Expr:
    return random_polynomial(rng, [chart.scalar(n) for n in chart.names], max_degree, terms)


def random_conserved(entry: ExampleEntry, rng: random.Random, max_degree: int = 2, terms: int = 3) -> Expr:
    return random_polynomial(rng, entry.conserved_exprs(), max_degree, terms)


def random_vector_field(rng: random.Random, chart: Chart, max_degree: int = 1) -> MultiVector:
    return MultiVector(chart, 1, {(i,): random_function(rng, chart, max_degree, 2)
                                  for i in range(chart.dim) if rng.random() < 0.8})


def random_multivector(rng: random.Random, chart: Chart, degree: int, max_degree: int = 1) -> MultiVector:
    from itertools import combinations

    comps = {}
    for idx in combinations(range(chart.dim), degree):
        if rng.random() < 0.6:
            comps[idx] = random_function(rng, chart, max_degree, 2)
    return MultiVector(chart, degree, comps)


# --------------------------------------------------------------------------
# generator families


def _contact_family(entry, rng):
    f = random_conserved(entry, rng)
    return f, -f + random_coefficient(rng)


def _cosymplectic_family(entry, rng):
    return random_conserved(entry, rng), random_coefficient(rng)


def _m3_family(entry, rng):
    # Omega = -d omega, so (2.5) reads dh = df
    f = random_conserved(entry, rng)
    return f, f + random_coefficient(rng)


def _m3b_family(entry, rng):
    # f = b(p), h = k(p) with b' = k + (1 - p) k'
    chart = entry.chart
    p = chart.scalar("p")
    k = random_polynomial(rng, [p], 2, 2)
    K = _antiderivative(k, chart.index("p"))
    b = (1 - p) * k + 2 * K + random_coefficient(rng)
    return b, k


def _em3_family(entry, rng, eps=Fraction(1, 10)):
    # f = a (p + eps z) + b(q), h = -a p + c(q) with b' = -(eps c + c')
    chart = entry.chart
    q, p, z = (chart.scalar(n) for n in ("q", "p", "z"))
    a = random_coefficient(rng)
    c = random_polynomial(rng, [q], 2, 2)
    C = _antiderivative(c, chart.index("q"))
    b = -(C * eps + c) + random_coefficient(rng)
    return a * (p + z * eps) + b, -a * p + c


def _antiderivative(poly: RatFunc, i: int) -> RatFunc:
    num = {}
    for m, c in poly.num.items():
        mm = list(m)
        mm[i] += 1
        num[tuple(mm)] = c / mm[i]
    return RatFunc(poly.chart_, num)


# --------------------------------------------------------------------------
# catalogue

_Q3 = ("q", "p", "z")
_Q5 = ("q1", "p1", "q2", "p2", "z")


def _spec(names, omega, Omega) -> StructureSpec:
    return StructureSpec(Chart(names), omega, Omega)


_ENTRIES = [
    ExampleEntry(
        "C3", _spec(_Q3, {"q": "-p", "z": "1"}, {"q^p": "1"}), CONTACT,
        {"z": "1"}, {"q^p": "-1", "p^z": "p"},
        "Standard contact form dz - p dq with Omega = d omega.",
        ("q", "p"), _contact_family, ({"q": 1}, {"z": 1}),
    ),
    ExampleEntry(
        "C5", _spec(_Q5, {"q1": "-p1", "q2": "-p2", "z": "1"}, {"q1^p1": "1", "q2^p2": "1"}), CONTACT,
        {"z": "1"}, {"q1^p1": "-1", "p1^z": "p1", "q2^p2": "-1", "p2^z": "p2"},
        "Contact form dz - p1 dq1 - p2 dq2 in dimension five.",
        ("q1", "p1", "q2", "p2"), _contact_family, ({"q1": 1}, {"q2": 1}, {"z": 1}),
    ),
    ExampleEntry(
        "K3", _spec(_Q3, {"z": "1"}, {"q^p": "1"}), COSYMPLECTIC,
        {"z": "1"}, {"q^p": "-1"},
        "Cosymplectic pair (dz, dq^dp); the dual is a coPoisson pair.",
        ("q", "p"), _cosymplectic_family, ({"q": 1}, {"p": 1}, {"z": 1}), ("z",),
    ),
    ExampleEntry(
        "M3", _spec(_Q3, {"q": "-p", "z": "1"}, {"q^p": "-1"}), MIXED,
        {"z": "1"}, {"q^p": "1", "p^z": "-p"},
        "Mixed pair with Omega = -d omega, so Omega + d omega = 0.",
        ("q", "p"), _m3_family, ({"q": 1}, {"z": 1}),
    ),
    ExampleEntry(
        "M3b", _spec(_Q3, {"q": "-p", "z": "1"}, {"q^p": "-1", "p^z": "-1"}), MIXED,
        {"q": "1/(1 - p)", "z": "1/(1 - p)"}, {"q^p": "1/(1 - p)", "p^z": "-p/(1 - p)"},
        "Mixed pair with L_E omega = dp/(1 - p); regular where p != 1.",
        ("p", "z - q"), _m3b_family, ({"q": 1}, {"z": 1}),
    ),
    ExampleEntry(
        "EM3", _spec(_Q3, {"q": "-p", "z": "1"}, {"q^p": "1", "q^z": "1/10"}), MIXED,
        {"p": "-1/10", "z": "1"}, {"q^p": "-1", "p^z": "p"},
        "C3 deformed by the closed 2-form G = (1/10) dq^dz, a flat analogue of a "
        "charged-particle phase 2-form.",
        ("q", "p + 1/10*z"), _em3_family, ({"q": 1}, {"z": 1}),
    ),
]

_BY_NAME = {e.name: e for e in _ENTRIES}


def list_examples() -> list[tuple[str, str]]:
    return [(e.name, e.expected_class) for e in _ENTRIES]


def get_example(name: str) -> ExampleEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(_BY_NAME)}") from None


@lru_cache(maxsize=None)
def _structure(name: str) -> ACCStructure:
    e = get_example(name)
    omega, Omega = e.spec.forms()
    return validate_acc(e.chart, omega, Omega, EXACT)


@lru_cache(maxsize=None)
def _dual(name: str) -> ACPJStructure:
    return compute_dual(_structure(name))


def match_example(spec: StructureSpec) -> ExampleEntry | None:
    """The catalogue entry whose chart and forms are written exactly as in ``spec``."""
    for e in _ENTRIES:
        if (e.chart.names == spec.chart.names and e.spec.omega == spec.omega
                and e.spec.Omega == spec.Omega):
            return e
    return None
