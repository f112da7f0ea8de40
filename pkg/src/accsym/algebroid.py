"""The F-twisted Lie algebroid on ``TM + R`` and its maps to and from pairs."""

from __future__ import annotations

from dataclasses import dataclass

from .duality import ACCStructure, ACPJStructure
from .errors import NotClosedError, StructureError
from .exterior import DiffForm, MultiVector, directional, exterior_derivative, lie_bracket, pairing
from .symalg import PairFH, pre_hamiltonian_lift
from .symexpr import EXACT, Expr, Policy, is_zero


@dataclass(frozen=True)
class AlgebroidSection:
    X: MultiVector
    fbreve: Expr

    def __post_init__(self):
        if self.X.degree != 1:
            raise StructureError("section needs a vector field")

    @classmethod
    def of(cls, X: MultiVector, fbreve) -> "AlgebroidSection":
        return cls(X, X.chart.scalar(fbreve))

    def scale(self, h) -> "AlgebroidSection":
        h = self.X.chart.scalar(h)
        return AlgebroidSection(self.X * h, h * self.fbreve)

    def __add__(self, other: "AlgebroidSection") -> "AlgebroidSection":
        return AlgebroidSection(self.X + other.X, self.fbreve + other.fbreve)

    def __sub__(self, other: "AlgebroidSection") -> "AlgebroidSection":
        return AlgebroidSection(self.X - other.X, self.fbreve - other.fbreve)

    def is_zero(self, policy: Policy = EXACT, context=()) -> bool:
        return (all(is_zero(c, policy, context) for c in self.X.comps.values())
                and is_zero(self.fbreve, policy, context))

    def __str__(self):
        return f"({self.X}; {self.fbreve})"


@dataclass(frozen=True)
class ClosedTwoForm:
    F: DiffForm

    @classmethod
    def validated(cls, F: DiffForm, policy: Policy = EXACT) -> "ClosedTwoForm":
        if F.degree != 2:
            raise StructureError("F must be a 2-form")
        if F.chart.dim > 2:
            dF = exterior_derivative(F)
            if not all(is_zero(c, policy, list(F.comps.values())) for c in dF.comps.values()):
                raise NotClosedError("F is not closed")
        return cls(F)

    @classmethod
    def from_structure(cls, s: ACCStructure) -> "ClosedTwoForm":
        """``F = Omega + d omega``."""
        return cls.validated(s.Omega + exterior_derivative(s.omega), s.policy)


def algebroid_bracket(F: ClosedTwoForm, sec1: AlgebroidSection, sec2: AlgebroidSection) -> AlgebroidSection:
    X1, f1 = sec1.X, sec1.fbreve
    X2, f2 = sec2.X, sec2.fbreve
    g = directional(X1, f2) - directional(X2, f1) + pairing(F.F, X1, X2)
    return AlgebroidSection(lie_bracket(X1, X2), g)


def check_leibniz(F: ClosedTwoForm, sec1: AlgebroidSection, sec2: AlgebroidSection, h,
                  policy: Policy = EXACT) -> bool:
    """``[[s1; h s2]] = h [[s1; s2]] + (X1.h) s2``."""
    h = sec1.X.chart.scalar(h)
    lhs = algebroid_bracket(F, sec1, sec2.scale(h))
    rhs = algebroid_bracket(F, sec1, sec2).scale(h) + sec2.scale(directional(sec1.X, h))
    ctx = [h, sec1.fbreve, sec2.fbreve, *sec1.X.comps.values(), *sec2.X.comps.values()]
    return (lhs - rhs).is_zero(policy, ctx)


def morphism_s(s: ACCStructure, d: ACPJStructure, pair: PairFH) -> AlgebroidSection:
    return AlgebroidSection(pre_hamiltonian_lift(d, pair), pair.f - pair.h)


def morphism_r(s: ACCStructure, d: ACPJStructure, sec: AlgebroidSection) -> PairFH:
    w = pairing(s.omega, sec.X)
    return PairFH(w + sec.fbreve, w)
