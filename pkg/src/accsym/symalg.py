"""Pairs of functions, their lifts, symmetry predicates and brackets."""

from __future__ import annotations

from dataclasses import dataclass

from .chart import Chart
from .duality import ACCStructure, ACPJStructure, sharp
from .errors import ConventionError, DomainMismatch, MembershipError, PoleError
from .exterior import (
    DiffForm,
    MultiVector,
    differential,
    directional,
    dx,
    interior_form,
    lie_bracket,
    lie_derivative_form,
    pairing,
    schouten,
)
from .symexpr import EXACT, Expr, Policy, evaluate, is_zero

SYMMETRY_TARGETS = ("omega", "Omega", "E", "Lambda", "acc", "acpj")


@dataclass(frozen=True)
class PairFH:
    f: Expr
    h: Expr

    @classmethod
    def of(cls, chart: Chart, f, h) -> "PairFH":
        return cls(chart.scalar(f), chart.scalar(h))

    def __iter__(self):
        return iter((self.f, self.h))

    def __str__(self):
        return f"({self.f}, {self.h})"


@dataclass(frozen=True)
class GeneratorClass:
    cond1: bool
    cond2: bool
    cond3: bool

    @property
    def memberships(self) -> dict:
        c1, c2, c3 = self.cond1, self.cond2, self.cond3
        return {
            "LGen(Omega)": c1,
            "LGen(omega)": c2 and c3,
            "LGen(Lambda)": c1 and c3,
            "LGen(E,Omega)": c1 and c2,
            "LGen(omega,Omega)": c1 and c2 and c3,
        }


def _ctx(d: ACPJStructure, *pairs) -> list:
    out = [*d.structure.scalars(), *d.scalars()]
    for p in pairs:
        out.extend((p.f, p.h))
    return out


def _zero(x, policy: Policy, ctx) -> bool:
    if isinstance(x, (DiffForm, MultiVector)):
        return all(is_zero(c, policy, ctx) for c in x.comps.values())
    return is_zero(x, policy, ctx)


def check_domain(s: ACCStructure, *pairs: PairFH):
    """Reject pairs that are undefined at the regularity witness."""
    for k, p in enumerate(pairs, 1):
        for e in (p.f, p.h):
            try:
                evaluate(e, s.witness)
            except PoleError:
                raise DomainMismatch(f"pair {k} has a pole at the regularity witness") from None


def dsharp(d: ACPJStructure, f) -> MultiVector:
    """``df#``."""
    return sharp(d, differential(d.chart, f))


def E_dot(d: ACPJStructure, f) -> Expr:
    return directional(d.E, f)


def poisson_bracket(d: ACPJStructure, f, g) -> Expr:
    """``{f, g} = Lambda(df, dg)``."""
    chart = d.chart
    return pairing(d.Lambda, differential(chart, f), differential(chart, g))


def jacobi_bracket(d: ACPJStructure, f, g) -> Expr:
    f, g = d.chart.scalar(f), d.chart.scalar(g)
    return poisson_bracket(d, f, g) - f * E_dot(d, g) + g * E_dot(d, f)


def hamilton_jacobi_lift(d: ACPJStructure, f) -> MultiVector:
    f = d.chart.scalar(f)
    return dsharp(d, f) - d.E * f


def pre_hamiltonian_lift(d: ACPJStructure, pair: PairFH) -> MultiVector:
    return dsharp(d, pair.f) + d.E * pair.h


def LEomega_sharp_dot(d: ACPJStructure, f) -> Expr:
    """``(L_E omega)#.f = Lambda(L_E omega, df)``."""
    return pairing(d.Lambda, d.LEomega, differential(d.chart, f))


def sigma(d: ACPJStructure, pair: PairFH) -> DiffForm:
    """The 1-form ``i_{df#} d omega + h i_E d omega + dh``; it equals ``L_X omega``."""
    dw = d.domega
    return (interior_form(dsharp(d, pair.f), dw) + interior_form(d.E, dw) * pair.h
            + differential(d.chart, pair.h))


def is_conserved(d: ACPJStructure, f, policy: Policy = EXACT) -> bool:
    f = d.chart.scalar(f)
    return is_zero(E_dot(d, f), policy, [*_ctx(d), f])


def _cond1(d, pair, policy, ctx) -> bool:
    return _zero(E_dot(d, pair.f), policy, ctx)


def _cond2(d, pair, policy, ctx) -> bool:
    return _zero(E_dot(d, pair.h) + LEomega_sharp_dot(d, pair.f), policy, ctx)


def _cond3(d, pair, policy, ctx) -> bool:
    sig = sigma(d, pair)
    chart = d.chart
    return all(_zero(pairing(sig, sharp(d, dx(chart, i))), policy, ctx) for i in range(chart.dim))


def classify_generator(s: ACCStructure, d: ACPJStructure, pair: PairFH,
                       policy: Policy | None = None) -> GeneratorClass:
    policy = policy or s.policy
    check_domain(s, pair)
    ctx = _ctx(d, pair)
    return GeneratorClass(_cond1(d, pair, policy, ctx), _cond2(d, pair, policy, ctx),
                          _cond3(d, pair, policy, ctx))


def is_symmetry(which: str, s: ACCStructure, d: ACPJStructure, pair: PairFH,
                policy: Policy | None = None) -> bool:
    """Symmetry predicates expressed through conditions on the pair."""
    policy = policy or s.policy
    check_domain(s, pair)
    ctx = _ctx(d, pair)
    if which == "omega":
        return _zero(sigma(d, pair), policy, ctx)
    if which == "Omega":
        return _cond1(d, pair, policy, ctx)
    if which == "E":
        Ef = E_dot(d, pair.f)
        form = differential(d.chart, Ef) - d.LEomega * Ef
        return _zero(sharp(d, form), policy, ctx) and _cond2(d, pair, policy, ctx)
    if which == "Lambda":
        return _cond1(d, pair, policy, ctx) and _cond3(d, pair, policy, ctx)
    if which == "acc":
        return _cond1(d, pair, policy, ctx) and _zero(sigma(d, pair), policy, ctx)
    if which == "acpj":
        return is_symmetry("E", s, d, pair, policy) and is_symmetry("Lambda", s, d, pair, policy)
    raise ValueError(f"unknown symmetry target {which!r}")


def direct_symmetry(which: str, s: ACCStructure, d: ACPJStructure, pair: PairFH,
                    policy: Policy | None = None) -> bool:
    """Vanishing of the actual Lie derivative along the lift."""
    policy = policy or s.policy
    X = pre_hamiltonian_lift(d, pair)
    ctx = _ctx(d, pair)
    if which == "omega":
        return _zero(lie_derivative_form(X, s.omega), policy, ctx)
    if which == "Omega":
        return _zero(lie_derivative_form(X, s.Omega), policy, ctx)
    if which == "E":
        return _zero(lie_bracket(X, d.E), policy, ctx)
    if which == "Lambda":
        return _zero(schouten(X, d.Lambda), policy, ctx)
    if which == "acc":
        return all(direct_symmetry(w, s, d, pair, policy) for w in ("omega", "Omega"))
    if which == "acpj":
        return all(direct_symmetry(w, s, d, pair, policy) for w in ("E", "Lambda"))
    raise ValueError(f"unknown symmetry target {which!r}")


def _dw_sharp(d: ACPJStructure, f1, f2) -> Expr:
    """``d omega(df1#, df2#)``."""
    return pairing(d.domega, dsharp(d, f1), dsharp(d, f2))


def pair_lift_commutator(s: ACCStructure, d: ACPJStructure, p1: PairFH, p2: PairFH) -> MultiVector:
    """``[X_(f1,h1), X_(f2,h2)]`` assembled from functions, 1-forms and ``#``."""
    chart = d.chart
    f1, h1 = p1
    f2, h2 = p2
    Ef1, Ef2 = E_dot(d, f1), E_dot(d, f2)
    L2 = lie_derivative_form(dsharp(d, f2), s.omega) + d.LEomega * h2
    L1 = lie_derivative_form(dsharp(d, f1), s.omega) + d.LEomega * h1
    alpha = (differential(chart, poisson_bracket(d, f1, f2)) + L2 * Ef1 - L1 * Ef2
             - differential(chart, Ef1) * h2 + differential(chart, Ef2) * h1)
    coef = (poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - _dw_sharp(d, f1, f2)
            + h1 * (E_dot(d, h2) + LEomega_sharp_dot(d, f2))
            - h2 * (E_dot(d, h1) + LEomega_sharp_dot(d, f1)))
    return sharp(d, alpha) + d.E * coef


def reduced_commutator(s: ACCStructure, d: ACPJStructure, p1: PairFH, p2: PairFH) -> MultiVector:
    """The commutator formula specialised to pairs generating symmetries of ``E``."""
    chart = d.chart
    f1, h1 = p1
    f2, h2 = p2
    alpha = (differential(chart, poisson_bracket(d, f1, f2))
             + lie_derivative_form(dsharp(d, f2), s.omega) * E_dot(d, f1)
             - lie_derivative_form(dsharp(d, f1), s.omega) * E_dot(d, f2))
    coef = poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - _dw_sharp(d, f1, f2)
    return sharp(d, alpha) + d.E * coef


def bracket_omega(s: ACCStructure, d: ACPJStructure, p1: PairFH, p2: PairFH) -> PairFH:
    """Bracket on generators of symmetries of ``omega``; membership is not enforced."""
    f1, h1 = p1
    f2, h2 = p2
    first = poisson_bracket(d, f1, f2) - h2 * E_dot(d, f1) + h1 * E_dot(d, f2)
    second = poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - _dw_sharp(d, f1, f2)
    return PairFH(first, second)


def _require(cond: bool, message: str):
    if not cond:
        raise MembershipError(message)


def bracket_Omega(s: ACCStructure, d: ACPJStructure, p1: PairFH, p2: PairFH,
                  policy: Policy | None = None) -> PairFH:
    """Bracket on pairs with conserved first entry."""
    policy = policy or s.policy
    check_domain(s, p1, p2)
    ctx = _ctx(d, p1, p2)
    _require(_cond1(d, p1, policy, ctx), "cond1 violated for pair 1")
    _require(_cond1(d, p2, policy, ctx), "cond1 violated for pair 2")
    return _bracket_Omega(d, p1, p2)


def _bracket_Omega(d: ACPJStructure, p1: PairFH, p2: PairFH) -> PairFH:
    f1, h1 = p1
    f2, h2 = p2
    second = (poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - _dw_sharp(d, f1, f2)
              + h1 * (E_dot(d, h2) + LEomega_sharp_dot(d, f2))
              - h2 * (E_dot(d, h1) + LEomega_sharp_dot(d, f1)))
    return PairFH(poisson_bracket(d, f1, f2), second)


def bracket_acc_forms(d: ACPJStructure, p1: PairFH, p2: PairFH) -> tuple:
    """The three equivalent second components of the bracket on ``LGen(omega, Omega)``."""
    f1, h1 = p1
    f2, h2 = p2
    dw = _dw_sharp(d, f1, f2)
    line1 = poisson_bracket(d, f1, h2) - poisson_bracket(d, f2, h1) - dw
    line2 = dw + h2 * LEomega_sharp_dot(d, f1) - h1 * LEomega_sharp_dot(d, f2)
    line3 = dw + h1 * E_dot(d, h2) - h2 * E_dot(d, h1)
    return poisson_bracket(d, f1, f2), (line1, line2, line3)


def bracket_acc(s: ACCStructure, d: ACPJStructure, p1: PairFH, p2: PairFH,
                policy: Policy | None = None) -> PairFH:
    """Bracket on generators of symmetries of ``(omega, Omega)``.

    Both pairs must be members; the three equivalent forms are compared and a
    disagreement raises ``ConventionError``.
    """
    policy = policy or s.policy
    check_domain(s, p1, p2)
    ctx = _ctx(d, p1, p2)
    for k, p in enumerate((p1, p2), 1):
        _require(_cond1(d, p, policy, ctx), f"cond1 violated for pair {k}")
        _require(_cond2(d, p, policy, ctx), f"cond2 violated for pair {k}")
        _require(_cond3(d, p, policy, ctx), f"cond3 violated for pair {k}")
    first, (l1, l2, l3) = bracket_acc_forms(d, p1, p2)
    if not (_zero(l1 - l2, policy, ctx) and _zero(l1 - l3, policy, ctx)):
        raise ConventionError("equivalent forms of the (omega, Omega) bracket disagree")
    return PairFH(first, l1)


def product(p1: PairFH, p2: PairFH) -> PairFH:
    return PairFH(p1.f * p2.f, p1.f * p2.h + p2.f * p1.h)


def lift_of_product_check(d: ACPJStructure, p1: PairFH, p2: PairFH, policy: Policy = EXACT) -> bool:
    lhs = pre_hamiltonian_lift(d, product(p1, p2))
    rhs = pre_hamiltonian_lift(d, p2) * p1.f + pre_hamiltonian_lift(d, p1) * p2.f
    return _zero(lhs - rhs, policy, _ctx(d, p1, p2))


def lie_derive_pair(X: MultiVector, pair: PairFH) -> PairFH:
    return PairFH(directional(X, pair.f), directional(X, pair.h))


def pairs_equal(a: PairFH, b: PairFH, policy: Policy = EXACT, context=()) -> bool:
    return is_zero(a.f - b.f, policy, context) and is_zero(a.h - b.h, policy, context)
