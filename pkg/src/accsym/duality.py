"""Almost-cosymplectic-contact pairs and their dual almost-coPoisson-Jacobi pairs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chart import Chart, Point
from .errors import (
    DegenerateError,
    DualityError,
    NotClosedError,
    PolicyError,
    PoleError,
    StructureError,
    WitnessSearchFailed,
)
from .exterior import (
    DiffForm,
    MultiVector,
    dx,
    exterior_derivative,
    interior_form,
    interior_vector,
    lambda_sharp_transport,
    lie_derivative_form,
    pairing,
    partial,
    schouten,
    wedge,
)
from .report import CheckResult, check
from .symexpr import EXACT, Const, Expr, Policy, RatFunc, evaluate, is_zero

CONTACT, COSYMPLECTIC, MIXED = "contact", "cosymplectic", "mixed"
WITNESS_ATTEMPTS = 1000


@dataclass(frozen=True, eq=False)
class ACCStructure:
    chart: Chart
    omega: DiffForm
    Omega: DiffForm
    witness: Point
    policy: Policy = EXACT

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for t in (self.omega, self.Omega) for c in t.comps.values())

    def scalars(self) -> list:
        return [*self.omega.comps.values(), *self.Omega.comps.values()]


@dataclass(frozen=True, eq=False)
class ACPJStructure:
    structure: ACCStructure
    E: MultiVector
    Lambda: MultiVector
    domega: DiffForm = field(repr=False)
    LEomega: DiffForm = field(repr=False)

    @property
    def chart(self) -> Chart:
        return self.structure.chart

    @property
    def omega(self) -> DiffForm:
        return self.structure.omega

    def scalars(self) -> list:
        return [*self.E.comps.values(), *self.Lambda.comps.values()]


@dataclass(frozen=True)
class DegenerateReport:
    """Outcome of a deformation that did not give a regular pair."""

    reason: str
    witness_search: str


def top_form(chart: Chart, omega: DiffForm, Omega: DiffForm) -> DiffForm:
    """``omega ^ Omega^n``."""
    out = omega
    for _ in range(chart.n):
        out = wedge(out, Omega)
    return out


def _tensor_zero(t, policy: Policy, context=()) -> bool:
    return all(is_zero(c, policy, context) for c in t.comps.values())


def _policy_for(exprs, policy: Policy) -> Policy:
    if policy.mode == "exact" and not all(e.is_rational for e in exprs):
        raise PolicyError("exact policy requested on transcendental components")
    return policy


def find_witness(chart: Chart, top: Expr, context, policy: Policy) -> Point:
    """First point of the seeded sequence where ``top`` is defined and nonzero."""
    rng = random.Random(policy.seed)
    for _ in range(WITNESS_ATTEMPTS):
        pt = tuple(Fraction(rng.randint(-100, 100), rng.randint(1, 10)) for _ in range(chart.dim))
        try:
            for c in context:
                evaluate(c, pt)
            value = evaluate(top, pt)
        except (PoleError, ValueError, OverflowError):
            continue
        if abs(value) > (0 if isinstance(value, Fraction) else policy.tol):
            return Point(chart, pt)
    raise WitnessSearchFailed(f"witness search failed after {WITNESS_ATTEMPTS} samples")


def validate_acc(chart: Chart, omega: DiffForm, Omega: DiffForm, policy: Policy = EXACT) -> ACCStructure:
    if not isinstance(omega, DiffForm) or omega.degree != 1:
        raise StructureError("omega must be a 1-form")
    if not isinstance(Omega, DiffForm) or Omega.degree != 2:
        raise StructureError("Omega must be a 2-form")
    if omega.chart != chart or Omega.chart != chart:
        raise StructureError("omega and Omega must live on the given chart")
    context = [*omega.comps.values(), *Omega.comps.values()]
    _policy_for(context, policy)
    if not _tensor_zero(exterior_derivative(Omega), policy, context):
        raise NotClosedError("Omega not closed")
    top = top_form(chart, omega, Omega).comps.get(tuple(range(chart.dim)), Const(0))
    if isinstance(top, RatFunc) and top.is_zero() or top.is_syntactic_zero():
        raise DegenerateError("omega ^ Omega^n vanishes identically")
    if policy.mode == "exact" and is_zero(top, policy):
        raise DegenerateError("omega ^ Omega^n vanishes identically")
    witness = find_witness(chart, top, context, policy)
    return ACCStructure(chart, omega, Omega, witness, policy)


def classify(s: ACCStructure, policy: Policy | None = None) -> str:
    policy = policy or s.policy
    dw = exterior_derivative(s.omega)
    ctx = s.scalars()
    if _tensor_zero(s.Omega - dw, policy, ctx):
        return CONTACT
    if _tensor_zero(dw, policy, ctx):
        return COSYMPLECTIC
    return MIXED


def _entry_zero(x: Expr, policy: Policy, context) -> bool:
    if isinstance(x, RatFunc):
        return x.is_zero()
    if x.is_syntactic_zero():
        return True
    if x.is_rational:
        return is_zero(x, EXACT)
    return is_zero(x, policy, context)


def _complexity(x: Expr):
    if isinstance(x, RatFunc):
        return (0 if x.is_constant() else 1, len(x.num) + len(x.den), str(x))
    return (2, len(str(x)), str(x))


def solve_linear(A, B, policy: Policy = EXACT, context=()):
    """Solve ``A X = B`` over the field of scalar expressions.

    ``A`` is m x n with m >= n and full column rank; ``B`` is m x r.  Returns
    the n x r solution.  Raises ``DualityError`` when a column has no usable
    pivot or the system is inconsistent.
    """
    m, n = len(A), len(A[0])
    rows = [list(A[i]) + list(B[i]) for i in range(m)]
    width = len(rows[0])
    for col in range(n):
        cands = [r for r in range(col, m) if not _entry_zero(rows[r][col], policy, context)]
        if not cands:
            raise DualityError("symbolic pivot vanishes identically; needs chart restriction")
        best = min(cands, key=lambda r: _complexity(rows[r][col]))
        rows[col], rows[best] = rows[best], rows[col]
        piv = rows[col][col]
        rows[col] = [x if k < col else x / piv for k, x in enumerate(rows[col])]
        for r in range(m):
            if r == col:
                continue
            factor = rows[r][col]
            if _entry_zero(factor, policy, context):
                continue
            rows[r] = [rows[r][k] if k < col else rows[r][k] - factor * rows[col][k]
                       for k in range(width)]
    for r in range(n, m):
        if not all(_entry_zero(x, policy, context) for x in rows[r][n:]):
            raise DualityError("dual system is inconsistent")
    return [rows[i][n:] for i in range(n)]


def dual_system(s: ACCStructure):
    """Coefficient matrix and right-hand sides of the dual linear systems.

    Unknown vector ``V``; rows ``j < dim`` encode ``(i_V Omega)_j``, the last row
    ``omega(V)``.  RHS column 0 gives ``E``; column ``1 + i`` gives ``Lambda#(dx^i)``
    once ``E`` is substituted.
    """
    chart = s.chart
    dim = chart.dim
    A = [[s.Omega[(k, j)] for k in range(dim)] for j in range(dim)]
    A.append([s.omega[(k,)] for k in range(dim)])
    return A


def compute_dual(s: ACCStructure, policy: Policy | None = None) -> ACPJStructure:
    policy = policy or s.policy
    chart = s.chart
    dim = chart.dim
    ctx = s.scalars()
    A = dual_system(s)
    rhs_E = [[Const(0)] for _ in range(dim)] + [[Const(1)]]
    E_col = solve_linear(A, rhs_E, policy, ctx)
    E_comps = [chart.scalar(E_col[k][0]) for k in range(dim)]
    B = []
    for j in range(dim):
        # dx^i - E^i omega, evaluated in slot j, for every i
        B.append([chart.scalar((1 if i == j else 0) - E_comps[i] * s.omega[(j,)]) for i in range(dim)])
    B.append([Const(0)] * dim)
    V = solve_linear(A, B, policy, ctx)
    E = MultiVector(chart, 1, {(k,): E_comps[k] for k in range(dim)})
    lam = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            lam[(i, j)] = V[j][i]
    Lam = MultiVector(chart, 2, lam)
    return _assemble(s, E, Lam)


def _assemble(s: ACCStructure, E: MultiVector, Lam: MultiVector) -> ACPJStructure:
    return ACPJStructure(s, E, Lam, exterior_derivative(s.omega), lie_derivative_form(E, s.omega))


def with_tensors(d: ACPJStructure, E: MultiVector | None = None, Lambda: MultiVector | None = None,
                 omega: DiffForm | None = None) -> ACPJStructure:
    """A copy of ``d`` with some tensors replaced (used for fault injection)."""
    s = d.structure
    if omega is not None:
        s = ACCStructure(s.chart, omega, s.Omega, s.witness, s.policy)
    return _assemble(s, E if E is not None else d.E, Lambda if Lambda is not None else d.Lambda)


def system_rank_at(s: ACCStructure, point) -> int:
    """Exact rank of the dual coefficient matrix at ``point``."""
    M = [[evaluate(x, point) for x in row] for row in dual_system(s)]
    rank = 0
    cols = len(M[0])
    for col in range(cols):
        piv = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][col] != 0:
                f = M[r][col] / M[rank][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def pointwise_dual(s: ACCStructure, point):
    """Float (E, Lambda) matrices at ``point`` by a numeric least-squares solve."""
    import numpy as np

    dim = s.chart.dim
    A = np.array([[float(evaluate(x, point)) for x in row] for row in dual_system(s)])
    rhs = np.zeros(dim + 1)
    rhs[dim] = 1.0
    E = np.linalg.lstsq(A, rhs, rcond=None)[0]
    w = A[dim]
    B = np.zeros((dim + 1, dim))
    B[:dim, :] = np.eye(dim) - np.outer(w, E)
    V = np.linalg.lstsq(A, B, rcond=None)[0]
    return E, V.T  # row i of V.T is Lambda#(dx^i)


def sharp(d: ACPJStructure, alpha: DiffForm) -> MultiVector:
    return interior_vector(alpha, d.Lambda)


def flat(s: ACCStructure, X: MultiVector) -> DiffForm:
    return interior_form(X, s.Omega)


def project(which: str, d: ACPJStructure, arg):
    """Splitting projections ``p1, p2`` (vectors) and ``q1, q2`` (1-forms)."""
    if which in ("p1", "p2"):
        if not isinstance(arg, MultiVector) or arg.degree != 1:
            raise TypeError(f"{which} takes a vector field")
        p2 = d.E * pairing(d.omega, arg)
        return p2 if which == "p2" else arg - p2
    if which in ("q1", "q2"):
        if not isinstance(arg, DiffForm) or arg.degree != 1:
            raise TypeError(f"{which} takes a 1-form")
        q2 = d.omega * pairing(arg, d.E)
        return q2 if which == "q2" else arg - q2
    raise ValueError(f"unknown projection {which!r}")


def _zero(t, policy, ctx) -> bool:
    if isinstance(t, Expr):
        return is_zero(t, policy, ctx) if not (isinstance(t, RatFunc) and t.is_zero()) else True
    return _tensor_zero(t, policy, ctx)


def verify_dual_identities(s: ACCStructure, d: ACPJStructure, policy: Policy | None = None) -> list[CheckResult]:
    policy = policy or s.policy
    chart = s.chart
    omega = d.omega
    ctx = [*s.scalars(), *d.scalars()]
    out = []
    out.append(check("reeb_normalization", _zero(pairing(omega, d.E) - 1, policy, ctx), "i_E omega = 1"))
    out.append(check("reeb_kernel", _zero(interior_form(d.E, s.Omega), policy, ctx), "i_E Omega = 0"))
    out.append(check("lambda_kills_omega", _zero(interior_vector(omega, d.Lambda), policy, ctx),
                     "i_omega Lambda = 0"))
    ok_p1 = all(_zero(sharp(d, flat(s, partial(chart, i))) - project("p1", d, partial(chart, i)), policy, ctx)
                for i in range(chart.dim))
    out.append(check("sharp_flat_is_p1", ok_p1, "Lambda# o Omega_flat = p1 on basis vectors"))
    ok_q1 = all(_zero(flat(s, sharp(d, dx(chart, i))) - project("q1", d, dx(chart, i)), policy, ctx)
                for i in range(chart.dim))
    out.append(check("flat_sharp_is_q1", ok_q1, "Omega_flat o Lambda# = q1 on basis covectors"))
    EL = schouten(d.E, d.Lambda)
    LL = schouten(d.Lambda, d.Lambda)
    rhs1 = -wedge(d.E, sharp(d, d.LEomega))
    rhs2 = wedge(d.E, lambda_sharp_transport(d.Lambda, d.domega)) * 2
    out.append(check("E_Lambda_identity", _zero(EL - rhs1, policy, ctx), "[E,Lambda] = -E ^ Lambda#(L_E omega)"))
    out.append(check("Lambda_Lambda_identity", _zero(LL - rhs2, policy, ctx),
                     "[Lambda,Lambda] = 2 E ^ (Lambda# x Lambda#)(d omega)"))
    el_zero = _zero(EL, policy, ctx)
    out.append(check("jacobi_pair", el_zero and _zero(LL + wedge(d.E, d.Lambda) * 2, policy, ctx),
                     "[E,Lambda] = 0 and [Lambda,Lambda] = -2 E ^ Lambda"))
    out.append(check("copoisson", el_zero and _zero(LL, policy, ctx),
                     "[E,Lambda] = 0 and [Lambda,Lambda] = 0"))
    return out


def deform(s: ACCStructure, G: DiffForm, policy: Policy | None = None):
    """Validate ``(omega, Omega + G)``; a ``DegenerateReport`` if it is not regular."""
    policy = policy or s.policy
    if G.degree != 2:
        raise StructureError("deformation must be a 2-form")
    if not _tensor_zero(exterior_derivative(G), policy, list(G.comps.values())):
        raise NotClosedError("deformation 2-form is not closed")
    try:
        return validate_acc(s.chart, s.omega, s.Omega + G, policy)
    except WitnessSearchFailed as exc:
        return DegenerateReport("no regular point found", str(exc))
    except DegenerateError as exc:
        return DegenerateReport(str(exc), "not attempted")
