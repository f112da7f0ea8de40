"""Named invariant checks run against one structure.

Every check draws its random cases from its own generator seeded by
``(seed, check name)``, so results do not depend on execution order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .algebroid import (
    AlgebroidSection,
    ClosedTwoForm,
    algebroid_bracket,
    check_leibniz,
    morphism_r,
    morphism_s,
)
from .corpus import (
    ExampleEntry,
    random_coefficient,
    random_function,
    random_multivector,
    random_polynomial,
    random_vector_field,
)
from .duality import (
    CONTACT,
    COSYMPLECTIC,
    ACCStructure,
    ACPJStructure,
    classify,
    pointwise_dual,
    sharp,
    system_rank_at,
    verify_dual_identities,
    with_tensors,
)
from .errors import AccSymError, ConventionError
from .exterior import (
    DiffForm,
    MultiVector,
    differential,
    directional,
    exterior_derivative,
    interior_form,
    lie_bracket,
    lie_derivative_form,
    pairing,
    partial,
    schouten,
    wedge,
)
from .report import FAIL, PASS, SKIPPED, CheckResult
from .symalg import (
    E_dot,
    LEomega_sharp_dot,
    PairFH,
    bracket_acc,
    bracket_Omega,
    bracket_omega,
    classify_generator,
    direct_symmetry,
    dsharp,
    is_symmetry,
    lie_derive_pair,
    lift_of_product_check,
    pair_lift_commutator,
    poisson_bracket,
    pre_hamiltonian_lift,
    product,
    reduced_commutator,
    sigma,
)
from .symexpr import EXACT, Policy, evaluate, is_zero, sample_points

RUNTIME_BUDGET = "300 s"
TAMPER_DELTA = Fraction(1, 100)


class Skip(Exception):
    pass


@dataclass
class SuiteContext:
    s: ACCStructure
    d: ACPJStructure
    policy: Policy
    seed: int = 0
    cases: int = 10
    entry: ExampleEntry | None = None
    conserved: list = field(default_factory=list)
    convention_failures: list = field(default_factory=list)
    acc_bracket_calls: int = 0

    @property
    def chart(self):
        return self.s.chart

    @property
    def cls(self) -> str:
        return classify(self.s, self.policy)

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    def ctx(self, *extra) -> list:
        return [*self.s.scalars(), *self.d.scalars(), *extra]

    def zero(self, x, *extra) -> bool:
        ctx = self.ctx(*extra)
        if isinstance(x, (DiffForm, MultiVector)):
            return all(is_zero(c, self.policy, ctx) for c in x.comps.values())
        if isinstance(x, PairFH):
            return is_zero(x.f, self.policy, ctx) and is_zero(x.h, self.policy, ctx)
        if isinstance(x, AlgebroidSection):
            return self.zero(x.X, *extra) and is_zero(x.fbreve, self.policy, ctx)
        return is_zero(x, self.policy, ctx)

    def pair_diff(self, a: PairFH, b: PairFH) -> PairFH:
        return PairFH(a.f - b.f, a.h - b.h)

    # case generators
    def random_pair(self, rng) -> PairFH:
        return PairFH(random_function(rng, self.chart), random_function(rng, self.chart))

    def conserved_function(self, rng):
        if not self.conserved:
            raise Skip("no conserved functions known for this structure")
        return random_polynomial(rng, self.conserved, 2, 3)

    def conserved_pair(self, rng) -> PairFH:
        return PairFH(self.conserved_function(rng), random_function(rng, self.chart))

    def generator(self, rng) -> PairFH:
        if self.entry is not None and self.entry.sample_generator is not None:
            return self.entry.generator(rng)
        cls = self.cls
        if cls == CONTACT and self.conserved:
            f = self.conserved_function(rng)
            return PairFH(f, -f + random_coefficient(rng))
        if cls == COSYMPLECTIC and self.conserved:
            return PairFH(self.conserved_function(rng), self.chart.scalar(random_coefficient(rng)))
        raise Skip("no generator family known for this structure")

    def symmetry_fields(self) -> list[MultiVector]:
        fields = list(self.entry.symmetry_vector_fields()) if self.entry else []
        if not fields:
            fields = [partial(self.chart, i) for i in range(self.chart.dim)
                      if self.zero(lie_bracket(partial(self.chart, i), self.d.E))
                      and self.zero(schouten(partial(self.chart, i), self.d.Lambda))]
        return fields

    def acc(self, p1, p2) -> PairFH:
        self.acc_bracket_calls += 1
        try:
            return bracket_acc(self.s, self.d, p1, p2, self.policy)
        except ConventionError as exc:
            self.convention_failures.append(f"{p1} ; {p2}: {exc}")
            raise


# --------------------------------------------------------------------------
# exterior


def _random_form(rng, chart, degree, max_degree=2) -> DiffForm:
    comps = {idx: random_function(rng, chart, max_degree, 2)
             for idx in combinations(range(chart.dim), degree) if rng.random() < 0.6}
    return DiffForm(chart, degree, comps)


def chk_dd_zero(c: SuiteContext, rng):
    per_degree = max(20, c.cases * 2)
    for k in range(c.chart.dim - 1):
        for _ in range(per_degree):
            a = _random_form(rng, c.chart, k)
            if not exterior_derivative(exterior_derivative(a)).is_zero():
                return False, f"d(d a) != 0 for degree {k}"
    return True, f"{per_degree} forms per degree"


def chk_interior_antiderivation(c: SuiteContext, rng):
    for _ in range(c.cases):
        X = random_vector_field(rng, c.chart)
        k = rng.randint(1, 2)
        a, b = _random_form(rng, c.chart, k), _random_form(rng, c.chart, 1)
        lhs = interior_form(X, wedge(a, b))
        rhs = wedge(interior_form(X, a), b) + wedge(a, interior_form(X, b)) * (-1) ** k
        if not (lhs - rhs).is_zero():
            return False, "i_X(a^b) mismatch"
    return True, f"{c.cases} cases"


def chk_lie_derivative(c: SuiteContext, rng):
    for _ in range(c.cases):
        X, Y = random_vector_field(rng, c.chart), random_vector_field(rng, c.chart)
        a, b = _random_form(rng, c.chart, 1), _random_form(rng, c.chart, 1)
        lhs = lie_derivative_form(X, wedge(a, b))
        rhs = wedge(lie_derivative_form(X, a), b) + wedge(a, lie_derivative_form(X, b))
        if not (lhs - rhs).is_zero():
            return False, "L_X(a^b) mismatch"
        comm = (lie_derivative_form(X, lie_derivative_form(Y, a))
                - lie_derivative_form(Y, lie_derivative_form(X, a)))
        if not (lie_derivative_form(lie_bracket(X, Y), a) - comm).is_zero():
            return False, "L_[X,Y] != [L_X, L_Y]"
    return True, f"{c.cases} cases"


def chk_pairing_alternating(c: SuiteContext, rng):
    for _ in range(c.cases):
        a = _random_form(rng, c.chart, 2)
        X, Y = random_vector_field(rng, c.chart), random_vector_field(rng, c.chart)
        if not is_zero(pairing(a, X, Y) + pairing(a, Y, X)):
            return False, "a(X,Y) != -a(Y,X)"
        if not is_zero(pairing(a, X, X)):
            return False, "a(X,X) != 0"
    return True, f"{c.cases} cases"


def chk_schouten_calibration(c: SuiteContext, rng):
    for _ in range(c.cases):
        X, Y = random_vector_field(rng, c.chart), random_vector_field(rng, c.chart)
        if not (schouten(X, Y) - lie_bracket(X, Y)).is_zero():
            return False, "[X,Y] is not the Lie bracket"
        Z = random_vector_field(rng, c.chart)
        # L_X(Y^Z) by the derivation rule
        YZ = wedge(Y, Z)
        lx = wedge(lie_bracket(X, Y), Z) + wedge(Y, lie_bracket(X, Z))
        if not (schouten(X, YZ) - lx).is_zero():
            return False, "[X, Y^Z] != L_X(Y^Z)"
    return True, f"{c.cases} cases"


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def chk_schouten_graded(c: SuiteContext, rng):
    n = max(3, c.cases // 3)
    for degs in ((1, 1, 2), (1, 2, 2), (2, 2, 2)):
        for _ in range(n):
            P, Q, R = (random_multivector(rng, c.chart, k, 1) for k in degs)
            p, q, r = degs
            if p + q + r - 2 > c.chart.dim:
                continue
            anti = schouten(P, Q) + schouten(Q, P) * _sign((p - 1) * (q - 1))
            if not anti.is_zero():
                return False, f"graded antisymmetry fails for degrees {degs}"
            jac = (schouten(P, schouten(Q, R)) * _sign((p - 1) * (r - 1))
                   + schouten(Q, schouten(R, P)) * _sign((q - 1) * (p - 1))
                   + schouten(R, schouten(P, Q)) * _sign((r - 1) * (q - 1)))
            if not jac.is_zero():
                return False, f"graded Jacobi fails for degrees {degs}"
    return True, f"{n} triples per degree pattern"


# --------------------------------------------------------------------------
# duality


def chk_expected_class(c: SuiteContext, rng):
    if c.entry is None:
        raise Skip("no expected class")
    got = c.cls
    return got == c.entry.expected_class, f"class {got}"


def chk_expected_dual(c: SuiteContext, rng):
    if c.entry is None or c.entry.expected_dual is None:
        raise Skip("no closed-form dual")
    E, L = c.entry.expected_dual
    ok = c.zero(c.d.E - E) and c.zero(c.d.Lambda - L)
    return ok, "E and Lambda equal the closed forms" if ok else f"E={c.d.E} Lambda={c.d.Lambda}"


def chk_pointwise_oracle(c: SuiteContext, rng):
    pts = sample_points(c.chart, 20, c.seed, c.ctx())
    worst = 0.0
    for pt in pts:
        E_num, V = pointwise_dual(c.s, pt)
        dim = c.chart.dim
        for i in range(dim):
            worst = max(worst, abs(float(evaluate(c.d.E[(i,)], pt)) - E_num[i]))
            for j in range(dim):
                if i != j:
                    worst = max(worst, abs(float(evaluate(c.d.Lambda[(i, j)], pt)) - V[i][j]))
    return worst <= 1e-9, f"max deviation {worst:.3e} at 20 points"


def chk_uniqueness(c: SuiteContext, rng):
    r = system_rank_at(c.s, c.s.witness)
    return r == c.chart.dim, f"rank {r} at the witness"


def chk_reeb_contact(c: SuiteContext, rng):
    if c.cls != CONTACT:
        raise Skip("not a contact structure")
    return c.zero(interior_form(c.d.E, c.d.domega)), "i_E d omega = 0"


def chk_commutator_E_dfsharp(c: SuiteContext, rng):
    d = c.d
    for _ in range(c.cases):
        f = random_function(rng, c.chart)
        Ef = E_dot(d, f)
        rhs = sharp(d, differential(c.chart, Ef) - d.LEomega * Ef) + d.E * LEomega_sharp_dot(d, f)
        if not c.zero(lie_bracket(d.E, dsharp(d, f)) - rhs, f):
            return False, f"fails for f = {f}"
    return True, f"{c.cases} random f"


def chk_commutator_dfsharp_dhsharp(c: SuiteContext, rng):
    d = c.d
    for _ in range(c.cases):
        f, h = random_function(rng, c.chart), random_function(rng, c.chart)
        fs, hs = dsharp(d, f), dsharp(d, h)
        alpha = (differential(c.chart, poisson_bracket(d, f, h))
                 + interior_form(hs, d.domega) * E_dot(d, f)
                 - interior_form(fs, d.domega) * E_dot(d, h))
        rhs = sharp(d, alpha) - d.E * pairing(d.domega, fs, hs)
        if not c.zero(lie_bracket(fs, hs) - rhs, f, h):
            return False, f"fails for f = {f}, h = {h}"
    return True, f"{c.cases} random pairs"


def _identity_check(name):
    def run(c: SuiteContext, rng):
        if name == "jacobi_pair" and c.cls != CONTACT:
            raise Skip("applies to contact structures")
        if name == "copoisson" and c.cls != COSYMPLECTIC:
            raise Skip("applies to cosymplectic structures")
        res = {r.name: r for r in verify_dual_identities(c.s, c.d, c.policy)}[name]
        return res.status == PASS, res.details
    return run


def chk_fault_injection(c: SuiteContext, rng):
    dim = c.chart.dim
    missed = []
    targets = [("Lambda", idx) for idx in combinations(range(dim), 2)]
    targets += [("omega", (i,)) for i in range(dim)]
    for kind, idx in targets:
        tampered = tamper(c.d, kind, idx)
        results = verify_dual_identities(tampered.structure, tampered, c.policy)
        core = [r for r in results if r.name not in ("jacobi_pair", "copoisson")]
        if all(r.status == PASS for r in core):
            missed.append(f"{kind}[{','.join(c.chart.names[i] for i in idx)}]")
    return not missed, (f"{len(targets)} single-component faults detected" if not missed
                        else "undetected: " + ", ".join(missed))


def tamper(d: ACPJStructure, kind: str, idx: tuple) -> ACPJStructure:
    """Add ``1/100`` to one component of ``Lambda`` or ``omega``."""
    chart = d.chart
    if kind == "Lambda":
        bump = MultiVector(chart, 2, {idx: TAMPER_DELTA})
        return with_tensors(d, Lambda=d.Lambda + bump)
    if kind == "omega":
        bump = DiffForm(chart, 1, {idx: TAMPER_DELTA})
        return with_tensors(d, omega=d.omega + bump)
    raise ValueError(f"cannot tamper with {kind!r}")


# --------------------------------------------------------------------------
# symalg


def chk_lift_commutator(c: SuiteContext, rng):
    for _ in range(c.cases):
        p1, p2 = c.random_pair(rng), c.random_pair(rng)
        direct = lie_bracket(pre_hamiltonian_lift(c.d, p1), pre_hamiltonian_lift(c.d, p2))
        if not c.zero(direct - pair_lift_commutator(c.s, c.d, p1, p2), *p1, *p2):
            return False, f"fails for {p1}, {p2}"
    return True, f"{c.cases} random pairs"


def chk_closure_omega(c: SuiteContext, rng):
    for _ in range(c.cases):
        p1, p2 = c.generator(rng), c.generator(rng)
        for p in (p1, p2):
            if not c.zero(sigma(c.d, p), *p):
                return False, f"input {p} is not a generator"
        out = bracket_omega(c.s, c.d, p1, p2)
        if not c.zero(sigma(c.d, out), *out):
            return False, f"bracket of {p1}, {p2} leaves the domain"
    return True, f"{c.cases} generator pairs"


def chk_closure_Omega(c: SuiteContext, rng):
    for _ in range(c.cases):
        p1, p2 = c.conserved_pair(rng), c.conserved_pair(rng)
        out = bracket_Omega(c.s, c.d, p1, p2, c.policy)
        if not c.zero(E_dot(c.d, out.f), out.f):
            return False, f"first entry not conserved for {p1}, {p2}"
    return True, f"{c.cases} conserved pairs"


def chk_jacobi_Omega(c: SuiteContext, rng):
    for _ in range(c.cases):
        a, b, e = (c.conserved_pair(rng) for _ in range(3))

        def br(x, y):
            return bracket_Omega(c.s, c.d, x, y, c.policy)

        total = [br(a, br(b, e)), br(b, br(e, a)), br(e, br(a, b))]
        acc = PairFH(total[0].f + total[1].f + total[2].f, total[0].h + total[1].h + total[2].h)
        if not c.zero(acc):
            return False, f"Jacobi identity fails for {a}, {b}, {e}"
    return True, f"{c.cases} conserved triples"


def chk_acc_bracket_forms(c: SuiteContext, rng):
    for _ in range(c.cases):
        c.acc(c.generator(rng), c.generator(rng))
    return True, f"{c.cases} generator pairs"


def chk_antisymmetry(c: SuiteContext, rng):
    for _ in range(c.cases):
        r1, r2 = c.random_pair(rng), c.random_pair(rng)
        a = bracket_omega(c.s, c.d, r1, r2)
        b = bracket_omega(c.s, c.d, r2, r1)
        if not c.zero(PairFH(a.f + b.f, a.h + b.h)):
            return False, "omega bracket"
        if c.conserved:
            k1, k2 = c.conserved_pair(rng), c.conserved_pair(rng)
            a, b = bracket_Omega(c.s, c.d, k1, k2, c.policy), bracket_Omega(c.s, c.d, k2, k1, c.policy)
            if not c.zero(PairFH(a.f + b.f, a.h + b.h)):
                return False, "Omega bracket"
        try:
            g1, g2 = c.generator(rng), c.generator(rng)
        except Skip:
            continue
        a, b = c.acc(g1, g2), c.acc(g2, g1)
        if not c.zero(PairFH(a.f + b.f, a.h + b.h)):
            return False, "acc bracket"
    return True, f"{c.cases} cases"


def chk_locality(c: SuiteContext, rng):
    chart = c.chart
    zero = PairFH(chart.scalar(0), chart.scalar(0))
    for _ in range(c.cases):
        p = c.random_pair(rng)
        if not (c.zero(bracket_omega(c.s, c.d, zero, p)) and c.zero(bracket_omega(c.s, c.d, p, zero))):
            return False, "bracket with the zero pair"
    pts = sample_points(chart, c.cases, c.seed, c.ctx())
    coords = [chart.scalar(n) for n in chart.names]
    for pt in pts:
        p1, p2 = c.random_pair(rng), c.random_pair(rng)
        bump = sum(((x - v) ** 2 for x, v in zip(coords, pt.coordinates)), chart.scalar(0))
        out = bracket_omega(c.s, c.d, PairFH(bump * p1.f, bump * p1.h), p2)
        if evaluate(out.f, pt) != 0 or evaluate(out.h, pt) != 0:
            return False, "order-one property fails for the omega bracket"
        if c.conserved:
            k1, k2 = c.conserved_pair(rng), c.conserved_pair(rng)
            vals = [evaluate(g, pt) for g in c.conserved]
            cbump = sum(((g - v) ** 2 for g, v in zip(c.conserved, vals)), chart.scalar(0))
            out = bracket_Omega(c.s, c.d, PairFH(cbump * k1.f, cbump * k1.h), k2, c.policy)
            if evaluate(out.f, pt) != 0 or evaluate(out.h, pt) != 0:
                return False, "order-one property fails for the Omega bracket"
    return True, f"{c.cases} points"


def chk_cosymplectic_reduction(c: SuiteContext, rng):
    if c.cls != COSYMPLECTIC:
        raise Skip("applies to cosymplectic structures")
    for _ in range(c.cases):
        p1 = PairFH(c.conserved_function(rng), c.chart.scalar(random_coefficient(rng)))
        p2 = PairFH(c.conserved_function(rng), c.chart.scalar(random_coefficient(rng)))
        out = c.acc(p1, p2)
        if not c.zero(c.pair_diff(out, PairFH(poisson_bracket(c.d, p1.f, p2.f), c.chart.scalar(0)))):
            return False, f"reduction fails for {p1}, {p2}"
    return True, f"{c.cases} pairs (f, const)"


def chk_contact_reduction(c: SuiteContext, rng):
    if c.cls != CONTACT:
        raise Skip("applies to contact structures")
    for _ in range(c.cases):
        f1, f2 = c.conserved_function(rng), c.conserved_function(rng)
        out = c.acc(PairFH(f1, -f1), PairFH(f2, -f2))
        pb = poisson_bracket(c.d, f1, f2)
        if not c.zero(c.pair_diff(out, PairFH(pb, -pb))):
            return False, f"reduction fails for f1 = {f1}, f2 = {f2}"
    return True, f"{c.cases} pairs (f, -f)"


def _normalized(c: SuiteContext, p: PairFH) -> PairFH:
    return c.entry.normalize_pair(p) if c.entry is not None else p


def chk_symmetry_agreement(c: SuiteContext, rng):
    pairs = []
    try:
        pairs += [c.generator(rng) for _ in range(c.cases)]
    except Skip:
        pass
    pairs += [_normalized(c, c.random_pair(rng)) for _ in range(max(20, 2 * c.cases) - len(pairs))]
    if c.conserved:
        pairs += [_normalized(c, c.conserved_pair(rng)) for _ in range(c.cases // 2)]
    n_true = 0
    for p in pairs:
        acpj = is_symmetry("acpj", c.s, c.d, p, c.policy)
        acc = is_symmetry("acc", c.s, c.d, p, c.policy)
        direct = all(direct_symmetry(w, c.s, c.d, p, c.policy) for w in ("omega", "Omega", "E", "Lambda"))
        if not acpj == acc == direct:
            return False, f"disagreement for {p}: acpj={acpj} acc={acc} direct={direct}"
        n_true += acc
    return True, f"{len(pairs)} pairs, {n_true} symmetries"


def chk_centralizer(c: SuiteContext, rng):
    chart = c.chart
    pairs = []
    try:
        pairs += [c.generator(rng) for _ in range(c.cases // 2)]
    except Skip:
        pass
    pairs += [c.conserved_pair(rng) for _ in range(c.cases - len(pairs))]
    for p in pairs:
        cond2_expr = E_dot(c.d, p.h) + LEomega_sharp_dot(c.d, p.f)
        vanish_all = True
        for _ in range(3):
            const = PairFH(chart.scalar(random_coefficient(rng)), chart.scalar(random_coefficient(rng)))
            out = bracket_Omega(c.s, c.d, p, const, c.policy)
            expected = PairFH(chart.scalar(0), -const.h * cond2_expr)
            if not c.zero(c.pair_diff(out, expected), *p):
                return False, f"centralizer formula fails for {p}"
            vanish_all = vanish_all and c.zero(out, *p)
        cond2 = c.zero(cond2_expr, *p)
        esym = is_symmetry("E", c.s, c.d, p, c.policy)
        if not vanish_all == cond2 == esym:
            return False, f"centralizer membership mismatch for {p}"
    return True, f"{len(pairs)} conserved pairs"


def _e_symmetry_pairs(c: SuiteContext, rng, n: int) -> list[PairFH]:
    out = []
    try:
        out += [c.generator(rng) for _ in range(n)]
    except Skip:
        pass
    chart = c.chart
    # pairs with E.f a nonzero constant, when E = d/dx_k and L_E omega = 0
    E = c.d.E
    if c.conserved and len(E.comps) == 1 and c.zero(c.d.LEomega):
        (k,), coef = next(iter(E.comps.items()))
        if c.zero(coef - 1):
            xk = chart.scalar(chart.names[k])
            for _ in range(n):
                f = c.conserved_function(rng) + xk * random_coefficient(rng)
                p = PairFH(f, c.conserved_function(rng))
                if is_symmetry("E", c.s, c.d, p, c.policy):
                    out.append(p)
    if not out:
        raise Skip("no generators of symmetries of E known")
    return out


def chk_reduced_commutator(c: SuiteContext, rng):
    pairs = _e_symmetry_pairs(c, rng, c.cases // 2 + 1)
    m = 0
    for p1, p2 in zip(pairs, pairs[1:] + pairs[:1]):
        X = lie_bracket(pre_hamiltonian_lift(c.d, p1), pre_hamiltonian_lift(c.d, p2))
        if not c.zero(X - reduced_commutator(c.s, c.d, p1, p2), *p1, *p2):
            return False, f"fails for {p1}, {p2}"
        m += 1
    return True, f"{m} pairs of E-symmetry generators"


def chk_product_algebra(c: SuiteContext, rng):
    chart = c.chart
    unit = PairFH(chart.scalar(1), chart.scalar(0))
    for _ in range(c.cases):
        a, b, e = (c.random_pair(rng) for _ in range(3))
        if not c.zero(c.pair_diff(product(unit, a), a)):
            return False, "unit"
        if not c.zero(c.pair_diff(product(a, b), product(b, a))):
            return False, "commutativity"
        if not c.zero(c.pair_diff(product(product(a, b), e), product(a, product(b, e)))):
            return False, "associativity"
        if not lift_of_product_check(c.d, a, b, c.policy):
            return False, "lift of a product"
    return True, f"{c.cases} triples"


def chk_derivation_product(c: SuiteContext, rng):
    for _ in range(c.cases):
        a, b, e = (c.conserved_pair(rng) for _ in range(3))
        lhs = bracket_Omega(c.s, c.d, a, product(b, e), c.policy)
        r1 = product(b, bracket_Omega(c.s, c.d, a, e, c.policy))
        r2 = product(e, bracket_Omega(c.s, c.d, a, b, c.policy))
        if not c.zero(c.pair_diff(lhs, PairFH(r1.f + r2.f, r1.h + r2.h))):
            return False, f"derivation identity fails for {a}, {b}, {e}"
    return True, f"{c.cases} conserved triples"


def chk_lie_derivation_membership(c: SuiteContext, rng):
    fields = c.symmetry_fields()
    if not fields:
        raise Skip("no vector fields commuting with E known")
    n = 0
    for X in fields:
        if not c.zero(lie_bracket(X, c.d.E)):
            return False, f"field {X} does not commute with E"
        for _ in range(max(1, c.cases // len(fields))):
            p = c.conserved_pair(rng)
            out = lie_derive_pair(X, p)
            if not c.zero(E_dot(c.d, out.f), out.f):
                return False, f"L_X leaves conserved pairs for X = {X}"
            q = c.conserved_pair(rng)
            lhs = lie_derive_pair(X, product(p, q))
            r1, r2 = product(lie_derive_pair(X, p), q), product(p, lie_derive_pair(X, q))
            if not c.zero(c.pair_diff(lhs, PairFH(r1.f + r2.f, r1.h + r2.h))):
                return False, f"L_X is not a derivation of the product for X = {X}"
            n += 1
    return True, f"{n} cases over {len(fields)} fields"


def chk_lie_derivation_bracket(c: SuiteContext, rng):
    fields = list(c.symmetry_fields())
    fields += [pre_hamiltonian_lift(c.d, c.generator(rng)) for _ in range(2)]
    n = 0
    for X in fields:
        if not (c.zero(lie_bracket(X, c.d.E)) and c.zero(schouten(X, c.d.Lambda))):
            return False, f"{X} is not a symmetry of (E, Lambda)"
        for _ in range(max(1, c.cases // len(fields))):
            p1, p2 = c.generator(rng), c.generator(rng)
            lhs = lie_derive_pair(X, c.acc(p1, p2))
            r1 = c.acc(lie_derive_pair(X, p1), p2)
            r2 = c.acc(p1, lie_derive_pair(X, p2))
            if not c.zero(c.pair_diff(lhs, PairFH(r1.f + r2.f, r1.h + r2.h))):
                return False, f"L_X does not distribute over the bracket for X = {X}"
            n += 1
    return True, f"{n} cases over {len(fields)} fields"


def chk_half_difference(c: SuiteContext, rng):
    for _ in range(c.cases):
        p1, p2 = c.generator(rng), c.generator(rng)
        a = lie_derive_pair(pre_hamiltonian_lift(c.d, p1), p2)
        b = lie_derive_pair(pre_hamiltonian_lift(c.d, p2), p1)
        half = PairFH((a.f - b.f) / 2, (a.h - b.h) / 2)
        if not c.zero(c.pair_diff(c.acc(p1, p2), half)):
            return False, f"fails for {p1}, {p2}"
    return True, f"{c.cases} generator pairs"


def chk_generator_lifts(c: SuiteContext, rng):
    for _ in range(c.cases):
        p = c.generator(rng)
        g = classify_generator(c.s, c.d, p, c.policy)
        if not (g.cond1 and g.cond2 and g.cond3):
            return False, f"{p} fails the generator conditions"
        if not direct_symmetry("acc", c.s, c.d, p, c.policy):
            return False, f"lift of {p} is not a symmetry of (omega, Omega)"
    return True, f"{c.cases} generators"


# --------------------------------------------------------------------------
# algebroid


def _random_section(c: SuiteContext, rng) -> AlgebroidSection:
    return AlgebroidSection(random_vector_field(rng, c.chart), random_function(rng, c.chart, 2, 2))


def chk_F_closed(c: SuiteContext, rng):
    ClosedTwoForm.from_structure(c.s)
    return True, "d(Omega + d omega) = 0"


def chk_algebroid_jacobi(c: SuiteContext, rng):
    F = ClosedTwoForm.from_structure(c.s)
    for _ in range(c.cases):
        a, b, e = (_random_section(c, rng) for _ in range(3))

        def br(x, y):
            return algebroid_bracket(F, x, y)

        total = br(a, br(b, e)) + br(b, br(e, a)) + br(e, br(a, b))
        if not c.zero(total):
            return False, "Jacobi identity fails"
        if not c.zero(br(a, b) + br(b, a)):
            return False, "antisymmetry fails"
    return True, f"{c.cases} random section triples"


def chk_algebroid_leibniz(c: SuiteContext, rng):
    F = ClosedTwoForm.from_structure(c.s)
    for _ in range(c.cases):
        a, b = _random_section(c, rng), _random_section(c, rng)
        h = random_function(rng, c.chart)
        if not check_leibniz(F, a, b, h, c.policy):
            return False, f"Leibniz formula fails for h = {h}"
    return True, f"{c.cases} cases"


def chk_morphism_s(c: SuiteContext, rng):
    F = ClosedTwoForm.from_structure(c.s)
    for _ in range(c.cases):
        p1, p2 = c.generator(rng), c.generator(rng)
        lhs = morphism_s(c.s, c.d, c.acc(p1, p2))
        rhs = algebroid_bracket(F, morphism_s(c.s, c.d, p1), morphism_s(c.s, c.d, p2))
        if not c.zero(lhs - rhs):
            return False, f"s is not a morphism on {p1}, {p2}"
    return True, f"{c.cases} generator pairs"


def chk_r_inverse(c: SuiteContext, rng):
    F = ClosedTwoForm.from_structure(c.s)
    for _ in range(c.cases):
        p1, p2 = c.generator(rng), c.generator(rng)
        s1, s2 = morphism_s(c.s, c.d, p1), morphism_s(c.s, c.d, p2)
        for p, sec in ((p1, s1), (p2, s2)):
            if not c.zero(c.pair_diff(morphism_r(c.s, c.d, sec), p)):
                return False, f"r(s(p)) != p for {p}"
            r = morphism_r(c.s, c.d, sec)
            rebuilt = dsharp(c.d, r.f) + c.d.E * r.h
            if not c.zero(rebuilt - sec.X):
                return False, "reconstruction of X fails"
        br = algebroid_bracket(F, s1, s2)
        # the bracket of two such sections meets the same conditions
        Xb = br.X
        if not all(direct_symmetry(w, c.s, c.d, morphism_r(c.s, c.d, br), c.policy)
                   for w in ("omega", "Omega")):
            return False, "bracket of sections is not a symmetry lift"
        if not c.zero(E_dot(c.d, br.fbreve) + E_dot(c.d, pairing(c.s.omega, Xb))):
            return False, "bracket of sections violates the E-condition"
        lhs = morphism_r(c.s, c.d, br)
        rhs = c.acc(morphism_r(c.s, c.d, s1), morphism_r(c.s, c.d, s2))
        if not c.zero(c.pair_diff(lhs, rhs)):
            return False, f"r does not intertwine brackets for {p1}, {p2}"
    return True, f"{c.cases} generator pairs"


# --------------------------------------------------------------------------

CHECKS: dict[str, Callable] = {
    "algebroid.F_closed": chk_F_closed,
    "algebroid.jacobi": chk_algebroid_jacobi,
    "algebroid.leibniz": chk_algebroid_leibniz,
    "algebroid.morphism_s": chk_morphism_s,
    "algebroid.r_inverse_and_intertwining": chk_r_inverse,
    "duality.E_Lambda_identity": _identity_check("E_Lambda_identity"),
    "duality.Lambda_Lambda_identity": _identity_check("Lambda_Lambda_identity"),
    "duality.commutator_E_dfsharp": chk_commutator_E_dfsharp,
    "duality.commutator_dfsharp_dhsharp": chk_commutator_dfsharp_dhsharp,
    "duality.copoisson": _identity_check("copoisson"),
    "duality.expected_class": chk_expected_class,
    "duality.expected_dual": chk_expected_dual,
    "duality.fault_injection": chk_fault_injection,
    "duality.flat_sharp_is_q1": _identity_check("flat_sharp_is_q1"),
    "duality.jacobi_pair": _identity_check("jacobi_pair"),
    "duality.lambda_kills_omega": _identity_check("lambda_kills_omega"),
    "duality.pointwise_oracle": chk_pointwise_oracle,
    "duality.reeb_contact": chk_reeb_contact,
    "duality.reeb_kernel": _identity_check("reeb_kernel"),
    "duality.reeb_normalization": _identity_check("reeb_normalization"),
    "duality.sharp_flat_is_p1": _identity_check("sharp_flat_is_p1"),
    "duality.uniqueness_rank": chk_uniqueness,
    "exterior.dd_zero": chk_dd_zero,
    "exterior.interior_antiderivation": chk_interior_antiderivation,
    "exterior.lie_derivative": chk_lie_derivative,
    "exterior.pairing_alternating": chk_pairing_alternating,
    "exterior.schouten_calibration": chk_schouten_calibration,
    "exterior.schouten_graded": chk_schouten_graded,
    "symalg.acc_bracket_forms": chk_acc_bracket_forms,
    "symalg.antisymmetry": chk_antisymmetry,
    "symalg.centralizer": chk_centralizer,
    "symalg.closure_Omega": chk_closure_Omega,
    "symalg.closure_omega": chk_closure_omega,
    "symalg.contact_reduction": chk_contact_reduction,
    "symalg.cosymplectic_reduction": chk_cosymplectic_reduction,
    "symalg.derivation_product": chk_derivation_product,
    "symalg.generator_lifts": chk_generator_lifts,
    "symalg.half_difference": chk_half_difference,
    "symalg.jacobi_Omega": chk_jacobi_Omega,
    "symalg.lie_derivation_bracket": chk_lie_derivation_bracket,
    "symalg.lie_derivation_membership": chk_lie_derivation_membership,
    "symalg.lift_commutator": chk_lift_commutator,
    "symalg.locality": chk_locality,
    "symalg.product_algebra": chk_product_algebra,
    "symalg.reduced_commutator": chk_reduced_commutator,
    "symalg.symmetry_agreement": chk_symmetry_agreement,
}

# summary of every acc-bracket call made by the other checks
_LAST = "symalg.acc_bracket_forms_global"


def default_conserved(s: ACCStructure, d: ACPJStructure, policy: Policy, declared=()) -> list:
    if declared:
        return [s.chart.scalar(x) for x in declared]
    out = []
    for name in s.chart.names:
        x = s.chart.scalar(name)
        if is_zero(directional(d.E, x), policy, [*s.scalars(), *d.scalars()]):
            out.append(x)
    return out


def make_context(s: ACCStructure, d: ACPJStructure, policy: Policy | None = None, seed: int = 0,
                 cases: int = 10, entry: ExampleEntry | None = None, conserved=()) -> SuiteContext:
    policy = policy or s.policy
    if entry is not None and not conserved:
        cons = entry.conserved_exprs()
    else:
        cons = default_conserved(s, d, policy, conserved)
    return SuiteContext(s, d, policy, seed, cases, entry, cons)


def run_check(ctx: SuiteContext, name: str) -> CheckResult:
    fn = CHECKS[name]
    try:
        ok, details = fn(ctx, ctx.rng(name))
    except Skip as exc:
        return CheckResult(name, SKIPPED, str(exc))
    except AccSymError as exc:
        return CheckResult(name, FAIL, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, PASS if ok else FAIL, details)


def run_suite(ctx: SuiteContext, only=None) -> list[CheckResult]:
    names = sorted(CHECKS) if only is None else sorted(only)
    results = [run_check(ctx, n) for n in names]
    if ctx.acc_bracket_calls:
        ok = not ctx.convention_failures
        details = (f"{ctx.acc_bracket_calls} calls, no disagreement" if ok
                   else "; ".join(ctx.convention_failures[:3]))
        results.append(CheckResult(_LAST, PASS if ok else FAIL, details))
    return sorted(results, key=lambda r: r.name)
