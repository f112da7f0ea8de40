import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from accsym.corpus import get_example, list_examples, random_coefficient, random_conserved, random_function
from accsym.errors import ConventionError, DomainMismatch, MembershipError
from accsym.exterior import MultiVector, lie_bracket, partial
from accsym.symalg import (
    E_dot,
    LEomega_sharp_dot,
    PairFH,
    bracket_acc,
    bracket_acc_forms,
    bracket_Omega,
    bracket_omega,
    classify_generator,
    direct_symmetry,
    dsharp,
    hamilton_jacobi_lift,
    is_conserved,
    is_symmetry,
    jacobi_bracket,
    lie_derive_pair,
    lift_of_product_check,
    pair_lift_commutator,
    pairs_equal,
    poisson_bracket,
    pre_hamiltonian_lift,
    product,
    sigma,
)
from accsym.symexpr import evaluate, is_zero

NAMES = [n for n, _ in list_examples()]
WHICH = ("omega", "Omega", "E", "Lambda", "acc", "acpj")
seeds = st.integers(0, 10**9)


def ex(name):
    e = get_example(name)
    return e, e.structure, e.dual


def pair(e, f, h):
    return PairFH.of(e.chart, f, h)


def zero_pair(p):
    return is_zero(p.f) and is_zero(p.h)


def same(a, b):
    return pairs_equal(a, b)


# functions and lifts


def test_poisson_bracket_examples():
    e, s, d = ex("K3")
    assert is_zero(poisson_bracket(d, "q*p", "q*p"))
    assert is_zero(poisson_bracket(d, "q", "p") + 1)
    e, s, d = ex("M3")
    assert is_zero(poisson_bracket(d, "q", "p") - 1)


def test_jacobi_bracket_examples():
    e, s, d = ex("C3")
    assert is_zero(jacobi_bracket(d, 1, 1))
    assert is_zero(jacobi_bracket(d, "q", "p") - poisson_bracket(d, "q", "p"))
    assert is_zero(jacobi_bracket(d, "q*z + p", "q*z + p"))


def test_hamilton_jacobi_lift_examples():
    e, s, d = ex("C3")
    assert hamilton_jacobi_lift(d, 0).is_zero()
    assert hamilton_jacobi_lift(d, 1) == -partial(e.chart, "z")
    assert hamilton_jacobi_lift(d, "p") == dsharp(d, "p") - partial(e.chart, "z") * e.chart.scalar("p")


def test_pre_hamiltonian_lift_examples():
    e, s, d = ex("M3")
    assert pre_hamiltonian_lift(d, pair(e, 0, 1)) == d.E
    assert pre_hamiltonian_lift(d, pair(e, "q", 0)) == partial(e.chart, "p")
    assert pre_hamiltonian_lift(d, pair(e, 0, 0)).is_zero()


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_lift_recovers_h(name, seed):
    from accsym.exterior import pairing

    e, s, d = ex(name)
    rng = random.Random(seed)
    p = PairFH(random_function(rng, e.chart), random_function(rng, e.chart))
    assert is_zero(pairing(s.omega, pre_hamiltonian_lift(d, p)) - p.h)


def test_is_conserved_examples():
    e, s, d = ex("M3")
    assert is_conserved(d, 7)
    assert not is_conserved(d, "z")
    assert is_conserved(d, "q*p")


# generator conditions and symmetry predicates


def test_classify_generator_examples():
    e, s, d = ex("C3")
    g = classify_generator(s, d, pair(e, "p", "-p"))
    assert (g.cond1, g.cond2, g.cond3) == (True, True, True)
    e, s, d = ex("K3")
    g = classify_generator(s, d, pair(e, "q", 5))
    assert (g.cond1, g.cond2, g.cond3) == (True, True, True)
    e, s, d = ex("M3")
    g = classify_generator(s, d, pair(e, 0, "z"))
    assert g.cond1 and not g.cond2


def test_membership_table():
    e, s, d = ex("M3")
    g = classify_generator(s, d, pair(e, "z", 0))
    m = g.memberships
    assert not g.cond1 and not m["LGen(Omega)"]
    assert set(m) == {"LGen(Omega)", "LGen(omega)", "LGen(Lambda)", "LGen(E,Omega)", "LGen(omega,Omega)"}


def test_is_symmetry_examples():
    e, s, d = ex("C3")
    assert is_symmetry("acc", s, d, pair(e, "p", "-p"))
    e, s, d = ex("M3")
    assert not is_symmetry("omega", s, d, pair(e, "q", 0))
    for name in NAMES:
        e, s, d = ex(name)
        for w in WHICH:
            assert is_symmetry(w, s, d, pair(e, 0, 0))


def test_unknown_symmetry_target():
    e, s, d = ex("C3")
    with pytest.raises(ValueError):
        is_symmetry("Omegas", s, d, pair(e, 0, 0))


def test_domain_mismatch():
    e, s, d = ex("C3")
    w = s.witness.coordinates[0]
    bad = pair(e, f"1/(q - {w.numerator}/{w.denominator})", 0)
    with pytest.raises(DomainMismatch):
        classify_generator(s, d, bad)


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_generators_are_symmetries(name, seed):
    e, s, d = ex(name)
    p = e.generator(random.Random(seed))
    g = classify_generator(s, d, p)
    assert g.cond1 and g.cond2 and g.cond3
    for w in WHICH:
        assert is_symmetry(w, s, d, p)
        assert direct_symmetry(w, s, d, p)


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds, conserved=st.booleans())
def test_predicates_agree_with_direct_lie_derivatives(name, seed, conserved):
    e, s, d = ex(name)
    rng = random.Random(seed)
    f = random_conserved(e, rng) if conserved else random_function(rng, e.chart)
    p = e.normalize_pair(PairFH(f, random_function(rng, e.chart)))
    assert is_symmetry("acpj", s, d, p) == is_symmetry("acc", s, d, p)
    assert is_symmetry("acc", s, d, p) == all(direct_symmetry(w, s, d, p) for w in ("omega", "Omega", "E", "Lambda"))
    assert is_symmetry("omega", s, d, p) == direct_symmetry("omega", s, d, p)
    assert is_symmetry("Omega", s, d, p) == direct_symmetry("Omega", s, d, p)


def test_K3_lift_ignores_functions_of_z():
    # on K3 the lift of (f + g(z), h) equals the lift of (f, h)
    e, s, d = ex("K3")
    p = pair(e, "z", 3)
    assert pre_hamiltonian_lift(d, p) == d.E * 3
    assert direct_symmetry("acc", s, d, p) and direct_symmetry("acpj", s, d, p)
    assert not is_symmetry("acc", s, d, p)
    assert is_symmetry("acc", s, d, e.normalize_pair(p))


def test_K3_lambda_condition_needs_normalisation():
    # (q z, 1): the lift is q E + dq#, which preserves Lambda, while cond1 fails
    e, s, d = ex("K3")
    p = pair(e, "q*z", 1)
    assert direct_symmetry("Lambda", s, d, p)
    assert not is_symmetry("Lambda", s, d, p)
    # q z is not a function of z alone, so normalising leaves the pair as is
    n = e.normalize_pair(p)
    assert same(n, p)
    assert not is_symmetry("Lambda", s, d, n)


# lift commutator


def test_commutator_examples():
    e, s, d = ex("M3")
    p = pair(e, "q*p", "z")
    assert pair_lift_commutator(s, d, p, p).is_zero()
    assert pair_lift_commutator(s, d, pair(e, 2, 3), pair(e, -1, 5)).is_zero()
    a, b = pair(e, "q", 0), pair(e, "p", 0)
    direct = lie_bracket(partial(e.chart, "p"), MultiVector(e.chart, 1, {"q": -1, "z": "-p"}))
    assert pair_lift_commutator(s, d, a, b) == direct


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_lift_commutator_formula(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    p1, p2 = (PairFH(random_function(rng, e.chart), random_function(rng, e.chart)) for _ in range(2))
    direct = lie_bracket(pre_hamiltonian_lift(d, p1), pre_hamiltonian_lift(d, p2))
    assert pair_lift_commutator(s, d, p1, p2) == direct


# brackets


def test_bracket_omega_examples():
    e, s, d = ex("C3")
    x = pair(e, "q*p", "z")
    assert zero_pair(bracket_omega(s, d, x, x))
    assert zero_pair(bracket_omega(s, d, pair(e, 2, 3), pair(e, 4, -1)))
    pb = poisson_bracket(d, "p", "q")
    out = bracket_omega(s, d, pair(e, "p", "-p"), pair(e, "q", "-q"))
    assert same(out, PairFH(pb, -pb))


def test_bracket_Omega_examples():
    e, s, d = ex("M3")
    assert zero_pair(bracket_Omega(s, d, pair(e, 1, 2), pair(e, 3, 4)))
    x = pair(e, "q", "z*p")
    assert zero_pair(bracket_Omega(s, d, x, x))
    out = bracket_Omega(s, d, pair(e, "q", 0), pair(e, "p", 0))
    from accsym.exterior import pairing

    expected_h = -pairing(d.domega, partial(e.chart, "p"), MultiVector(e.chart, 1, {"q": -1, "z": "-p"}))
    assert same(out, PairFH(poisson_bracket(d, "q", "p"), expected_h))


def test_bracket_Omega_enforces_conserved_f():
    e, s, d = ex("M3")
    with pytest.raises(MembershipError, match="cond1 violated for pair 1"):
        bracket_Omega(s, d, pair(e, "z", 0), pair(e, "q", 0))
    with pytest.raises(MembershipError, match="cond1 violated for pair 2"):
        bracket_Omega(s, d, pair(e, "q", 0), pair(e, "z", 0))


def test_bracket_acc_examples():
    e, s, d = ex("C3")
    zero = pair(e, 0, 0)
    assert zero_pair(bracket_acc(s, d, zero, pair(e, "p", "-p")))
    pb = poisson_bracket(d, "p", "q")
    assert same(bracket_acc(s, d, pair(e, "p", "-p"), pair(e, "q", "-q")), PairFH(pb, -pb))
    e, s, d = ex("K3")
    out = bracket_acc(s, d, pair(e, "q", 2), pair(e, "p", -7))
    assert same(out, PairFH(poisson_bracket(d, "q", "p"), e.chart.scalar(0)))


def test_bracket_acc_enforces_membership():
    e, s, d = ex("M3")
    with pytest.raises(MembershipError, match="cond3 violated for pair 2"):
        bracket_acc(s, d, pair(e, "q", "q"), pair(e, "q", 0))


def test_bracket_acc_detects_inconsistent_forms(monkeypatch):
    import accsym.symalg as sa

    e, s, d = ex("C3")
    real = sa.bracket_acc_forms

    def broken(d_, p1, p2):
        first, (l1, l2, l3) = real(d_, p1, p2)
        return first, (l1, l2 + 1, l3)

    monkeypatch.setattr(sa, "bracket_acc_forms", broken)
    with pytest.raises(ConventionError):
        bracket_acc(s, d, pair(e, "p", "-p"), pair(e, "q", "-q"))


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_equivalent_forms_and_half_difference(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    p1, p2 = e.generator(rng), e.generator(rng)
    _, (l1, l2, l3) = bracket_acc_forms(d, p1, p2)
    assert is_zero(l1 - l2) and is_zero(l1 - l3)
    out = bracket_acc(s, d, p1, p2)
    a = lie_derive_pair(pre_hamiltonian_lift(d, p1), p2)
    b = lie_derive_pair(pre_hamiltonian_lift(d, p2), p1)
    assert same(out, PairFH((a.f - b.f) / 2, (a.h - b.h) / 2))


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_closure(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    p1, p2 = e.generator(rng), e.generator(rng)
    assert sigma(d, bracket_omega(s, d, p1, p2)).is_zero()
    k1 = PairFH(random_conserved(e, rng), random_function(rng, e.chart))
    k2 = PairFH(random_conserved(e, rng), random_function(rng, e.chart))
    assert is_conserved(d, bracket_Omega(s, d, k1, k2).f)
    out = bracket_acc(s, d, p1, p2)
    g = classify_generator(s, d, out)
    assert g.cond1 and g.cond2 and g.cond3


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_bracket_Omega_jacobi_and_antisymmetry(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    a, b, c = (PairFH(random_conserved(e, rng), random_function(rng, e.chart)) for _ in range(3))

    def br(x, y):
        return bracket_Omega(s, d, x, y)

    t = [br(a, br(b, c)), br(b, br(c, a)), br(c, br(a, b))]
    assert is_zero(t[0].f + t[1].f + t[2].f) and is_zero(t[0].h + t[1].h + t[2].h)
    x, y = br(a, b), br(b, a)
    assert is_zero(x.f + y.f) and is_zero(x.h + y.h)
    x, y = bracket_omega(s, d, a, b), bracket_omega(s, d, b, a)
    assert is_zero(x.f + y.f) and is_zero(x.h + y.h)


def test_reductions():
    e, s, d = ex("K3")
    rng = random.Random(5)
    for _ in range(5):
        f1, f2 = random_conserved(e, rng), random_conserved(e, rng)
        out = bracket_acc(s, d, PairFH(f1, e.chart.scalar(1)), PairFH(f2, e.chart.scalar(-3)))
        assert same(out, PairFH(poisson_bracket(d, f1, f2), e.chart.scalar(0)))
    e, s, d = ex("C3")
    for _ in range(5):
        f1, f2 = random_conserved(e, rng), random_conserved(e, rng)
        pb = poisson_bracket(d, f1, f2)
        assert same(bracket_acc(s, d, PairFH(f1, -f1), PairFH(f2, -f2)), PairFH(pb, -pb))


# centralizer of constants


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_centralizer_of_constants(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    p = PairFH(random_conserved(e, rng), random_function(rng, e.chart))
    c, k = random_coefficient(rng), random_coefficient(rng)
    const = pair(e, c, k)
    cond2 = E_dot(d, p.h) + LEomega_sharp_dot(d, p.f)
    # the constant pair sits in the second slot
    out = bracket_Omega(s, d, p, const)
    assert same(out, PairFH(e.chart.scalar(0), -cond2 * k))
    flipped = bracket_Omega(s, d, const, p)
    assert same(flipped, PairFH(e.chart.scalar(0), cond2 * k))
    assert is_zero(cond2) == is_symmetry("E", s, d, p)


# product and Lie derivation


def test_product_examples():
    e, s, d = ex("M3")
    x, y = pair(e, "q", "z"), pair(e, "p^2", "q - 1")
    assert same(product(pair(e, 1, 0), x), x)
    assert same(product(x, y), product(y, x))
    assert same(product(pair(e, "q", 1), pair(e, "p", 0)), pair(e, "q*p", "p"))


def test_lift_of_product_examples():
    e, s, d = ex("M3")
    x = pair(e, "q*z", "p")
    assert lift_of_product_check(d, x, pair(e, 1, 0))
    assert lift_of_product_check(d, pair(e, 0, 0), x)
    assert lift_of_product_check(d, pair(e, "q", 1), pair(e, "p", 0))


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_product_algebra_and_derivation(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    a, b, c = (PairFH(random_conserved(e, rng), random_function(rng, e.chart)) for _ in range(3))
    assert same(product(product(a, b), c), product(a, product(b, c)))
    assert lift_of_product_check(d, a, b)
    lhs = bracket_Omega(s, d, a, product(b, c))
    r1, r2 = product(b, bracket_Omega(s, d, a, c)), product(c, bracket_Omega(s, d, a, b))
    assert same(lhs, PairFH(r1.f + r2.f, r1.h + r2.h))


def test_lie_derive_pair_examples():
    e, s, d = ex("C3")
    zero = MultiVector(e.chart, 1, {})
    assert zero_pair(lie_derive_pair(zero, pair(e, "q", "z")))
    assert same(lie_derive_pair(partial(e.chart, "q"), pair(e, "q*p", "q")), pair(e, "p", 1))
    assert zero_pair(lie_derive_pair(partial(e.chart, "q"), pair(e, 3, 4)))


@pytest.mark.parametrize("name", NAMES)
@given(seed=seeds)
def test_lie_derivation_by_symmetries(name, seed):
    e, s, d = ex(name)
    rng = random.Random(seed)
    fields = e.symmetry_vector_fields() + [pre_hamiltonian_lift(d, e.generator(rng))]
    X = rng.choice(fields)
    k = PairFH(random_conserved(e, rng), random_function(rng, e.chart))
    assert is_conserved(d, lie_derive_pair(X, k).f)
    p1, p2 = e.generator(rng), e.generator(rng)
    lhs = lie_derive_pair(X, bracket_acc(s, d, p1, p2))
    r1 = bracket_acc(s, d, lie_derive_pair(X, p1), p2)
    r2 = bracket_acc(s, d, p1, lie_derive_pair(X, p2))
    assert same(lhs, PairFH(r1.f + r2.f, r1.h + r2.h))


def test_locality_order_one():
    e, s, d = ex("M3b")
    pt = (3, 5, -2)
    bump = e.chart.scalar("(q - 3)^2 + (p - 5)^2 + (z + 2)^2")
    rng = random.Random(1)
    p1 = PairFH(random_function(rng, e.chart), random_function(rng, e.chart))
    p2 = PairFH(random_function(rng, e.chart), random_function(rng, e.chart))
    out = bracket_omega(s, d, PairFH(bump * p1.f, bump * p1.h), p2)
    assert evaluate(out.f, pt) == 0 and evaluate(out.h, pt) == 0
    # a bump vanishing only to first order does not kill the bracket
    out = bracket_omega(s, d, PairFH(e.chart.scalar("q - 3") * p1.f, e.chart.scalar("q - 3") * p1.h), p2)
    assert evaluate(out.f, pt) != 0 or evaluate(out.h, pt) != 0
