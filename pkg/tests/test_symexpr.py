import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from accsym import Chart
from accsym.errors import ParseError, PoleError, PolicyError
from accsym.symexpr import (
    EXACT,
    Add,
    Const,
    Coord,
    IntPow,
    Neg,
    Policy,
    RatFunc,
    differentiate,
    evaluate,
    expr_class,
    is_zero,
    normalize,
    parse_expr,
    sample_points,
)

from strategies import polynomial_text, rational_text, smooth_text

C = Chart(("q", "p", "z"))


def P(text):
    return parse_expr(text, C)


def N(text):
    return normalize(P(text), C)


# parsing


def test_parse_constant():
    assert P("1") == Const(Fraction(1))


def test_parse_negated_coordinate():
    assert P("-p") == Neg(Coord(C, 1))


def test_parse_negative_power():
    e = P("(1 - p)^-1")
    assert e == IntPow(Add((Const(1), Neg(Coord(C, 1)))), -1)
    assert evaluate(e, (0, Fraction(1, 2), 0)) == 2


def test_parse_functions_and_precedence():
    e = P("2*sin(q)^2 + q/2/p")
    assert isinstance(e, Add)
    assert expr_class(e) == "transcendental"
    assert expr_class(P("q/2/p")) == "rational-function"
    assert evaluate(P("q/2/p"), (4, 2, 0)) == 1


def test_rational_literal_and_division_agree():
    assert is_zero(P("1/2*q") - P("q/2"))
    assert evaluate(P("q^2/2"), (3, 0, 0)) == Fraction(9, 2)


@pytest.mark.parametrize(
    "text, fragment, offset",
    [
        ("q p", "implicit multiplication", 2),
        ("2q", "implicit multiplication", 1),
        ("q^1.5", "non-integer exponent", 2),
        ("q^p", "non-integer exponent", 2),
        ("x + 1", "unknown identifier", 0),
        ("tan(q)", "unknown function", 0),
        ("q/0", "division by literal zero", 1),
        ("3/0", "zero denominator", 2),
        ("q +", "unexpected end of input", 3),
        ("(q", "expected ')'", 2),
        ("1.5*q", "decimal", 0),
        ("q $ p", "unexpected character", 2),
        ("sin", "needs an argument", 0),
    ],
)
def test_parse_errors_carry_offsets(text, fragment, offset):
    with pytest.raises(ParseError) as info:
        P(text)
    assert fragment in str(info.value)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


def test_offsets_are_bytes():
    # a no-break space is two bytes in UTF-8
    with pytest.raises(ParseError) as info:
        P("q\u00a0+ $")
    assert info.value.offset == 5


# differentiation


def _fd(e, i, pt, step=1e-6):
    hi = list(pt)
    lo = list(pt)
    hi[i] += step
    lo[i] -= step
    return (evaluate(e, hi) - evaluate(e, lo)) / (2 * step)


def test_derivative_of_product():
    d = differentiate(P("p*q"), "q")
    assert is_zero(d - P("p"))
    assert abs(float(evaluate(d, (1, 2, 0))) - _fd(P("p*q"), 0, (1.0, 2.0, 0.0))) < 1e-4


def test_derivative_of_constant():
    assert is_zero(differentiate(P("7/3"), 0, C))


def test_derivative_of_square():
    d = differentiate(P("p^2"), "p")
    assert is_zero(d - P("2*p"))
    assert abs(float(evaluate(d, (0, 2, 0))) - _fd(P("p^2"), 1, (0.0, 2.0, 0.0))) < 1e-4


def test_derivative_chain_rule():
    d = differentiate(P("sin(q*p)"), "q")
    for pt in [(0.3, 1.1, 0.0), (1.2, -0.4, 2.0)]:
        assert math.isclose(evaluate(d, pt), pt[1] * math.cos(pt[0] * pt[1]), rel_tol=1e-12)


def test_bad_coordinate_index():
    from accsym.errors import ChartError

    with pytest.raises(ChartError):
        differentiate(P("q"), 5)


def _smooth_points(seed, n=10):
    rng = random.Random(seed)
    return [tuple(rng.uniform(-2, 2) for _ in range(3)) for _ in range(n)]


@given(smooth_text, st.integers(0, 2), st.integers(0, 10**6))
def test_derivative_matches_finite_differences(text, i, seed):
    e = P(text)
    d = differentiate(e, i, C)
    for pt in _smooth_points(seed):
        try:
            exact = float(evaluate(d, pt))
            approx = _fd(e, i, pt)
        except (PoleError, OverflowError):
            continue
        assert abs(exact - approx) <= 1e-4 * max(1.0, abs(exact))


@given(rational_text, st.integers(0, 2), st.integers(0, 2))
def test_mixed_partials_commute(text, i, j):
    e = P(text)
    a = differentiate(differentiate(e, i, C), j, C)
    b = differentiate(differentiate(e, j, C), i, C)
    assert is_zero(a - b)


# normalization and zero testing


def test_collecting():
    assert N("q + q") == N("2*q")
    assert str(N("q + q")) == "2*q"


def test_cancellation():
    n = N("(q^2 - p^2)/(q - p)")
    assert n == N("q + p")
    for pt in sample_points(C, 5, seed=3):
        assert evaluate(n, pt) == evaluate(P("q + p"), pt)


def test_unit_of_multiplication_on_transcendental():
    assert str(N("sin(q)*1")) == "sin(q)"


def test_division_by_zero_polynomial():
    with pytest.raises(ZeroDivisionError):
        N("q/(p - p)")


def test_exact_zero_examples():
    assert is_zero(P("q - q"), EXACT)
    assert is_zero(P("(q+p)^2 - q^2 - 2*q*p - p^2"), EXACT)
    assert not is_zero(P("q*p"), Policy.sampled(20, seed=1, tol=1e-9))


def test_exact_policy_rejects_transcendental():
    with pytest.raises(PolicyError):
        is_zero(P("sin(q)"), EXACT)
    assert is_zero(P("sin(q)^2 + cos(q)^2 - 1"), Policy.sampled(20, seed=2))


@given(rational_text)
def test_normalize_idempotent(text):
    n = normalize(P(text), C)
    assert normalize(n, C) == n
    assert str(normalize(n, C)) == str(n)


@given(rational_text)
def test_print_parse_roundtrip(text):
    n = normalize(P(text), C)
    assert normalize(P(str(n)), C) == n


@given(rational_text, rational_text, st.booleans(), st.integers(0, 1000))
def test_zero_test_agrees_with_evaluation(a, b, same, seed):
    e1 = P(a)
    # a rewritten copy of e1, or an unrelated expression
    e2 = P(f"({a}) + ({b}) - ({b})") if same else P(b)
    diff = e1 - e2
    points = sample_points(C, 10, seed, [e1, e2])
    equal_at_points = all(evaluate(e1, pt) == evaluate(e2, pt) for pt in points)
    assert is_zero(diff, EXACT) == equal_at_points


@given(polynomial_text)
def test_sampled_agrees_with_exact_on_polynomials(text):
    e = P(text)
    assert is_zero(e, EXACT) == is_zero(e, Policy.sampled(10, seed=4))


def test_canonical_form_is_content_normalized():
    a = N("(2*q + 2)/(4*p + 4)")
    b = N("(q + 1)/(2*p + 2)")
    assert a == b and str(a) == str(b)
    assert isinstance(a, RatFunc)


# evaluation


def test_evaluate_examples():
    assert evaluate(P("(1 - p)^-1"), (0, Fraction(1, 2), 0)) == 2
    assert evaluate(P("0"), (5, 6, 7)) == 0
    assert evaluate(P("p*q"), (3, Fraction(1, 3), 0)) == 1


def test_evaluate_pole():
    with pytest.raises(PoleError):
        evaluate(P("1/(1 - p)"), (0, 1, 0))


def test_evaluate_float_for_transcendental():
    v = evaluate(P("exp(q)"), (1, 0, 0))
    assert isinstance(v, float) and math.isclose(v, math.e)


def test_sampling_avoids_poles():
    e = P("1/(p - 1)")
    pts = sample_points(C, 30, seed=5, exprs=[e])
    assert all(pt.coordinates[1] != 1 for pt in pts)
    assert sample_points(C, 3, seed=5) == sample_points(C, 3, seed=5)


def test_sampling_gives_up():
    with pytest.raises(PolicyError):
        sample_points(C, 1, seed=0, exprs=[P("1/(q - q)")], max_attempts=50)
