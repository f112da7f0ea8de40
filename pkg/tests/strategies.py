"""Hypothesis strategies for DSL text over the chart (q, p, z)."""

from hypothesis import strategies as st

NAMES = ("q", "p", "z")

small_int = st.integers(min_value=-5, max_value=5)
rational_lit = st.builds(lambda a, b: f"{a}/{b}", st.integers(-9, 9), st.integers(1, 9))
leaf = st.one_of(st.sampled_from(NAMES), st.builds(str, st.integers(0, 9)), rational_lit)


def _combine(children):
    binop = st.builds(lambda a, op, b: f"({a}) {op} ({b})", children, st.sampled_from("+-*"), children)
    power = st.builds(lambda a, n: f"({a})^{n}", children, st.integers(0, 3))
    neg = st.builds(lambda a: f"-({a})", children)
    # denominators that cannot vanish identically
    den = st.builds(lambda a, c: f"(({a})^2 + {c})", children, st.integers(1, 5))
    quot = st.builds(lambda a, b: f"({a}) / {b}", children, den)
    return st.one_of(binop, power, neg, quot)


rational_text = st.recursive(leaf, _combine, max_leaves=6)
polynomial_text = st.recursive(
    leaf,
    lambda ch: st.one_of(
        st.builds(lambda a, op, b: f"({a}) {op} ({b})", ch, st.sampled_from("+-*"), ch),
        st.builds(lambda a, n: f"({a})^{n}", ch, st.integers(0, 3)),
    ),
    max_leaves=6,
)
smooth_text = st.one_of(
    rational_text,
    st.builds(lambda f, a: f"{f}({a})", st.sampled_from(("sin", "cos", "exp")), polynomial_text),
    st.builds(lambda a, b: f"sin({a}) * ({b})", polynomial_text, polynomial_text),
)
