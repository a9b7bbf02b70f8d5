"""Expression grammar: tokenizing, parsing, evaluation, affine extraction.

The evaluation corpus freezes exact rational results; the round-trip
property generates parser-reachable trees and requires unparse/parse to be
the identity on them.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from kbonacci.errors import DivisionByZeroError, ExpressionSyntaxError
from kbonacci.exprparse import (
    Add,
    Const,
    Div,
    Mul,
    Neg,
    Pow,
    Sub,
    Var,
    as_affine,
    evaluate,
    parse,
    unparse,
)

EVAL_CORPUS = [
    ("x", F(5), F(5)),
    ("2*x + 1", F(3, 2), F(4)),
    ("x^2 - x - 1", F(2), F(1)),
    ("(x + 1)*(x - 1)", F(3), F(8)),
    ("x/2 + 1/3", F(1), F(5, 6)),
    ("-x^2", F(3), F(9)),  # unary minus binds the base: (-x)^2
    ("-(x^2)", F(3), F(-9)),
    ("2^3", F(0), F(8)),
    ("1.25*x", F(4), F(5)),
    ("0.5", F(9), F(1, 2)),
    ("x*x*x", F(1, 2), F(1, 8)),
    ("3 - x - 1", F(1), F(1)),
    ("12/x/2", F(3), F(2)),
    ("2*x^2", F(3), F(18)),
    ("1/2*x", F(4), F(2)),
    ("x - -x", F(2), F(4)),
    ("-x + x^3", F(2), F(6)),
    ("10/4", F(0), F(5, 2)),
    ("((x))", F(7), F(7)),
    ("x^0", F(9), F(1)),
    ("2*(x + 1/4)", F(1, 4), F(1)),
]


class TestEvaluate:
    @pytest.mark.parametrize("text,x,expected", EVAL_CORPUS)
    def test_corpus(self, text, x, expected):
        value = evaluate(parse(text), x)
        assert isinstance(value, F)
        assert value == expected

    def test_division_by_zero_names_subtree(self):
        node = parse("(x - 1)/(x - 1)")
        assert evaluate(node, F(2)) == 1
        with pytest.raises(DivisionByZeroError) as err:
            evaluate(node, F(1))
        assert err.value.subtree_text == "(x - 1)/(x - 1)"

    def test_constant_zero_denominator(self):
        with pytest.raises(DivisionByZeroError):
            evaluate(parse("3/0"), F(1))


class TestParse:
    def test_structure(self):
        assert parse("x + 1") == Add(Var(), Const(F(1)))
        assert parse("2*x") == Mul(Const(F(2)), Var())
        assert parse("x^2") == Pow(Var(), 2)
        assert parse("-x") == Neg(Var())
        assert parse("x - 1/2") == Sub(Var(), Div(Const(F(1)), Const(F(2))))

    def test_precedence_shape(self):
        # addition splits last, power binds tightest
        assert parse("1 + 2*x^3") == Add(
            Const(F(1)), Mul(Const(F(2)), Pow(Var(), 3))
        )

    def test_error_at_end_of_input(self):
        with pytest.raises(ExpressionSyntaxError) as err:
            parse("x +")
        assert err.value.offset == 3

    def test_error_on_empty(self):
        with pytest.raises(ExpressionSyntaxError) as err:
            parse("")
        assert err.value.offset == 0

    def test_unclosed_paren_expects_close(self):
        with pytest.raises(ExpressionSyntaxError) as err:
            parse("(x")
        assert "')'" in err.value.expected

    def test_unexpected_token_offset(self):
        with pytest.raises(ExpressionSyntaxError) as err:
            parse("x x")
        assert err.value.offset == 2

    def test_bad_character_offset(self):
        with pytest.raises(ExpressionSyntaxError) as err:
            parse("x + y")
        assert err.value.offset == 4

    def test_exponent_must_be_literal(self):
        with pytest.raises(ExpressionSyntaxError):
            parse("x^-2")
        with pytest.raises(ExpressionSyntaxError):
            parse("x^(2)")
        with pytest.raises(ExpressionSyntaxError):
            parse("x^2^3")
        with pytest.raises(ExpressionSyntaxError):
            parse("x^1.5")


class TestAffine:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("2*x", (F(2), F(0))),
            ("3*x + 1/2", (F(3), F(1, 2))),
            ("x", (F(1), F(0))),
            ("5", (F(0), F(5))),
            ("(x + 1)*2", (F(2), F(2))),
            ("x/2", (F(1, 2), F(0))),
            ("2^3", (F(0), F(8))),
            ("x^1", (F(1), F(0))),
            ("x^0", (F(0), F(1))),
            ("-x + x", (F(0), F(0))),
            ("1.5*x - 0.25", (F(3, 2), F(-1, 4))),
        ],
    )
    def test_affine_forms(self, text, expected):
        assert as_affine(parse(text)) == expected

    @pytest.mark.parametrize("text", ["x^2", "x*x", "x/x", "1/x", "x/0"])
    def test_non_affine(self, text):
        assert as_affine(parse(text)) is None

    @given(
        st.sampled_from([t for t, _, _ in EVAL_CORPUS]),
        st.fractions(min_value=-4, max_value=4, max_denominator=8),
    )
    def test_affine_matches_evaluation(self, text, x):
        node = parse(text)
        form = as_affine(node)
        if form is None:
            return
        a, b = form
        assert evaluate(node, x) == a * x + b


# Trees whose constants have 10-smooth denominators render as decimal or
# integer literals, so unparse followed by parse is the structural identity.
smooth_consts = st.builds(
    lambda n, d: Const(F(n, d)),
    st.integers(min_value=0, max_value=50),
    st.sampled_from([1, 2, 4, 5, 8, 10, 16, 20, 25, 32]),
)

exprs = st.recursive(
    smooth_consts | st.just(Var()),
    lambda inner: st.one_of(
        st.builds(Add, inner, inner),
        st.builds(Sub, inner, inner),
        st.builds(Mul, inner, inner),
        st.builds(Div, inner, inner),
        st.builds(Neg, inner),
        st.builds(Pow, inner, st.integers(min_value=0, max_value=4)),
    ),
    max_leaves=12,
)


class TestRoundTrip:
    @pytest.mark.parametrize("text,_x,_v", EVAL_CORPUS)
    def test_corpus_reparse(self, text, _x, _v):
        node = parse(text)
        assert parse(unparse(node)) == node

    @given(exprs)
    def test_structural_identity(self, tree):
        assert parse(unparse(tree)) == tree

    @given(exprs, st.fractions(min_value=-3, max_value=3, max_denominator=6))
    def test_value_preserved(self, tree, x):
        try:
            expected = evaluate(tree, x)
        except DivisionByZeroError:
            return
        assert evaluate(parse(unparse(tree)), x) == expected

    def test_fraction_const_renders_exactly(self):
        assert unparse(Const(F(3, 2))) == "1.5"
        assert unparse(Const(F(1, 3))) == "1/3"
        assert parse(unparse(Const(F(1, 3)))) == Div(Const(F(1)), Const(F(3)))
        assert unparse(parse("1.5*x")) == "1.5*x"
