from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
import hypothesis.strategies as st

from web_linearizer.exceptions import EvaluationDomainError, ExpressionSyntaxError, UnknownIdentifierError
from web_linearizer.models.expr import diff, evaluate, evaluate_array, simplify
from web_linearizer.models.parser import parse, to_text

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
small_ints = st.integers(min_value=-6, max_value=6)


class TestParser:
    def test_precedence_and_unary_minus(self):
        e = parse("-x^2 + 3*x*y - 1/2")
        assert evaluate(e, (2, 1)).value == Fraction(-4 + 6) - Fraction(1, 2)

    def test_round_trip_through_text(self):
        for source in ["(x+y)*exp(-x)", "log(x) + 1/2*log((x^2+y^2)/x^2) + arctan(y/x)", "x*y^2 - sqrt(x)/y"]:
            e = parse(source)
            assert parse(to_text(e)) == e

    def test_syntax_errors_report_position(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse("x +* y")
        assert info.value.position == 3

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifierError):
            parse("z + 1")

    def test_empty_expression(self):
        with pytest.raises(ExpressionSyntaxError):
            parse("   ")


class TestEvaluation:
    @given(small_ints, small_ints, small_ints, rationals, rationals)
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_polynomials_evaluate_exactly(self, a, b, c, x, y):
        e = parse(f"({a})*x^2 + ({b})*x*y + ({c})")
        value = evaluate(e, (x, y))
        assert value.exact
        assert value.value == a * x * x + b * x * y + c

    def test_exact_special_values(self):
        assert evaluate(parse("(x+y)*exp(-x)"), (0, 0)).value == 0
        assert evaluate(parse("log(x) + cos(y)"), (1, 0)).value == 1
        assert evaluate(parse("sqrt(x)"), (Fraction(9, 4), 0)).value == Fraction(3, 2)

    def test_float_fallback_is_flagged(self):
        value = evaluate(parse("exp(x)"), (1, 0))
        assert not value.exact
        assert abs(float(value) - np.e) < 1e-15

    def test_domain_errors(self):
        with pytest.raises(EvaluationDomainError):
            evaluate(parse("log(x)"), (0, 1))
        with pytest.raises(EvaluationDomainError):
            evaluate(parse("1/(x-y)"), (1, 1))
        with pytest.raises(EvaluationDomainError):
            evaluate(parse("sqrt(x)"), (-1, 0))

    def test_array_evaluation_matches_pointwise(self):
        e = parse("(x+y)*exp(-x) + arctan(y/x)")
        xs = np.array([[0.5, 1.0], [1.5, 2.0]])
        ys = np.array([[0.1, -0.2], [0.3, 0.0]])
        values = evaluate_array(e, xs, ys)
        for index in np.ndindex(xs.shape):
            expected = float(evaluate(e, (xs[index], ys[index]), mode="float"))
            assert abs(values[index] - expected) < 1e-12


class TestDifferentiation:
    def test_product_rule(self):
        e = parse("x^3*y")
        assert evaluate(diff(e, "x"), (2, 3)).value == 36
        assert evaluate(diff(e, "y"), (2, 3)).value == 8

    def test_chain_rule_through_functions(self):
        e = parse("(x+y)*exp(-x)")
        # f_x = exp(-x) - (x+y) exp(-x)
        assert evaluate(diff(e, "x"), (0, 2)).value == -1
        assert evaluate(diff(diff(e, "x"), "y"), (0, 0)).value == -1

    @given(small_ints, small_ints, small_ints, rationals, rationals)
    @hypothesis_settings(max_examples=40, deadline=None)
    def test_mixed_partials_commute(self, a, b, c, x, y):
        e = parse(f"({a})*x^3*y + ({b})*x*y^2 + ({c})*x^2")
        left = simplify(diff(diff(e, "x"), "y"))
        right = simplify(diff(diff(e, "y"), "x"))
        assert evaluate(left, (x, y)).value == evaluate(right, (x, y)).value

    def test_derivative_of_constant_is_zero(self):
        assert simplify(diff(parse("3/4"), "x")) == parse("0")
