from fractions import Fraction

import numpy as np
import pytest

from web_linearizer.exceptions import EvaluationDomainError
from web_linearizer.geometry.fjet import KAPPA, word_fjet
from web_linearizer.geometry.web_chart import (
    WebChart, canonical_words, check_general_position, curvature, evaluate_ladder, evaluate_word,
    frame_curvature, ladder, ladder_arrays,
)
from web_linearizer.models.expr import Const, evaluate, simplify


class TestCurvature:
    def test_first_example_at_origin(self, example1, origin):
        value = evaluate(curvature(example1), origin)
        assert value.exact
        assert value.value == -1

    def test_second_example_at_one_zero(self, example2):
        value = evaluate(curvature(example2), (1, 0))
        assert value.exact
        assert value.value == 2

    def test_parallel_web_is_flat(self, parallel):
        assert simplify(curvature(parallel)) == Const(0)

    def test_closed_form_matches_frame_definition(self, example1):
        point = (Fraction(1, 3), Fraction(-1, 5))
        closed = float(evaluate(curvature(example1), point, "float"))
        framed = float(evaluate(frame_curvature(example1), point, "float"))
        assert closed == pytest.approx(framed, rel=1e-12)

    def test_ladder_root_word_is_the_curvature(self, example1, origin):
        assert evaluate_word(ladder(example1, 1), "", origin).value == -1


class TestFrame:
    def test_bracket_relation(self, example1):
        x_part, y_part = example1.frame().bracket_residual()
        point = (Fraction(1, 2), Fraction(1, 3))
        assert float(evaluate(x_part, point, "float")) == pytest.approx(0, abs=1e-12)
        assert float(evaluate(y_part, point, "float")) == pytest.approx(0, abs=1e-12)

    def test_difference_of_frame_vectors_is_tangent_to_the_level_sets(self, example2):
        residual = example2.frame().transversal_residual(example2)
        assert evaluate(residual, (1, Fraction(1, 2))).value == 0

    def test_general_position_is_required(self):
        chart = WebChart.from_text("x + y^2")
        with pytest.raises(EvaluationDomainError):
            check_general_position(chart, (0, 0))
        assert chart.in_general_position((0, 1))

    def test_connection_sign(self):
        assert KAPPA == -1


class TestLadder:
    def test_canonical_words_are_sorted_ones_before_twos(self):
        words = canonical_words(3)
        assert "" in words and "12" in words and "122" in words
        assert all("21" not in w for w in words)
        assert len(words) == 1 + 2 + 3 + 4

    def test_words_longer_than_the_ladder_are_rejected(self, example1):
        l = ladder(example1, 2)
        with pytest.raises(KeyError):
            l.raw("112")

    def test_exact_values_at_the_origin(self, example1, origin):
        values = evaluate_ladder(ladder(example1, 2), origin)
        assert all(v.exact for v in values.values())
        assert values[""].value == -1

    def test_grid_arrays_match_point_values(self, example1):
        l = ladder(example1, 2)
        xs = np.array([[0.25]])
        ys = np.array([[-0.5]])
        fields = ladder_arrays(l, xs, ys)
        point_values = evaluate_ladder(l, (Fraction(1, 4), Fraction(-1, 2)), "float")
        for word, value in point_values.items():
            assert fields.words[word][0, 0] == pytest.approx(float(value), rel=1e-10, abs=1e-12)
        assert fields.fx[0, 0] == pytest.approx(np.exp(-0.25) * (1 - 0.25 + 0.5))

    def test_derivative_words_follow_the_leading_index_convention(self):
        assert word_fjet("12") != word_fjet("21")
