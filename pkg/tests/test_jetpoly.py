from fractions import Fraction
from itertools import product

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings as hypothesis_settings

from web_linearizer.algebra.jetpoly import (
    R, S, S1, S2, S21, JetPoly, canonical_jet, derive, eliminate_s21, is_homogeneous, jet_weight,
    normalize, parse_jetpoly, s, second_order_rules, third_order_rules, weight_of,
)
from web_linearizer.algebra.ralg import RAlg, word_weight
from web_linearizer.exceptions import ShapeViolationError

JET_WORDS = ["".join(p) for n in range(4) for p in product("12", repeat=n)]
R_WORDS = JET_WORDS[:7]


@st.composite
def jet_terms(draw, words, max_jets=3):
    """A monomial c R^k R_w s_u... together with its weight."""
    coefficient = draw(st.integers(-4, 4).filter(bool))
    word = draw(st.sampled_from(R_WORDS))
    power = draw(st.integers(-1, 1))
    term = JetPoly.const(RAlg.word(word) * RAlg.r(power) * coefficient)
    weight = word_weight(word) + 2 * power
    for jet in draw(st.lists(st.sampled_from(words), max_size=max_jets)):
        term = term * s(jet)
        weight += jet_weight(jet)
    return term, weight


@st.composite
def jet_polys(draw):
    terms = draw(st.lists(jet_terms(JET_WORDS), min_size=1, max_size=4))
    return sum((t for t, _ in terms), JetPoly())


@st.composite
def homogeneous_jet_polys(draw, weight=11):
    """Canonical elements of one weight, padded with powers of s."""
    terms = draw(st.lists(jet_terms([S, S1, S2], max_jets=2), min_size=1, max_size=4))
    return sum((t * s(S, weight - w) for t, w in terms), JetPoly())


class TestRules:
    def test_first_derivatives_of_s(self):
        assert derive(s(), 1) == s(S1)
        assert derive(s(), 2) == s(S2)

    def test_mixed_second_derivative(self):
        assert derive(s(S2), 1) == s(S21) + s() * R
        assert normalize(s("12")) == s(S21) + s() * R

    def test_second_order_rules_have_weight_three(self):
        for rule in second_order_rules().values():
            assert weight_of(rule) == 3

    def test_third_order_rules_have_weight_four(self):
        rules = third_order_rules()
        assert set(rules) == {(S21, 1), (S21, 2)}
        for rule in rules.values():
            assert rule.is_canonical()
            assert weight_of(rule) == 4

    @pytest.mark.parametrize("word", ["112", "121", "211", "122", "221"])
    def test_third_order_words_have_one_canonical_form(self, word):
        assert canonical_jet(word, "inner") == canonical_jet(word, "outer")

    def test_jet_weights(self):
        assert [jet_weight(w) for w in (S, S1, S2, S21)] == [1, 2, 2, 3]


class TestPolynomials:
    def test_derivatives_stay_homogeneous(self):
        e = s() * s(S1) + s(S21) * 3
        assert is_homogeneous(e)
        assert weight_of(derive(e, 2)) == weight_of(e) + 1

    def test_inhomogeneous_sum_is_reported(self):
        assert not is_homogeneous(s() + s(S1))

    def test_eliminate_s21(self):
        phi = s(S21) * R - s() * s(S2)
        e = s(S21) * 2 + s(S1)
        reduced = eliminate_s21(e, phi)
        assert reduced.degree(S21) == 0
        assert reduced == s(S1) + s() * s(S2) * R.inverse() * 2

    def test_eliminate_s21_needs_a_power_of_r(self):
        phi = s(S21) * RAlg.canonical_word("1") - s()
        with pytest.raises(ShapeViolationError):
            eliminate_s21(s(S21), phi)

    def test_evaluate(self):
        e = s() ** 2 * R + s(S21)
        value = e.evaluate({"": Fraction(3)}, {S: Fraction(2), S21: Fraction(-1)})
        assert value == 11

    def test_coefficient_extraction(self):
        e = s() * s(S1) * R + s(S1) * 2 + s(S2)
        assert e.coefficient(s1=1) == s() * R + JetPoly.const(2)

    def test_text_is_read_back(self):
        e = s() ** 2 * R * Fraction(1, 3) - s(S21) * RAlg.canonical_word("2") + JetPoly.const(R ** -1)
        assert parse_jetpoly(e.to_text()) == e


class TestRewritingProperties:
    @hypothesis_settings(max_examples=200, deadline=None)
    @given(jet_polys())
    def test_both_strategies_reach_the_same_normal_form(self, e):
        inner = normalize(e, "inner")
        assert inner.is_canonical()
        assert normalize(e, "outer") == inner
        assert normalize(inner) == inner

    @hypothesis_settings(max_examples=150, deadline=None)
    @given(homogeneous_jet_polys())
    def test_commutator_is_weight_times_r(self, e):
        commutator = derive(derive(e, 2), 1) - derive(derive(e, 1), 2)
        assert commutator == e * R * 11
