from fractions import Fraction
from itertools import product

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings as hypothesis_settings

from web_linearizer.algebra.ralg import RAlg, derive_word, is_canonical_word, normalize_word, parse_ralg, word_weight

R = RAlg.r()
WORDS = ["".join(p) for n in range(4) for p in product("12", repeat=n)]


@st.composite
def weighted_ralgs(draw):
    """An element X of the algebra and the sum of its terms scaled by their weights."""
    total, weighted = RAlg(), RAlg()
    for coefficient, words, power in draw(st.lists(
        st.tuples(st.integers(-5, 5).filter(bool), st.lists(st.sampled_from(WORDS), max_size=2), st.integers(-2, 2)),
        min_size=1, max_size=4,
    )):
        term = RAlg.r(power) * coefficient
        weight = 2 * power
        for word in words:
            term = term * RAlg.word(word)
            weight += word_weight(word)
        total = total + term
        weighted = weighted + term * weight
    return total, weighted


class TestWords:
    def test_commutation_rule(self):
        assert derive_word("1", 2) == RAlg.canonical_word("12") - RAlg.r(2) * 2

    def test_non_canonical_word_is_rewritten(self):
        assert normalize_word("21") == RAlg.canonical_word("12") - RAlg.r(2) * 2
        assert normalize_word("12") == RAlg.canonical_word("12")

    def test_canonical_words(self):
        assert is_canonical_word("1122")
        assert not is_canonical_word("121")
        with pytest.raises(ValueError):
            RAlg.canonical_word("21")

    def test_rewritten_words_keep_their_weight(self):
        for word in ("21", "211", "221", "2121"):
            assert normalize_word(word).weight() == word_weight(word)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            derive_word("1", 3)


class TestArithmetic:
    def test_leibniz_rule(self):
        a = R * RAlg.canonical_word("1")
        b = RAlg.canonical_word("2") + R ** 2
        for i in (1, 2):
            assert (a * b).derive(i) == a.derive(i) * b + a * b.derive(i)

    def test_derivative_of_a_constant_vanishes(self):
        assert RAlg.const(7).derive(1).is_zero()

    def test_laurent_powers_of_r(self):
        assert R.inverse() * R == RAlg.const(1)
        assert (R ** -2).min_r_power() == -2
        with pytest.raises(ValueError):
            RAlg.canonical_word("1").inverse()

    def test_evaluate(self):
        e = R ** 2 - RAlg.canonical_word("1") * 2 + R.inverse()
        assert e.evaluate({"": Fraction(2), "1": Fraction(1, 2)}) == Fraction(7, 2)

    def test_text_is_read_back(self):
        e = R ** 3 * Fraction(-3, 4) + RAlg.canonical_word("11") * RAlg.canonical_word("2") - R.inverse() + 5
        assert parse_ralg(e.to_text()) == e
        assert parse_ralg("0").is_zero()


class TestDerivationProperties:
    @hypothesis_settings(max_examples=100, deadline=None)
    @given(weighted_ralgs())
    def test_commutator_scales_each_term_by_its_weight(self, pair):
        x, weighted = pair
        assert x.derive(2).derive(1) - x.derive(1).derive(2) == R * weighted

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(st.sampled_from(WORDS), st.sampled_from(WORDS))
    def test_words_are_homogeneous(self, left, right):
        product_ = RAlg.word(left) * RAlg.word(right)
        assert product_.weight() == word_weight(left) + word_weight(right)
