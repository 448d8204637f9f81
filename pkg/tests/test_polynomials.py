from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from web_linearizer.algebra.qpoly import QPoly, _gcd_degree, gcd, radical_at_point, resultant, roots, squarefree
from web_linearizer.exceptions import IllConditionedError
from web_linearizer.algebra.ralg import RAlg
from web_linearizer.algebra.spoly import SPoly, det3, det4, parse_spoly
from web_linearizer.models.numeric import NumValue

S = SPoly([0, 1])
ONE = SPoly([1])
ZERO = SPoly()


def inexact(*coeffs):
    return QPoly([NumValue.inexact(c) for c in coeffs], normalize=False)


def rational_polys(max_degree=3):
    return (
        st.lists(st.integers(-6, 6), min_size=2, max_size=max_degree + 1)
        .filter(lambda c: c[-1] != 0)
        .map(QPoly)
    )


def times(p, q):
    a, b = p.expanded(), q.expanded()
    product = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            product[i + j] += x.value * y.value
    return QPoly(product)


class TestSPoly:
    def test_det3(self):
        rows = [[S, ONE, ZERO], [ZERO, S, ONE], [ONE, ZERO, S]]
        assert det3(rows) == SPoly([1, 0, 0, 1])

    def test_det4_of_a_diagonal(self):
        rows = [[S if r == c else ZERO for c in range(4)] for r in range(4)]
        assert det4(rows) == SPoly([0, 0, 0, 0, 1])

    def test_horner_evaluation(self):
        assert SPoly([1, -2, 3]).evaluate(Fraction(1, 2)) == Fraction(3, 4)

    def test_trailing_zeros_are_trimmed(self):
        assert SPoly([1, 2, 0, 0]).degree == 1
        assert ZERO.degree == -1

    def test_text_is_read_back(self):
        p = SPoly([RAlg.r(), RAlg(), RAlg.canonical_word("1") * 2 - RAlg.r(2)])
        assert parse_spoly(p.to_text()) == p


class TestExactPolynomials:
    def test_normalization_keeps_the_content(self):
        p = QPoly([Fraction(-1, 2), Fraction(1, 2)])
        assert p == QPoly([-1, 1])
        assert p.content.value == Fraction(1, 2)
        assert p.to_text() == "s - 1"

    def test_gcd(self):
        p = QPoly.from_roots([-1, 2])
        q = QPoly.from_roots([-1, 3])
        assert gcd(p, q) == QPoly([1, 1])

    def test_gcd_with_zero(self):
        p = QPoly([2, 2])
        assert gcd(p, QPoly()) == QPoly([1, 1])
        with pytest.raises(ValueError):
            gcd(QPoly(), QPoly())

    def test_radical(self):
        assert radical_at_point([QPoly([0, 0, 1]), QPoly([0, 0, 0, 1])]) == QPoly([0, 1])
        assert radical_at_point([QPoly.from_roots([1]), QPoly.from_roots([2])]).is_constant()

    def test_radical_skips_zero_polynomials(self):
        assert radical_at_point([QPoly(), QPoly.from_roots([1, 1])]) == QPoly.from_roots([1])

    def test_squarefree(self):
        assert squarefree(QPoly.from_roots([2, 2, 2, -1])) == QPoly.from_roots([2, -1])

    def test_resultant(self):
        assert resultant(QPoly.from_roots([1]), QPoly.from_roots([2])).value == -1
        assert resultant(QPoly([-2, 2]), QPoly.from_roots([2])).value == -2
        assert resultant(QPoly.from_roots([1, 3]), QPoly.from_roots([3])).value == 0

    def test_roots_with_multiplicity(self):
        found = roots(QPoly.from_roots([1, 1, -2]))
        assert [(r.value, r.multiplicity, r.exact) for r in found] == [(-2, 1, True), (1, 2, True)]

    def test_irrational_and_complex_roots(self):
        found = roots(QPoly([1, 0, 1]))
        assert len(found) == 2
        assert not any(r.is_real for r in found)
        assert not any(r.exact for r in found)
        real = roots(QPoly([-2, 0, 1]))
        assert all(r.is_real for r in real)
        assert sorted(float(mpmath.re(r.value)) for r in real) == pytest.approx([-2 ** 0.5, 2 ** 0.5])

    @hsettings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
    def test_from_roots_vanishes_at_every_root(self, values):
        p = QPoly.from_roots(values)
        assert p.degree == len(values)
        assert all(p.evaluate(v).value == 0 for v in values)

    @hsettings(max_examples=100, deadline=None)
    @given(rational_polys(), rational_polys(), rational_polys())
    def test_gcd_divides_and_keeps_common_factors(self, p, q, r):
        pr, qr = times(p, r), times(q, r)
        g = gcd(pr, qr).to_sympy()
        assert pr.to_sympy().rem(g).is_zero
        assert qr.to_sympy().rem(g).is_zero
        assert g.rem(r.to_sympy()).is_zero

    @hsettings(max_examples=100, deadline=None)
    @given(rational_polys(), rational_polys(), rational_polys())
    def test_resultant_is_multiplicative(self, p, q, r):
        assert resultant(times(p, q), r).value == resultant(p, r).value * resultant(q, r).value


class TestInexactPolynomials:
    def test_approximate_gcd(self):
        g = gcd(inexact(-1, 0, 1), inexact(-1, 1))
        assert not g.exact
        assert g.degree == 1
        assert float(g.coeffs[0]) == pytest.approx(-1, abs=1e-9)

    def test_coprime_inputs(self):
        assert gcd(inexact(-1, 0, 1), inexact(-3, 1)).is_constant()

    def test_float_roots(self):
        found = roots(inexact(2, -3, 1))
        assert [r.multiplicity for r in found] == [1, 1]
        assert sorted(float(mpmath.re(r.value)) for r in found) == pytest.approx([1, 2])

    def test_resultant(self):
        assert float(resultant(inexact(-1, 1), inexact(-2, 1))) == pytest.approx(-1)

    def test_to_text(self):
        assert inexact(1.0, 1.0).to_text() == "1.0*s + 1.0"
        assert inexact(-2.0, 1.0).to_text() == "1.0*s - 2.0"
        assert "exact=False" in repr(inexact(-2.0, 1.0))

    def test_mixed_ordering(self):
        assert NumValue.inexact(-0.5) < 0
        assert NumValue(Fraction(1)) < NumValue.inexact(2.0)
        assert not NumValue.inexact(3.0) < Fraction(1, 2)

    def test_inexact_radical_prints(self):
        radical = radical_at_point([inexact(-1, 0, 1), inexact(-1, 1)])
        assert radical.degree == 1
        assert radical.to_text().endswith("1.0")


class TestRankDecision:
    def test_full_rank(self):
        assert _gcd_degree([mpmath.mpf(1), mpmath.mpf("0.5"), mpmath.mpf("0.1")]) == (0, float("inf"))

    def test_rank_drop_at_largest_gap(self):
        singular = [mpmath.mpf(1), mpmath.mpf("1e-3"), mpmath.mpf("1e-14"), mpmath.mpf("1e-36")]
        k, gap = _gcd_degree(singular)
        assert k == 1
        assert gap == pytest.approx(1e22, rel=1e-6)

    def test_two_small_values_below_a_clear_gap(self):
        singular = [mpmath.mpf(1), mpmath.mpf("1e-10"), mpmath.mpf("3e-12")]
        k, gap = _gcd_degree(singular)
        assert k == 2
        assert gap == pytest.approx(1e10, rel=1e-6)

    def test_unclear_gap(self):
        singular = [mpmath.mpf(1), mpmath.mpf("1e-8"), mpmath.mpf("2e-10"), mpmath.mpf("1e-12")]
        _, gap = _gcd_degree(singular)
        assert gap == pytest.approx(200, rel=1e-6)

    def test_gcd_keeps_working_precision(self):
        shift = mpmath.mpf("1e-20")
        p = QPoly.from_roots([NumValue.inexact(1), NumValue.inexact(1 + shift)])
        q = QPoly.from_roots([NumValue.inexact(1), NumValue.inexact(-3)])
        g = gcd(p, q)
        assert g.degree == 1
        assert abs(g.coeffs[0].to_mpf() + 1) < 1e-20

    def test_unclear_gap_raises(self, monkeypatch):
        from web_linearizer.algebra import qpoly

        monkeypatch.setattr(qpoly, "_gcd_degree", lambda singular: (1, 200.0))
        with pytest.raises(IllConditionedError) as error:
            gcd(inexact(-1, 0, 1), inexact(-1, 1))
        assert error.value.singular_value_gap == 200.0
