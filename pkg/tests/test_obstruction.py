import random
from fractions import Fraction
from functools import reduce
from math import gcd

import pytest

from web_linearizer.algebra.jetpoly import JetPoly, R, S21, weight_of
from web_linearizer.algebra.qpoly import QPoly
from web_linearizer.algebra.spoly import det4, to_jetpoly
from web_linearizer.analysis import printed_formulas
from web_linearizer.analysis.obstruction import (
    DET_DEGREE_BOUNDS, Q_DEGREE_BOUNDS, ROW_DEGREE_BOUNDS, ObstructionTower, build_phi, check_bindings,
    commutator_defect, derive_phi_from_p2, evaluate_tower, materialize, mirror, mirror_sign,
    printed_ledger, q2_by_dual_numbers, random_binding, rational_ratio,
)
from web_linearizer.exceptions import ParallelizableBranch
from web_linearizer.geometry.web_chart import ladder
from web_linearizer.models.numeric import NumValue


class TestFirstObstruction:
    def test_weight_and_leading_term(self):
        phi = build_phi()
        assert weight_of(phi) == 5
        assert phi.coefficient(s21=1) == JetPoly.const(-24 * R)

    def test_invariant_under_the_index_exchange(self):
        phi = build_phi()
        assert mirror_sign(phi, phi) is not None

    def test_mirror_is_an_involution(self):
        phi = build_phi()
        assert mirror(mirror(phi)) == phi

    def test_second_order_residuals_give_the_same_obstruction(self):
        assert rational_ratio(derive_phi_from_p2(), build_phi()) is not None

    def test_commutator_defect_is_a_multiple(self):
        assert rational_ratio(commutator_defect(), build_phi()) is not None

    def test_rational_ratio(self):
        e = JetPoly.jet(S21) * R
        assert rational_ratio(e * Fraction(-3, 2), e) == Fraction(-3, 2)
        assert rational_ratio(e + JetPoly.jet(), e) is None


@pytest.mark.slow
class TestTower:
    def test_second_obstructions(self, tower):
        assert weight_of(tower.psi1) == 6
        assert weight_of(tower.psi2) == 6
        assert tower.psi1.degree(S21) == 0
        assert mirror_sign(tower.psi1, tower.psi2) is not None

    def test_row_degrees_respect_their_bounds(self, tower):
        for name, degree in tower.row_degrees().items():
            field_name, index = name[0], int(name[1:])
            assert degree <= ROW_DEGREE_BOUNDS[field_name][index - 1]

    def test_rows_are_dependent(self, tower):
        rng = random.Random(7)
        for _ in range(3):
            binding = random_binding(rng)
            rows = [list(row.evaluate(binding).fields()) for row in tower.rows]
            assert det4(rows).is_zero()

    def test_degree_bounds_under_random_bindings(self, tower):
        rng = random.Random(11)
        for _ in range(2):
            values = materialize(tower, random_binding(rng))
            bounds = {**DET_DEGREE_BOUNDS, **Q_DEGREE_BOUNDS}
            for name, degree in values.degrees().items():
                assert degree <= bounds[name]

    def test_q2_agrees_with_forward_differentiation(self, tower):
        binding = random_binding(random.Random(3))
        assert q2_by_dual_numbers(tower, binding) == materialize(tower, binding).qs["Q2"]

    def test_entries_are_read_back(self, tower):
        entries = tower.to_entries()
        assert set(entries) >= {"phi", "psi1", "psi2", "row1_a", "row4_d_d2"}
        assert ObstructionTower.from_entries(entries) == tower

    def test_first_row_c_matches_the_published_table(self, tower):
        printed = printed_formulas.printed_rows()["c1"]
        scale = printed_formulas.common_scale(tower.rows[0].c, printed)
        assert scale is not None
        assert to_jetpoly(tower.rows[0].c) == to_jetpoly(printed) * scale

    def test_ledger_records_the_known_typos_of_the_obstruction(self, tower):
        found = printed_ledger(tower)
        recorded = {(e.formula, e.monomial) for e in found["known"]}
        assert ("phi", "R_2*s") in recorded
        assert not [e for e in found["unexpected"] if e.formula == "phi"]
        assert all(set(e.to_dict()) == {"formula", "monomial", "printed", "derived", "note"} for e in found["known"])

    def test_published_rows_differ_only_by_recorded_typos(self, tower):
        found = printed_ledger(tower)
        assert found["unexpected"] == []
        assert len(found["known"]) + len(found["unexpected"]) < 10
        assert ("a2", "R*R_1") in {(e.formula, e.monomial) for e in found["known"]}

    def test_degree_bounds_are_usually_attained(self, tower):
        attained = check_bindings(tower, trials=10)
        assert set(attained) == set(DET_DEGREE_BOUNDS) | set(Q_DEGREE_BOUNDS)
        for name, count in attained.items():
            assert count >= 8, name

    def test_q_polynomials_are_primitive_once_converted(self, tower):
        values = materialize(tower, random_binding(random.Random(5)))
        for name in ("Q3", "Q4", "Q5", "Q6", "Q7"):
            q = QPoly.from_spoly(values.qs[name].map(NumValue.of))
            numerators = [c.value for c in q.coeffs]
            assert all(c.denominator == 1 for c in numerators)
            assert reduce(gcd, (int(c) for c in numerators)) == 1
            assert q.expanded() == [NumValue.of(c) for c in values.qs[name].coeffs]


@pytest.mark.slow
class TestWebEvaluation:
    def test_first_example_is_exact(self, tower, example1, origin):
        values = evaluate_tower(tower, ladder(example1), origin)
        assert set(values) == set(DET_DEGREE_BOUNDS) | set(Q_DEGREE_BOUNDS)
        assert all(c.exact for p in values.values() for c in p.coeffs)

    def test_second_example_is_exact(self, tower, example2):
        values = evaluate_tower(tower, ladder(example2), (1, 0))
        assert all(c.exact for c in values["Q2"].coeffs + values["Q6"].coeffs)

    def test_flat_point_is_a_separate_branch(self, tower, parallel, origin):
        with pytest.raises(ParallelizableBranch):
            evaluate_tower(tower, ladder(parallel), origin)
