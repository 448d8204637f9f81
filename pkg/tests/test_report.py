import json
from fractions import Fraction

import pytest

from web_linearizer.analysis.report import (
    INCONCLUSIVE, LINEARIZABLE, MAX_CLASSES, NOT_LINEARIZABLE, PARALLELIZABLE, Report, RootReport,
    class_bound, degree_table, exact_text, neighborhood_points,
)
from web_linearizer.exceptions import ClassCountError


class TestReport:
    @pytest.mark.parametrize("verdict, code", [
        (LINEARIZABLE, 0), (NOT_LINEARIZABLE, 0), (PARALLELIZABLE, 0), (INCONCLUSIVE, 6),
    ])
    def test_exit_codes(self, verdict, code):
        assert Report(command="analyze", verdict=verdict).exit_code == code

    def test_failed_verification_without_verdict(self):
        report = Report(command="verify", checks={"verification": {"passed": False}})
        assert report.exit_code == 6
        assert Report(command="curvature").exit_code == 0

    def test_class_count_is_bounded(self):
        report = Report(command="analyze")
        report.set_class_count(MAX_CLASSES)
        assert report.class_count == 15
        with pytest.raises(ClassCountError):
            report.set_class_count(MAX_CLASSES + 1)

    def test_notes_are_not_repeated(self):
        report = Report(command="analyze")
        report.add_note("a")
        report.add_note("a")
        assert report.notes == ["a"]

    def test_json_document(self):
        report = Report(command="analyze", curvature="-1", verdict=LINEARIZABLE, radical="s + 1")
        report.roots.append(RootReport("-1", 1, True, True, True))
        report.resultants["Q2,Q6"] = "7/2"
        report.provenance["created_at"] = "2026-01-01T00:00:00"
        document = json.loads(report.to_json())
        assert document["schema_version"] == "1"
        assert document["result"]["roots"][0]["value"] == "-1"
        assert document["result"]["verdict"] == "linearizable"
        assert "created_at" not in document["result"]

    def test_result_is_independent_of_provenance(self):
        first = Report(command="curvature", curvature="2")
        second = Report(command="curvature", curvature="2", provenance={"created_at": "later"})
        assert first.result() == second.result()


class TestHelpers:
    def test_exact_text(self):
        assert exact_text(Fraction(-3, 4)) == "-3/4"
        assert exact_text(5) == "5"
        assert exact_text(0.1) == "0.1"
        assert exact_text(None) is None

    def test_neighborhood_points(self):
        points = neighborhood_points((Fraction(0), Fraction(0)), Fraction(1, 10), 5)
        assert len(points) == 5
        assert points[0] == (0, Fraction(1, 10))
        assert points[4] == (Fraction(1, 10), 0)
        assert all(max(abs(x), abs(y)) <= Fraction(1, 10) for x, y in points)

    def test_class_bound(self):
        assert class_bound({"Q1": 18, "Q2": 15, "Q6": 17}) == 15
        assert class_bound({"Q1": -1}) is None

    def test_degree_table_lists_q_first(self):
        table = degree_table({"D": 7, "Q2": 15, "Q10": 3}, {"D": 7, "Q2": 15})
        lines = table.splitlines()
        assert lines[2].startswith("Q2")
        assert lines[-1].startswith("D")
