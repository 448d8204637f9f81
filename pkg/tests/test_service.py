from fractions import Fraction

import pytest

from web_linearizer.algebra.qpoly import QPoly
from web_linearizer.analysis.report import INCONCLUSIVE, LINEARIZABLE, NOT_LINEARIZABLE, PARALLELIZABLE
from web_linearizer.config import JobConfig
from web_linearizer.exceptions import EvaluationDomainError, IllConditionedError
from web_linearizer.geometry.web_chart import WebChart
from web_linearizer.models.numeric import NumValue
from web_linearizer.services import linearization_service
from web_linearizer.services.service_factory import ServiceFactory

from conftest import EXAMPLE_1, EXAMPLE_2, PARALLEL


@pytest.fixture
def service():
    return ServiceFactory.get_linearization_service(force_new=True)


class TestCurvature:
    def test_first_example(self, service):
        report = service.curvature(JobConfig(f=EXAMPLE_1))
        assert report.curvature == "-1"
        assert report.parallelizable is False
        assert report.checks["curvature_identically_zero"] is False

    def test_second_example(self, service):
        report = service.curvature(JobConfig(f=EXAMPLE_2, point="1,0"))
        assert report.curvature == "2"

    def test_general_position(self, service):
        with pytest.raises(EvaluationDomainError):
            service.curvature(JobConfig(f="x*y", point="0,1"))


class TestFlatWeb:
    def test_analyze(self, service):
        report = service.analyze(JobConfig(f=PARALLEL, grid_n=7))
        assert report.verdict == PARALLELIZABLE
        assert report.checks["curvature_identically_zero"] is True
        assert report.checks["verification"]["passed"]
        assert report.exit_code == 0


def ill_conditioned(qs):
    raise IllConditionedError("approximate gcd", 291.0)


class TestNeighborhood:
    def sampled(self, service, monkeypatch, common_root):
        polys = {f"Q{i}": QPoly.from_roots([common_root, i + 1]) for i in range(1, 8)}
        monkeypatch.setattr(service, "evaluate", lambda chart, point, mode: None)
        monkeypatch.setattr(service, "qpolys", lambda values: polys)
        monkeypatch.setattr(linearization_service, "radical_at_point", ill_conditioned)
        job = JobConfig(f=EXAMPLE_1)
        return service._neighborhood(WebChart.from_text(EXAMPLE_1), job, QPoly([1, 1]))

    def test_ill_conditioned_samples_fall_back_to_the_roots(self, service, monkeypatch):
        found = self.sampled(service, monkeypatch, -1)
        assert found["samples"] == 5
        assert found["agreeing"] == 5
        assert found["unresolved"] == 0
        assert found["trivial"] == 0
        assert all(record["ill_conditioned"] == 291.0 for record in found["points"])

    def test_lost_roots_are_unresolved(self, service, monkeypatch):
        found = self.sampled(service, monkeypatch, 2)
        assert found["agreeing"] == 0
        assert found["unresolved"] == 5
        assert not any(record["roots_persist"] for record in found["points"])

    def test_inexact_samples(self, service):
        qs = [
            QPoly([NumValue.inexact(c) for c in (1, 1)]),
            QPoly([NumValue.inexact(c) for c in (-1, 0, 1)]),
        ]
        assert service._roots_persist(QPoly([1, 1]), qs)
        assert not service._roots_persist(QPoly([-2, 1]), qs)


@pytest.mark.slow
class TestPublishedExamples:
    def test_first_example_is_linearizable(self, tower, service):
        report = service.analyze(JobConfig(f=EXAMPLE_1, grid_n=11))
        assert report.radical == "s + 1"
        assert report.radical_degree == 1
        assert [r.value for r in report.roots] == ["-1"]
        assert report.roots[0].admissible
        assert report.verdict == LINEARIZABLE
        assert report.class_count == 1
        assert report.class_bound <= 15

    def test_second_example_is_not_linearizable(self, tower, service):
        report = service.analyze(JobConfig(f=EXAMPLE_2, point=(Fraction(1), Fraction(0))))
        assert report.radical_degree == 0
        assert report.verdict == NOT_LINEARIZABLE
        assert report.class_count == 0
        resultant = Fraction(report.resultants["Q2,Q6"])
        assert resultant != 0

    def test_ill_conditioned_radical_is_inconclusive(self, tower, service, monkeypatch):
        monkeypatch.setattr(linearization_service, "radical_at_point", ill_conditioned)
        report = service.analyze(JobConfig(f=EXAMPLE_1, grid_n=11))
        assert report.verdict == INCONCLUSIVE
        assert report.exit_code == 6
        assert report.checks["ill_conditioned"]["singular_value_gap"] == 291.0
        assert report.radical is None
        assert report.class_bound is not None

    def test_first_example_in_float_mode(self, tower, service):
        report = service.analyze(JobConfig(f=EXAMPLE_1, mode="float", grid_n=11))
        assert report.verdict in (LINEARIZABLE, INCONCLUSIVE)
        if report.verdict == LINEARIZABLE:
            assert report.radical_degree == 1
            assert float(report.roots[0].value) == pytest.approx(-1, abs=1e-9)
        else:
            assert report.notes
