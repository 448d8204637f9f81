"""Shared fixtures: a temporary tower cache and the webs used across the suite."""

from fractions import Fraction

import pytest

from web_linearizer.analysis.obstruction import TowerBuilder
from web_linearizer.config import settings
from web_linearizer.geometry.web_chart import WebChart
from web_linearizer.services.service_factory import ServiceFactory

EXAMPLE_1 = "(x+y)*exp(-x)"
EXAMPLE_2 = "log(x) + 1/2*log((x^2+y^2)/x^2) + arctan(y/x)"
PARALLEL = "x+y"


@pytest.fixture(scope="session", autouse=True)
def test_cache_dir(tmp_path_factory):
    cache_dir = str(tmp_path_factory.mktemp("tower_cache"))
    settings.cache_dir = cache_dir
    ServiceFactory.configure_for_testing(cache_dir)
    yield cache_dir
    ServiceFactory.reset_services()


@pytest.fixture(scope="session")
def tower(test_cache_dir):
    """The full obstruction tower, derived once per test session."""
    built = TowerBuilder(identity_trials=3).build()
    ServiceFactory.configure_for_testing(test_cache_dir, tower=built)
    return built


@pytest.fixture
def origin():
    return (Fraction(0), Fraction(0))


@pytest.fixture
def example1():
    return WebChart.from_text(EXAMPLE_1)


@pytest.fixture
def example2():
    return WebChart.from_text(EXAMPLE_2)


@pytest.fixture
def parallel():
    return WebChart.from_text(PARALLEL)
