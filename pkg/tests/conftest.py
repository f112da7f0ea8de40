import pytest
from hypothesis import HealthCheck, settings

from accsym import Chart

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def chart3():
    return Chart(("q", "p", "z"))


@pytest.fixture
def chart5():
    return Chart(("q1", "p1", "q2", "p2", "z"))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = mod.criterion_lines() if mod else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
