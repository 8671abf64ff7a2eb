import pytest
from hypothesis import HealthCheck, settings

from tests.helpers import plane, rel1d

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def lt():
    return rel1d("x - y", "<")


@pytest.fixture
def parab():
    return rel1d("x**2 - y", ">")


@pytest.fixture
def above():
    return plane("x1 - y0*x0 - y1", ">")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
