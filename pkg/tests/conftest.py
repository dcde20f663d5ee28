import numpy as np
import pytest

from turnpoint.problem import ProblemSpec


@pytest.fixture
def airy_problem():
    return ProblemSpec((0.0, 1.0), nu0=0.5)


@pytest.fixture
def quad_problem():
    return ProblemSpec((0.0, 1.0, 0.5), nu0=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
