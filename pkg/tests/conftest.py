import sys

import pytest

from walkpart.figure import build_figure, default_figure


@pytest.fixture(scope="session")
def fig():
    return default_figure()


@pytest.fixture
def fresh_fig():
    return build_figure()


@pytest.fixture(scope="session")
def names(fig):
    return fig.names


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
