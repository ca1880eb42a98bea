import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sdpkit.apps import ScarfParams, build_scarf, build_toy_inventory  # noqa: E402
from sdpkit.model import State  # noqa: E402
from sdpkit.recursion import backward_recursion, forward_recursion  # noqa: E402

SMALL_SCARF = ScarfParams(mean_demand=(10.0, 20.0, 15.0), min_state=-40.0, max_state=80.0)


@pytest.fixture(scope="session")
def toy():
    return build_toy_inventory()


@pytest.fixture(scope="session")
def toy_forward(toy):
    return forward_recursion(toy, s0=State(1, 1))


@pytest.fixture(scope="session")
def toy_backward(toy):
    return backward_recursion(toy, query=State(1, 1))


@pytest.fixture(scope="session")
def scarf():
    return build_scarf()


@pytest.fixture(scope="session")
def scarf_backward(scarf):
    return backward_recursion(scarf, query=State(1, 0))


@pytest.fixture(scope="session")
def small_scarf():
    return build_scarf(SMALL_SCARF)


@pytest.fixture(scope="session")
def small_scarf_backward(small_scarf):
    return backward_recursion(small_scarf, query=State(1, 0))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
