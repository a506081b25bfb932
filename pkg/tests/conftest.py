import pytest

from phantom.lattice import DivisorClass, iota_involution
from phantom.verifier import build_theorem_collection

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def theorem():
    return build_theorem_collection()


@pytest.fixture(scope="session")
def F():
    return iota_involution()(DivisorClass.hyperplane(10))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
