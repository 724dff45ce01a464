import pytest

from leotco.assets import load_constellation
from leotco.capacity import load_modcod_table


@pytest.fixture(scope="session")
def dvbs2():
    return load_modcod_table()


@pytest.fixture(scope="session")
def starlink():
    return load_constellation("starlink")


@pytest.fixture(scope="session")
def oneweb():
    return load_constellation("oneweb")


@pytest.fixture(scope="session")
def kuiper():
    return load_constellation("kuiper")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
