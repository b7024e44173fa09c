import pathlib

import pytest

from subdiff import checks

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

# filled by test_acceptance, echoed after the run so the verdict lines are
# visible even with captured stdout
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fixtures_dir():
    return str(FIXTURES)


@pytest.fixture(scope="session")
def problems():
    return checks.load_fixtures(FIXTURES)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
