import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from ecoscope.snapshot import read_snapshot  # noqa: E402

PYPI30 = HERE / "data" / "pypi30.snap"
CROSSENV = HERE / "data" / "crossenv.snap"


@pytest.fixture
def pypi30():
    return read_snapshot(PYPI30)


@pytest.fixture
def crossenv():
    return read_snapshot(CROSSENV)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.RESULTS:
            terminalreporter.write_line(line)
