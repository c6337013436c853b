import contextlib
from pathlib import Path

import pytest

import nesent

DATA = Path(nesent.__file__).parent / "data"
ACCEPTANCE_LOG = []


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def acceptance():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def criterion(number, title):
        try:
            yield
        except BaseException:
            ACCEPTANCE_LOG.append(f"FAIL  criterion {number:>2}: {title}")
            raise
        ACCEPTANCE_LOG.append(f"PASS  criterion {number:>2}: {title}")

    return criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LOG, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
