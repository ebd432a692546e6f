from pathlib import Path

import pytest

from zetaindep.zerolab import import_zeros

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def zeros31():
    """First 31 zeros at 60 digits."""
    return import_zeros(DATA / "zeros_31_d60.tsv")


@pytest.fixture(scope="session")
def zeros2001():
    """First 2001 zeros at 20 digits."""
    return import_zeros(DATA / "zeros_2001_d20.tsv")


_ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, passed, detail)``."""

    def record(number, passed, detail):
        _ACCEPTANCE[number] = (passed, detail)
        print(f"acceptance {number}: {'PASS' if passed else 'FAIL'} {detail}")
        assert passed, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
