import warnings

import pytest

from msiopto.backaction import MechanicalParams
from msiopto.cavity import ExpansionWarning, NarrowBandWarning
from msiopto.optics import OpticalParams


@pytest.fixture
def opt():
    return OpticalParams.experimental()


@pytest.fixture
def mech():
    return MechanicalParams.experimental()


@pytest.fixture
def balanced():
    return OpticalParams.experimental(bs_asymmetry=0.0)


@pytest.fixture(autouse=True)
def _quiet_validity_warnings():
    # validity warnings are asserted explicitly where they matter
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NarrowBandWarning)
        warnings.simplefilter("ignore", ExpansionWarning)
        yield


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record and print one acceptance line: ``criterion(n, ok, detail)``; ok=None is informational."""
    def record(number, ok, detail):
        status = "INFO" if ok is None else ("PASS" if ok else "FAIL")
        line = f"criterion {number:>2}: {status}  {detail}"
        _CRITERIA.setdefault(number, []).append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        for line in _CRITERIA[number]:
            terminalreporter.write_line(line)
