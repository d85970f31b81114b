import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from siegel_hecke.generators import e8_lattice, scaled_cubic_lattice, theta_series  # noqa: E402
from siegel_hecke.suites import chi10_expansion, e8_expansion  # noqa: E402


@pytest.fixture(scope="session")
def e8():
    """Theta_E8 on B=9 plus the three classes verify_thm11b needs at p=5."""
    return e8_expansion()


@pytest.fixture(scope="session")
def e8_15():
    return theta_series(e8_lattice(), 15)


@pytest.fixture(scope="session")
def cubic_15():
    return theta_series(scaled_cubic_lattice(), 15)


@pytest.fixture(scope="session")
def e8_small():
    return theta_series(e8_lattice(), 4)


@pytest.fixture(scope="session")
def chi10():
    return chi10_expansion()


# acceptance summary: one line per criterion ---------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            verdict = "FAIL (expected: unattainable as stated, see analysis in the test)"
        elif report.outcome == "passed":
            verdict = "PASS"
        elif report.outcome == "skipped":
            verdict = "SKIPPED"
        else:
            verdict = "FAIL"
        _ACCEPTANCE[name] = verdict


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        number = int(name.split("_")[2])
        terminalreporter.write_line(f"criterion {number:2d} [{name}]: {_ACCEPTANCE[name]}")
