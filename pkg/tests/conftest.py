import re

import pytest

from floquet_tur.bath import MachineParams

# reference machines used throughout the tests
SINUSOIDAL = dict(omega0=30.0, beta_h=0.005, beta_c=0.01, lam=0.02)
CIRCULAR = dict(omega0=25.0, beta_h=0.01, beta_c=0.06, g=0.02)

_CRITERIA = {}


@pytest.fixture
def sin_params():
    return MachineParams(SINUSOIDAL["omega0"], SINUSOIDAL["beta_h"], SINUSOIDAL["beta_c"])


@pytest.fixture
def circ_params():
    return MachineParams(CIRCULAR["omega0"], CIRCULAR["beta_h"], CIRCULAR["beta_c"])


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    detail = dict(report.user_properties).get("detail", "")
    _CRITERIA[int(m.group(1))] = (m.group(2), report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        name, outcome, detail = _CRITERIA[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {verdict}  {name}: {detail}")
