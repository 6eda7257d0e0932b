import pytest

from eps_pricing import JumpParams, MarketParams

ACCEPTANCE_LINES = []


@pytest.fixture
def mkt():
    return MarketParams(spot=100.0, rate=0.015, vol=0.2, maturity=1.0)


@pytest.fixture
def row1_jumps():
    return JumpParams(0.1, -0.2, 0.1, "exact")


@pytest.fixture
def row1_jumps_approx():
    return JumpParams(0.1, -0.2, 0.1, "paper_approx")


DISCREPANCY_LINES = []


def record_acceptance(number, passed, detail):
    ACCEPTANCE_LINES.append((number, passed, detail))


def record_discrepancy(text):
    DISCREPANCY_LINES.append(text)


def pytest_terminal_summary(terminalreporter):
    if DISCREPANCY_LINES:
        terminalreporter.section("discrepancy report")
        for line in DISCREPANCY_LINES:
            terminalreporter.write_line(line)
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {detail}")
