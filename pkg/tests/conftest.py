from fractions import Fraction as F

import pytest

from protplan.model import ProtectionPlan, validate_spec


@pytest.fixture
def spec64():
    return validate_spec(6, 4)


@pytest.fixture
def op64(spec64):
    # hand-solved optimum; delta >= 5/4 is certified by 15/4 x cut (4,0,0)
    return ProtectionPlan(spec64, {6: F(1, 6), 5: F(1, 4), 4: F(1, 4)}, {6: F(1, 24), 5: F(0)}, "OP")


@pytest.fixture
def ms64(spec64):
    return ProtectionPlan(spec64, {6: F(1, 6), 5: F(1, 5), 4: F(1, 4)}, {6: F(1, 30), 5: F(1, 20)}, "MS")


_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
