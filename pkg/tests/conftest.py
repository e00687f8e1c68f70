import numpy as np
import pytest

_LINES = "acceptance_lines"


def pytest_configure(config):
    setattr(config, _LINES, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, _LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record and print one PASS/FAIL line, then assert the outcome."""

    def record(number, ok, detail):
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        print(line)
        getattr(request.config, _LINES).append(line)
        assert ok, line

    return record
