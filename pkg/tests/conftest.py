"""Shared test plumbing.

Acceptance tests report measured figures (variance-reduction factor,
enumeration hit rate, scaling ratio) through the ``measure`` fixture; they
are printed in a summary block at the end of the run.
"""

import pytest

_MEASURED: list[str] = []


@pytest.fixture
def measure():
    return _MEASURED.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _MEASURED:
        terminalreporter.write_sep("-", "measured figures")
        for line in _MEASURED:
            terminalreporter.write_line(line)
