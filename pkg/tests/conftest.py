import warnings

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record(name, passed, detail=""):
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())


def skipped(name, reason):
    ACCEPTANCE_LINES.append(f"SKIP  {name}  {reason}")


@pytest.fixture
def rng():
    return np.random.default_rng(20231017)


@pytest.fixture(autouse=True)
def _quiet_m_warning():
    # M >= N/3 warnings are expected in several tests
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="M=.* is not below N/3")
        yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
