import pytest

from bec_qpt import standard_config

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def std():
    """Standard configuration: hbar=1, m=1/4, L=pi, lambda=0, g=1, n=1000."""
    return standard_config(1000)


@pytest.fixture
def record():
    def _record(tag: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {tag}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
