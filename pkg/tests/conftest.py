import pytest

from chfif import io

_RESULTS = []


@pytest.fixture
def record():
    """Collect one ``(label, passed, detail)`` line per acceptance criterion."""

    def _record(label, passed, detail):
        _RESULTS.append((label, bool(passed), detail))
        return passed

    return _record


@pytest.fixture(scope="session")
def sample_system():
    return io.load_config().build()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_RESULTS, key=lambda r: int(r[0].split()[1].rstrip(":"))):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {label} {detail}")
