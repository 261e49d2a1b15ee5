import pytest

_RESULTS = {}


@pytest.fixture(scope="session")
def record():
    """Store one pass/fail line per acceptance criterion; printed in the terminal summary."""

    def _record(number, passed, detail):
        _RESULTS[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_RESULTS, key=lambda k: (int(str(k).split()[0]), str(k))):
        passed, detail = _RESULTS[label]
        terminalreporter.write_line(f"criterion {label}: {'PASS' if passed else 'FAIL'}  {detail}")
