import pytest

_LINES = []


@pytest.fixture
def criterion_report():
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""
    def report(name, passed, detail, elapsed, budget=None):
        timing = f"{elapsed:.2f}s" + (f" (limit {budget:g}s)" if budget is not None else "")
        line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}; {timing}"
        print(line)
        _LINES.append(line)
        return passed
    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
