"""Collects acceptance verdicts and prints them after the run."""

import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    def record(criterion, checks, extra=""):
        failed = [c for c in checks if not c.passed]
        mark = "PASS" if not failed else "FAIL"
        detail = f"{len(checks) - len(failed)}/{len(checks)} checks"
        if failed:
            detail += "; failing: " + ", ".join(c.name for c in failed)
        if extra:
            detail += f"; {extra}"
        line = f"criterion {criterion}: {mark} ({detail})"
        _VERDICTS.append(line)
        print(line)
        for c in checks:
            print("   " + c.line())
        if failed:
            pytest.fail(line, pytrace=False)

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS):
            terminalreporter.write_line(line)
