"""Shared pytest plumbing: collects the acceptance-criteria pass/fail
lines recorded by tests/test_acceptance.py and prints them as a summary
section at the end of the run."""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
