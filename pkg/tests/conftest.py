"""Pytest plumbing for the acceptance verdict lines.

test_acceptance records one PASS/FAIL line per criterion here; printing
them from the terminal-summary hook keeps them visible under output
capture, where plain prints from passing tests would be swallowed.
"""

acceptance_verdicts: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_verdicts:
        terminalreporter.section("acceptance verdicts")
        for line in acceptance_verdicts:
            terminalreporter.write_line(line)
