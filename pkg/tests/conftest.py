"""Collects acceptance results and prints one status line per criterion at the end."""

ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    from heisengrowth.acceptance import format_line
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(format_line(ACCEPTANCE_RESULTS[number]))
