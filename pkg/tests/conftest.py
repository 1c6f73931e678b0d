import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# (criterion, part, line) collected by test_acceptance.py, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
