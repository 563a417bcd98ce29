import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Surface the acceptance suite's per-criterion verdict lines."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
