import sys


def pytest_runtest_logreport(report):
    """Emit one pass/fail line per acceptance criterion as it completes."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    word = "PASS" if report.passed else "FAIL"
    sys.stderr.write(f"[acceptance] {word} {name}\n")
    sys.stderr.flush()
