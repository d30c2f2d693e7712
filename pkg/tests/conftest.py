import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, str] = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.failed:
        _results[num] = "FAIL"
    elif report.when == "call" and num not in _results:
        _results[num] = "PASS" if report.passed else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        status = _results.get(num, "NOT RUN")
        terminalreporter.write_line(f"criterion {num} [{CRITERIA[num]}]: {status}")
