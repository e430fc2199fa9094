import re
from collections import defaultdict

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, list] = defaultdict(list)


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match or "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        notes = [f"{k}={v}" for k, v in report.user_properties]
        _results[int(match.group(1))].append((report.outcome, report.duration, notes))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        runs = _results[number]
        ok = all(outcome == "passed" for outcome, _, _ in runs)
        seconds = sum(d for _, d, _ in runs)
        notes = "; ".join(n for _, _, ns in runs for n in ns)
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({seconds:.1f}s)"
        terminalreporter.write_line(f"{line} {notes}".rstrip())
