import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.failed:
        _results[n] = ("FAIL", report.duration)
    elif report.when == "call" and report.passed:
        _results.setdefault(n, ("PASS", report.duration))
    elif report.skipped:
        _results.setdefault(n, ("SKIP", report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        status, dur = _results[n]
        terminalreporter.write_line(f"criterion {n}: {status} ({dur:.1f} s)")
