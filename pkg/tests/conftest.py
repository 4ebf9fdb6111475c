"""Collects outcomes of tests marked ``criterion`` and prints one line per criterion."""
from collections import defaultdict

import pytest

_outcomes = defaultdict(list)
_titles = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    _titles[number] = title
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            status = "known-fail" if report.skipped else "fail"
        else:
            status = {"passed": "pass", "failed": "fail", "skipped": "skip"}[report.outcome]
        _outcomes[number].append((item.name, status, getattr(report, "duration", 0.0)))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_outcomes):
        results = _outcomes[number]
        passed = all(s == "pass" for _, s, _ in results)
        seconds = sum(d for _, _, d in results)
        verdict = "PASS" if passed else "FAIL"
        tr.write_line(
            f"criterion {number}: {verdict}  {_titles[number]}  "
            f"({sum(s == 'pass' for _, s, _ in results)}/{len(results)} checks, {seconds:.1f}s)"
        )
        for name, status, _ in results:
            if status != "pass":
                tr.write_line(f"    {name}: {status}")
