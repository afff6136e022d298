"""Collects acceptance outcomes and prints one verdict line per criterion."""

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_outcomes: dict[int, tuple[str, list[str]]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when != "call" and not report.failed:
        return
    num = int(m.group(1))
    label = m.group(2).replace("_", " ")
    prev_label, failures = _outcomes.get(num, (label, []))
    if report.failed:
        failures.append(report.when)
    _outcomes[num] = (prev_label, failures)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        label, failures = _outcomes[num]
        verdict = "FAIL" if failures else "PASS"
        terminalreporter.write_line(f"criterion {num}: {verdict}  {label}")
