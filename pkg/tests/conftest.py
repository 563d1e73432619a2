import re

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.failed:
        _CRITERIA[key] = _CRITERIA.get(key, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), ok in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {name}")
