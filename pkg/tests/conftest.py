from __future__ import annotations

CRITERIA = {
    1: "conjecture bound at desk scale",
    2: "known exact values",
    3: "Berge identity",
    4: "certificate properties",
    5: "complement matching coverage bound",
    6: "degree sequence realization",
    7: "Hamilton decomposition of K5 and K7",
    8: "regular route",
    9: "deficiency degree identity",
    10: "expansion checker soundness",
    11: "loop bookkeeping",
    12: "end-to-end honesty",
}

_outcomes: dict[int, str] = {}
_numbers: dict[str, int] = {}


def pytest_runtest_logreport(report):
    k = _numbers.get(report.nodeid)
    if k is None:
        return
    if report.failed:
        _outcomes[k] = "FAIL"
    elif report.when == "call" and report.passed:
        _outcomes.setdefault(k, "PASS")
    elif report.skipped:
        _outcomes.setdefault(k, "SKIP")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _numbers[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _numbers:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        if k not in _numbers.values():
            continue
        status = _outcomes.get(k, "NOT RUN")
        terminalreporter.write_line(f"criterion {k:2d}  {status:7s}  {title}")
