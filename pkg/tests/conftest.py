"""Collects acceptance outcomes and prints one line per criterion after the run."""

from __future__ import annotations

from collections import OrderedDict

import pytest

_RESULTS: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number, title = marker.args
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "parts": [], "seconds": 0.0})
    # an expected failure still means the criterion is not met
    passed = report.passed and not hasattr(report, "wasxfail")
    entry["ok"] = entry["ok"] and passed
    entry["seconds"] += report.duration
    entry["parts"].append((item.name, "pass" if passed else ("xfail" if hasattr(report, "wasxfail") else "fail")))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        status = "PASS" if e["ok"] else "FAIL"
        tr.write_line(f"[{status}] {number:>2}. {e['title']}  ({e['seconds']:.2f} s)")
        if not e["ok"]:
            for name, state in e["parts"]:
                if state != "pass":
                    tr.write_line(f"         {state}: {name}")
