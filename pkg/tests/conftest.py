import time

import pytest

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.skipped):
        return
    num, title = mark.args
    prev = _ACCEPTANCE.get(num, {"title": title, "status": "PASS", "seconds": 0.0, "notes": []})
    if hasattr(rep, "wasxfail"):
        prev["status"] = "FAIL"
        prev["notes"].append(f"expected failure: {rep.wasxfail}")
    elif rep.failed:
        prev["status"] = "FAIL"
    elif rep.skipped:
        prev["status"] = "SKIP" if prev["status"] == "PASS" else prev["status"]
    prev["seconds"] += rep.duration
    _ACCEPTANCE[num] = prev


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        r = _ACCEPTANCE[num]
        line = f"AC{num:<2} {r['status']:<4} {r['title']} ({r['seconds']:.1f} s)"
        for n in r["notes"]:
            line += f" -- {n}"
        tr.write_line(line)
