"""Shared fixtures and the per-criterion pass/fail summary for the acceptance suite."""

from __future__ import annotations

import collections

import pytest

from poissonblocks.fields import CoefficientField

_CRITERIA: dict[int, list[tuple[str, str]]] = collections.defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    _CRITERIA[marks].append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        ok = all(o == "passed" for _, o in parts)
        failed = [name for name, o in parts if o != "passed"]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({len(parts) - len(failed)}/{len(parts)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)


@pytest.fixture
def Q():
    return CoefficientField.rationals()


@pytest.fixture
def F2():
    return CoefficientField.prime(2)
