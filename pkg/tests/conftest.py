from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance: dict[str, tuple[str, str]] = {}


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = dict(report.user_properties).get("acceptance")
    if name is None:
        return
    _acceptance[report.nodeid] = (name, report.outcome)


@pytest.fixture(autouse=True)
def _tag_acceptance(request, record_property):
    marker = request.node.get_closest_marker("acceptance")
    if marker is not None:
        record_property("acceptance", marker.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.values():
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
