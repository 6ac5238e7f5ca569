import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from causatum.kb import load_kb  # noqa: E402

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number): numbered acceptance criterion")


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is None:
        return
    entry = _criteria.setdefault(number, {"name": report.criterion_name, "ok": True})
    if report.failed or (report.when == "call" and report.skipped):
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        report.criterion = marker.args[0]
        report.criterion_name = item.name


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {entry['name']}")


@pytest.fixture(scope="session")
def cereal():
    return load_kb("cereal.kb")


@pytest.fixture(scope="session")
def deck():
    return load_kb("deck.kb")


@pytest.fixture(scope="session")
def fork8():
    return load_kb("fork8.kb")


@pytest.fixture(scope="session")
def rover():
    return load_kb("rover.kb")
