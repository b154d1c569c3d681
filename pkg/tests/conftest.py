import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, tuple[str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            number, title = mark.args
            _CRITERIA.setdefault(number, (title, []))


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number = mark.args[0]
    outcomes = _CRITERIA[number][1]
    if call.when == "call" or call.excinfo is not None:
        outcomes.append("pass" if call.excinfo is None else "fail")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, outcomes = _CRITERIA[number]
        if not outcomes:
            status = "NOT RUN"
        else:
            status = "PASS" if all(o == "pass" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status:7s} {title}")
