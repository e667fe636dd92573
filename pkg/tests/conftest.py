import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}


@pytest.fixture
def criterion(request):
    """Record a one-line summary for an acceptance criterion.

    Call it with (number, title, detail) before asserting so the line is
    printed whether or not the assertion holds.
    """
    def record(number, title, detail=""):
        request.node.user_properties.append(("criterion", (number, title, detail)))

    return record


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    number, title, detail = props["criterion"]
    if report.when == "call" or report.failed:
        status = "PASS" if report.passed else "FAIL"
        _criteria[number] = (status, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, detail = _criteria[number]
        line = f"{status} criterion {number:>2}: {title}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)
