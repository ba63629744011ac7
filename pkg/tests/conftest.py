import pytest

from splashgeom.verify import Workspace
from splashgeom.gf import FieldTower

_WS = {}


def ws_for(q):
    if q not in _WS:
        _WS[q] = Workspace(FieldTower(q))
    return _WS[q]


@pytest.fixture(params=[2, 3], ids=lambda q: f"q{q}")
def ws(request):
    return ws_for(request.param)


@pytest.fixture
def ws2():
    return ws_for(2)


@pytest.fixture
def ws3():
    return ws_for(3)


# acceptance lines are collected here and repeated at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
