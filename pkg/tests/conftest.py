import numpy as np
import pytest
from hypothesis import settings

from netpers.network import Network

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


# three-node network with a negative self-loop at a
THREE_NODE = Network(("a", "b", "c"), np.array([[-1.0, 1.0, 2.0],
                                         [1.0, 0.0, 2.0],
                                         [1.0, 2.0, 0.0]]))

# X and its (a, c) pair swap Y
SWAP_X = Network(("a", "b", "c"), np.array([[0.0, 6.0, 4.0],
                                           [1.0, 0.0, 5.0],
                                           [2.0, 3.0, 0.0]]))
SWAP_Y = Network(("a", "b", "c"), np.array([[0.0, 6.0, 2.0],
                                           [1.0, 0.0, 5.0],
                                           [4.0, 3.0, 0.0]]))


@pytest.fixture
def three_node():
    return THREE_NODE


@pytest.fixture
def swap_pair():
    return SWAP_X, SWAP_Y


# ------------------------------------------------- acceptance criterion summary

_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = getattr(report, "criterion", None)
    if number is not None:
        _criteria.setdefault(number, []).append((report.nodeid, report.outcome, report.duration))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        runs = _criteria[number]
        ok = all(outcome == "passed" for _, outcome, _ in runs)
        secs = sum(d for _, _, d in runs)
        name = runs[0][0].split("::")[-1]
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {name}  ({secs:.2f}s)")
