from __future__ import annotations

import pytest

from pzf.graph import Graph

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def kang_yi_tree() -> Graph:
    """Five-vertex tree where P_B(G) fails to be monotone in B.

    One-based labels 1..5 map to 0..4; edges 1-2, 2-3, 3-4, 3-5.
    """
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (2, 4)], "kang_yi_tree")


def labels(*one_based: int) -> int:
    m = 0
    for v in one_based:
        m |= 1 << (v - 1)
    return m


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"
    elif "test_acceptance" in report.nodeid and report.when == "setup" and report.failed:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
