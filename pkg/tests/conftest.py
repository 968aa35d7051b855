import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hypermatch.hypergraph import Hypergraph, hypergraph_from  # noqa: E402

COMB_EDGES = [(1, 2, 3), (4, 5, 6), (7, 8, 9), (3, 4, 7)]


@pytest.fixture
def comb():
    return hypergraph_from(COMB_EDGES)


@pytest.fixture
def path3():
    """e1 - e2 - e3 with e1, e3 disjoint."""
    return hypergraph_from([(1, 2, 3), (3, 4, 5), (5, 6, 7)])


@pytest.fixture
def single():
    return hypergraph_from([(1, 2, 3)])


@st.composite
def hypergraphs(draw, max_n=9, max_m=7, ks=(2, 3, 4)):
    k = draw(st.sampled_from(ks))
    n = draw(st.integers(min_value=k, max_value=max_n))
    pool = st.lists(st.integers(min_value=1, max_value=n), min_size=k, max_size=k, unique=True).map(
        lambda e: tuple(sorted(e))
    )
    edges = draw(st.lists(pool, max_size=max_m, unique=True))
    return Hypergraph(n, k, tuple(edges))


# -- acceptance summary ------------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
