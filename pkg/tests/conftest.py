import sys
from fractions import Fraction

import pytest

from kscert import (
    Context,
    ObservableSet,
    build_orthogonality_graph,
    enumerate_bases,
)
from kscert import catalog

sys.setrecursionlimit(100_000)


@pytest.fixture(scope="session")
def mermin_peres():
    oset = catalog.get("mermin-peres").load()
    return oset, [Context(ids) for ids in oset.declared_contexts]


@pytest.fixture(scope="session")
def pentagram():
    oset = catalog.get("mermin-pentagram").load()
    return oset, [Context(ids) for ids in oset.declared_contexts]


@pytest.fixture(scope="session")
def cabello():
    oset = catalog.get("cabello-18").load()
    graph = build_orthogonality_graph(oset)
    bases = enumerate_bases(graph)
    return oset, graph, bases


@pytest.fixture(scope="session")
def peres33():
    oset = catalog.get("peres-33").load()
    graph = build_orthogonality_graph(oset)
    bases = enumerate_bases(graph)
    return oset, graph, bases


def single_basis_set(dim=3):
    oset = ObservableSet(dim=dim)
    for k in range(dim):
        v = [0] * dim
        v[k] = 1
        oset.add_ray(v, label=f"e{k + 1}")
    return oset


def two_bases_set():
    """Two d=3 bases sharing one ray; every orthogonality edge lies in a basis."""
    oset = ObservableSet(dim=3)
    oset.add_ray((1, 0, 0), label="e1")
    oset.add_ray((0, 1, 0), label="e2")
    oset.add_ray((0, 0, 1), label="e3")
    oset.add_ray((0, 1, 1), label="f1")
    oset.add_ray((0, 1, -1), label="f2")
    return oset


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and "criterion" in nodeid:
                name = nodeid.split("::")[-1]
                lines[name] = "PASS" if outcome == "passed" else "FAIL"
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(lines, key=lambda n: n.split("_")[2]):
            terminalreporter.write_line(f"{lines[name]}  {name}")


@pytest.fixture
def basis3():
    return single_basis_set(3)


@pytest.fixture
def two_bases():
    return two_bases_set()
