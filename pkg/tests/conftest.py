import pytest

from stncg.constellation import build_topology
from stncg.scenario import Scenario, reference_scenario, reference_topology

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ref_topology():
    return reference_topology()


@pytest.fixture(scope="session")
def ref_scenario():
    return reference_scenario(seed=0, hops=(2, 2))


@pytest.fixture
def line_scenario():
    """Two satellites joined by one ISL: D=(20, 0), C=(10, 10), ISL capacity 5."""
    topo = build_topology(2, [(1, 2)], gateways=(), isl_capacity=5.0)
    return Scenario(topo, (20.0, 0.0), (10.0, 10.0), (0.6, 0.3, 0.1), (1, 1))


@pytest.fixture
def record():
    def _record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
