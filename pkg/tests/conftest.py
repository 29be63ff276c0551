import numpy as np
import pytest

from tlmodes.netlist import parse_netlist
from tlmodes.scenario import load_scenario
from tlmodes.system import build_coupled, solve_resonator

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


THREE_NODE = """\
# three nodes, phi3 grounded
ground p3
port_in p1
port_out p2
nodes p1 p2 p3
C b1 p1 p3 1e-15
C b2 p2 p3 2e-15
L b3 p2 p1 1e-9
"""


@pytest.fixture
def three_node_net():
    return parse_netlist(THREE_NODE)


@pytest.fixture(scope="session")
def twoqubit_scenario():
    return load_scenario("twoqubit")


@pytest.fixture(scope="session")
def twoqubit_resonator(twoqubit_scenario):
    return solve_resonator(twoqubit_scenario)


@pytest.fixture(scope="session")
def twoqubit_coupled(twoqubit_scenario):
    return build_coupled(twoqubit_scenario)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
