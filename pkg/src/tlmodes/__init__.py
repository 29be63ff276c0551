"""Normal modes, Kerr coefficients and dressed Kerr of a transmission-line
resonator with an embedded lumped circuit."""

from .netlist import CircuitNetlist, parse_netlist, serialize_netlist
from .lumped import linearize, build_node_matrices, node_matrices, response
from .resonator import TransmissionLine, ModeSearchConfig, NormalMode, find_modes, calibrate_length

__all__ = [
    "CircuitNetlist",
    "parse_netlist",
    "serialize_netlist",
    "linearize",
    "build_node_matrices",
    "node_matrices",
    "response",
    "TransmissionLine",
    "ModeSearchConfig",
    "NormalMode",
    "find_modes",
    "calibrate_length",
]
__version__ = "0.1.0"
