"""Physical constants shared by every solver stage (SI units)."""

import math

PHI0 = 2.067833848e-15  # magnetic flux quantum, Wb
HBAR = 1.054571817e-34  # reduced Planck constant, J s
E_CHARGE = 1.602176634e-19  # elementary charge, C
H_PLANCK = 2.0 * math.pi * HBAR
REDUCED_PHI0 = PHI0 / (2.0 * math.pi)


def josephson_inductance(ej_joule: float) -> float:
    """Linear inductance of a junction with Josephson energy ``ej_joule``."""
    return REDUCED_PHI0**2 / ej_joule


def ej_from_hz(ej_hz: float) -> float:
    return H_PLANCK * ej_hz
