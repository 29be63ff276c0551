"""Quantized normal modes and their Josephson Kerr coefficients.

Each junction contributes −E_J cos(2πδ/Φ₀) with δ = Σ_m Δu_{m} φ̂_m. Keeping the
quartic, photon-number conserving part gives

    H_nl/ħ = Σ_m (K_mm/2) n_m² + Σ_{m<n} K_mn n_m n_n + Lamb shifts,

so K_mm is the second difference of the single-mode ladder.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .constants import HBAR, PHI0, ej_from_hz
from .lumped import LinearizedCircuit
from .resonator import NormalMode

KERR_PREFACTOR = 2.0 * math.pi**4 * HBAR / PHI0**4


@dataclass(frozen=True)
class QuantizedMode:
    omega: float
    zero_point_flux: float  # Wb
    delta_u: np.ndarray
    c_sigma: float

    @classmethod
    def from_mode(cls, mode: NormalMode) -> "QuantizedMode":
        zpf = math.sqrt(HBAR / (2.0 * mode.c_sigma * mode.omega))
        return cls(mode.omega, zpf, np.asarray(mode.delta_u), mode.c_sigma)


def kerr_self(mode: NormalMode, junctions: Iterable[Tuple[float, float]]) -> float:
    """Self-Kerr K_mm in rad/s from (E_J in joule, Δu) pairs."""
    s = sum(ej * du**4 for ej, du in junctions)
    return -KERR_PREFACTOR * s / (mode.c_sigma**2 * mode.omega**2)


def kerr_cross(k_mm: float, k_nn: float) -> float:
    if k_mm > 0 or k_nn > 0:
        raise ValueError("self-Kerr coefficients must be non-positive")
    return -2.0 * math.sqrt(k_mm * k_nn)


def junction_pairs(mode: NormalMode, lin: LinearizedCircuit) -> list:
    """(E_J joule, Δu) for each junction of ``lin`` in declaration order."""
    net = lin.base
    return [(ej_from_hz(net.branch(j).kind.ej), du) for j, du in zip(lin.junction_index, mode.delta_u)]


@dataclass(frozen=True)
class KerrMatrix:
    omegas: np.ndarray
    k_self: np.ndarray  # rad/s
    k_cross: np.ndarray  # rad/s, symmetric with k_self on the diagonal

    def ratios(self) -> np.ndarray:
        """K_mn/ω_m."""
        return self.k_cross / self.omegas[:, None]

    def lamb_shift(self) -> np.ndarray:
        """First-order frequency shift of each mode from vacuum fluctuations (rad/s)."""
        return 0.5 * self.k_cross.sum(axis=1)


def kerr_matrix(modes: Sequence[NormalMode], lin: LinearizedCircuit) -> KerrMatrix:
    ks = np.array([kerr_self(m, junction_pairs(m, lin)) for m in modes])
    n = len(ks)
    kc = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            kc[i, j] = ks[i] if i == j else kerr_cross(ks[i], ks[j])
    return KerrMatrix(np.array([m.omega for m in modes]), ks, kc)


def check_validity(k_mm: float, omega: float, photons: float = 1.0, threshold: float = 0.1) -> bool:
    """Warn when the quartic energy is not small compared with ħω at ``photons`` photons."""
    ok = abs(k_mm) * photons**2 < threshold * omega
    if not ok:
        warnings.warn(
            f"Kerr term |K|<n^2> = {abs(k_mm) * photons**2:.3g} rad/s is not small against w = {omega:.3g} rad/s",
            RuntimeWarning,
            stacklevel=2,
        )
    return ok
