"""Resonator mode dressed by two flux qubits and its effective Kerr constant.

H/ħ = ω a†a + (K/2)(a†a)² + Σᵢ (ωᵢ/2) σzᵢ + Σᵢ gᵢ σxᵢ (a + a†) − G₁₂ σx¹ σx²

on Fock(cutoff) ⊗ qubit ⊗ qubit, all in rad/s. Dressed ladder states are
identified by maximal overlap with |n⟩ ⊗ |q⟩ ⊗ |q⟩ for a fixed qubit
reference state q.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np

from .errors import IdentificationFailureError, NonConvergenceError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.diag([1.0, -1.0])
# basis index of the qubit reference state: "label" is the |0> basis vector
# (σz = +1), "ground" is the lower-energy state of (ω/2)σz
REFERENCES = {"label": 0, "ground": 1}


@dataclass(frozen=True)
class CoupledSpec:
    omega3: float
    k33: float
    omega10_1: float
    omega10_2: float
    g3_1: float
    g3_2: float
    g12: float  # signed; enters as −g12 σx σx
    fock_cutoff: int = 12

    def __post_init__(self):
        if self.fock_cutoff < 6:
            raise ValueError("fock_cutoff must be at least 6")


@dataclass(frozen=True)
class EffectiveKerr:
    k_tilde: float  # rad/s
    omega_tilde: float  # rad/s
    overlaps: Tuple[float, ...]
    k_tilde_upper: float  # (E3 − 2E2 + E1)/ħ, diagnostic

    def ratio(self, omega3: float) -> float:
        return self.k_tilde / omega3


def _operators(cutoff: int):
    n = np.arange(cutoff + 1, dtype=float)
    a = np.diag(np.sqrt(n[1:]), 1)
    return a, np.diag(n)


def _kron3(a, b, c):
    return np.kron(np.kron(a, b), c)


def _split_h3(spec: CoupledSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Photon number and bare qubit energy (diagonals) and the remaining operator."""
    a, num = _operators(spec.fock_cutoff)
    eye_f = np.eye(spec.fock_cutoff + 1)
    i2 = np.eye(2)
    x = a + a.T
    photons = np.diag(_kron3(num, i2, i2)).copy()
    qubits = np.diag(
        0.5 * spec.omega10_1 * _kron3(eye_f, SIGMA_Z, i2) + 0.5 * spec.omega10_2 * _kron3(eye_f, i2, SIGMA_Z)
    ).copy()
    rest = (
        0.5 * spec.k33 * _kron3(num @ num, i2, i2)
        + spec.g3_1 * _kron3(x, SIGMA_X, i2)
        + spec.g3_2 * _kron3(x, i2, SIGMA_X)
        - spec.g12 * _kron3(eye_f, SIGMA_X, SIGMA_X)
    )
    return photons, qubits, rest


def build_h3(spec: CoupledSpec) -> np.ndarray:
    photons, qubits, rest = _split_h3(spec)
    return np.diag(spec.omega3 * photons + qubits) + rest


def _ladder(spec: CoupledSpec, reference: str, levels: int) -> Tuple[np.ndarray, Tuple[float, ...]]:
    """Energies E_n − nω − E_q (n < levels) of the identified dressed states and their overlaps.

    E_q is the bare energy of the qubit reference state. Both offsets are
    removed inside the Rayleigh quotient so the large ladder energies never
    cancel in floating point.
    """
    q = REFERENCES[reference]
    photons, qubits, rest = _split_h3(spec)
    h = np.diag(spec.omega3 * photons + qubits) + rest
    _, vecs = np.linalg.eigh(h)
    dim_q = 4
    e_q = qubits[q * 2 + q]
    out, overlaps, used = [], [], set()
    for n in range(levels):
        ref = n * dim_q + q * 2 + q
        weights = np.abs(vecs[ref, :]) ** 2
        j = int(np.argmax(weights))
        if weights[j] <= 0.5 or j in used:
            if n >= 3:  # upper diagnostic level only
                out.append(np.nan)
                overlaps.append(float(weights[j]))
                continue
        if weights[j] <= 0.5:
            raise IdentificationFailureError(f"dressed state |{n}> has maximal overlap {weights[j]:.3f}")
        if j in used:
            raise IdentificationFailureError(f"dressed state |{n}> maps onto an already identified eigenstate")
        used.add(j)
        v = vecs[:, j]
        p = np.abs(v) ** 2
        detuned = spec.omega3 * np.dot(p, photons - n) + np.dot(p, qubits - e_q) + v @ rest @ v
        out.append(detuned / np.dot(v, v))
        overlaps.append(float(weights[j]))
    return np.array(out), tuple(overlaps)


def _extract(spec: CoupledSpec, reference: str) -> EffectiveKerr:
    e, ov = _ladder(spec, reference, 4)
    return EffectiveKerr(
        k_tilde=float(e[2] - 2 * e[1] + e[0]),
        omega_tilde=float(spec.omega3 + e[1] - e[0]),
        overlaps=ov[:3],
        k_tilde_upper=float(e[3] - 2 * e[2] + e[1]),
    )


def effective_kerr(spec: CoupledSpec, reference: str = "label", rtol: float = 1e-3) -> EffectiveKerr:
    """Dressed-ladder second difference (E₂ − 2E₁ + E₀)/ħ, checked against cutoff + 4."""
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {sorted(REFERENCES)}")
    res = _extract(spec, reference)
    bigger = _extract(replace(spec, fock_cutoff=spec.fock_cutoff + 4), reference)
    scale = max(abs(bigger.k_tilde), 1e-300)
    if abs(bigger.k_tilde - res.k_tilde) > rtol * scale:
        raise NonConvergenceError(
            f"effective Kerr changes by {abs(bigger.k_tilde - res.k_tilde) / scale:.3g} when the cutoff grows by 4"
        )
    return res


def sweep_eta(spec: CoupledSpec, eta_values: Sequence[float], reference: str = "label") -> List[Tuple[float, float]]:
    out = []
    for eta in eta_values:
        if eta < 0:
            raise ValueError("eta must be non-negative")
        r = effective_kerr(replace(spec, g12=eta * spec.g12), reference)
        out.append((float(eta), r.k_tilde / spec.omega3))
    return out
