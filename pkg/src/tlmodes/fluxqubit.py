"""Three-junction flux qubit: spectrum, matrix elements and couplings.

The Hamiltonian is

    H = 4E_C+ n+² + 4E_C− n−² − E_J[2 cos φ+ cos φ− + α cos(2πΦ/Φ₀ + 2φ−)]

with φ± = (ϕ₃ ± ϕ₁)/2 built from the outer junction phases. It is solved on
the torus (ϕ₁, ϕ₃) ∈ [−π, π)², which is the physical configuration space: a
grid in (φ+, φ−) directly would double-count every state. In the charge
basis (n₁, n₃) the kinetic part is diagonal, n± = n₃ ± n₁, and the potential
couples only the handful of charge shifts present in its Fourier series,
so the matrix is sparse and exact for the grid.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import brentq

from .constants import E_CHARGE, HBAR, REDUCED_PHI0, ej_from_hz, josephson_inductance
from .errors import BranchCutContaminationError, NonConvergenceError, TargetUnreachableError
from .netlist import CircuitNetlist, FluxLoopDecl

CUT_TOLERANCE = 1e-4  # allowed probability on the φ− branch-cut lines


@dataclass(frozen=True)
class FluxQubitSpec:
    ej: float  # joule, outer junctions
    cj: float  # farad, outer junctions
    alpha: float
    cs_minus: float = 0.0
    cs_plus: float = 0.0
    phi_ext: float = 0.5  # units of Φ₀

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.ej <= 0 or self.cj <= 0:
            raise ValueError("ej and cj must be positive")

    @property
    def ec_minus(self) -> float:
        return E_CHARGE**2 / (2.0 * ((4.0 + 4.0 * self.alpha) * self.cj + self.cs_minus))

    @property
    def ec_plus(self) -> float:
        return E_CHARGE**2 / (2.0 * (4.0 * self.cj + self.cs_plus))

    @property
    def l_j(self) -> float:
        return josephson_inductance(self.ej)

    @property
    def l_alpha(self) -> float:
        return self.l_j / self.alpha

    @classmethod
    def from_loop(cls, net: CircuitNetlist, loop: FluxLoopDecl) -> "FluxQubitSpec":
        j1, ja, _ = (net.branch(b).kind for b in loop.branch_ids)
        return cls(
            ej=ej_from_hz(j1.ej),
            cj=j1.cj,
            alpha=ja.ej / j1.ej,
            cs_minus=loop.shunt_cap_minus,
            cs_plus=loop.shunt_cap_plus,
            phi_ext=loop.phi_ext,
        )


@dataclass(frozen=True)
class PhaseGrid:
    n: int = 64

    def __post_init__(self):
        if self.n < 32 or self.n & (self.n - 1):
            raise ValueError("grid size must be a power of two and at least 32")

    @property
    def phases(self) -> np.ndarray:
        return -np.pi + 2.0 * np.pi * np.arange(self.n) / self.n

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        x = self.phases
        return np.meshgrid(x, x, indexing="ij")


@dataclass(frozen=True)
class QubitSolution:
    energies: np.ndarray  # joule, lowest four
    omega10: float  # rad/s
    s01: float  # <0|sin(2φ− + 2πΦ/Φ₀)|1>
    p01: float  # <0|φ−|1>
    cut_weight: float

    @property
    def anharmonic_ratio(self) -> float:
        """(E₂ − E₁)/(E₁ − E₀)."""
        e = self.energies
        return float((e[2] - e[1]) / (e[1] - e[0]))


def _potential(spec: FluxQubitSpec, grid: PhaseGrid) -> np.ndarray:
    p1, p3 = grid.mesh()
    return -spec.ej * (np.cos(p1) + np.cos(p3) + spec.alpha * np.cos(2 * np.pi * spec.phi_ext + p3 - p1))


def build_hamiltonian(spec: FluxQubitSpec, grid: PhaseGrid) -> sp.csr_matrix:
    """Hamiltonian (joule) in the discrete charge basis of the phase grid.

    Unitarily equivalent to the grid representation with a diagonal potential
    and the kinetic term applied through the discrete Fourier transform.
    """
    n = grid.n
    q = np.fft.fftfreq(n, 1.0 / n)
    n1, n3 = np.meshgrid(q, q, indexing="ij")
    kinetic = 4 * spec.ec_plus * (n1 + n3) ** 2 + 4 * spec.ec_minus * (n3 - n1) ** 2
    vhat = np.fft.fft2(_potential(spec, grid)) / n**2
    shifts = np.argwhere(np.abs(vhat) > 1e-12 * np.abs(vhat).max())
    idx = np.arange(n * n).reshape(n, n)
    i1, i3 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    rows, cols, vals = [idx.ravel()], [idx.ravel()], [kinetic.ravel().astype(complex)]
    for a, b in shifts:
        rows.append(idx[(i1 + a) % n, (i3 + b) % n].ravel())
        cols.append(idx.ravel())
        vals.append(np.full(n * n, vhat[a, b]))
    h = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n * n, n * n)
    )
    return ((h + h.getH()) * 0.5).tocsr()


def solve(spec: FluxQubitSpec, grid: Optional[PhaseGrid] = None, levels: int = 4, cut_tolerance: float = CUT_TOLERANCE) -> QubitSolution:
    grid = grid or PhaseGrid()
    n = grid.n
    h = build_hamiltonian(spec, grid)
    sigma = _potential(spec, grid).min() - 1e-3 * spec.ej
    v0 = np.ones(n * n, dtype=complex)
    try:
        w, v = spla.eigsh(h, k=levels, sigma=sigma, which="LM", v0=v0, tol=0)
    except spla.ArpackNoConvergence as exc:
        raise NonConvergenceError(f"qubit eigensolver did not converge: {exc}") from None
    order = np.argsort(w)
    w, v = w[order], v[:, order]
    psi = np.fft.ifft2(v.T.reshape(levels, n, n), norm="ortho").reshape(levels, n * n)
    # gauge: largest grid amplitude of each state real and positive
    big = np.argmax(np.abs(psi), axis=1)
    psi *= np.exp(-1j * np.angle(psi[np.arange(levels), big]))[:, None]

    p1, p3 = grid.mesh()
    phi_minus = ((p3 - p1) / 2).ravel()
    sine = np.sin(p3 - p1 + 2 * np.pi * spec.phi_ext).ravel()
    cut = ((np.abs(p1 + np.pi) < 1e-12) | (np.abs(p3 + np.pi) < 1e-12)).ravel()
    weight = float(np.max(np.sum(np.abs(psi[:2, cut]) ** 2, axis=1)))
    if weight > cut_tolerance:
        raise BranchCutContaminationError(f"qubit states carry weight {weight:.3g} on the phase branch cut")
    s01 = np.vdot(psi[0], sine * psi[1])
    p01 = np.vdot(psi[0], phi_minus * psi[1])
    return QubitSolution(w, float((w[1] - w[0]) / HBAR), float(s01.real), float(p01.real), weight)


def with_shunt_scale(spec: FluxQubitSpec, scale: float) -> FluxQubitSpec:
    return replace(spec, cs_minus=spec.cs_minus * scale, cs_plus=spec.cs_plus * scale)


def calibrate_shunt(spec: FluxQubitSpec, target_omega10: float, grid: Optional[PhaseGrid] = None, span: float = 1e3) -> float:
    """Shunt capacitance C_S− giving ``target_omega10``; both shunts scale together."""
    if spec.cs_minus <= 0:
        raise ValueError("calibration needs a nonzero base shunt capacitance")
    grid = grid or PhaseGrid()

    def f(logs: float) -> float:
        return solve(with_shunt_scale(spec, math.exp(logs)), grid).omega10 / target_omega10 - 1.0

    lo, hi = -math.log(span), math.log(span)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0:
        raise TargetUnreachableError(
            f"target {target_omega10 / (2 * np.pi):.6g} Hz outside the reachable qubit frequency range"
        )
    logs = brentq(f, lo, hi, xtol=1e-12, rtol=1e-14)
    # local monotonicity check: more shunt capacitance lowers the splitting
    if f(logs + 1e-3) >= f(logs - 1e-3):
        raise TargetUnreachableError("qubit frequency is not decreasing in the shunt capacitance here")
    return spec.cs_minus * math.exp(logs)


def coupling_g(zero_point_flux: float, spec: FluxQubitSpec, qsol: QubitSolution, delta_u: float) -> float:
    """Qubit-mode coupling g (rad/s) for a mode with the given zero-point flux and drop."""
    return spec.alpha * spec.ej * zero_point_flux * delta_u / REDUCED_PHI0 * qsol.s01 / HBAR


def coupling_flux_fraction(l_j: float, l_alpha: float, l_c: float) -> float:
    loop = 2 * l_j + l_alpha
    if l_c > 0.1 * loop:
        warnings.warn("coupling inductance is not small against the loop inductance", RuntimeWarning, stacklevel=2)
    return math.sqrt((loop + l_c) / loop) - 1.0


def qubit_qubit_coupling(
    q1: QubitSolution, spec1: FluxQubitSpec, q2: QubitSolution, spec2: FluxQubitSpec, l_c: float, sign: int = 1
) -> float:
    """Inductive qubit-qubit coupling G₁₂ (joule) through a shared inductance ``l_c``."""
    if l_c <= 0:
        return 0.0
    f1 = l_c * q1.p01 / (2 * spec1.l_j + spec1.l_alpha)
    f2 = l_c * q2.p01 / (2 * spec2.l_j + spec2.l_alpha)
    return sign * 8 * REDUCED_PHI0**2 / l_c * f1 * f2
