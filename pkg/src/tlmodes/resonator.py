"""Normal modes of an open-ended transmission line with an embedded lumped circuit.

The line flux is ψ(x) = A cos(kx) left of the insertion point x_c and
B cos(k(x − l)) right of it; the inner circuit is a zero-width two-port at x_c.
Two cases are handled:

* floating circuits (ground is one of the ports): current is continuous and
  the flux jumps by Δψ = D(ω) ψ'(x_c)/L₀;
* grounded circuits (ground is a separate node): both port fluxes are tied
  to the line and the two port currents enter the node equations separately.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import (
    NearPoleError,
    NoRootsInRangeError,
    SolverError,
    TargetUnreachableError,
    ZeroNormError,
)
from .lumped import POLE_GUARD, NodeMatrices, impedance_solve, port_block, port_block_many


@dataclass(frozen=True)
class TransmissionLine:
    l0: float  # H/m
    c0: float  # F/m
    length: float  # m
    x_c: float  # m

    def __post_init__(self):
        if self.l0 <= 0 or self.c0 <= 0 or self.length <= 0:
            raise ValueError("l0, c0 and length must be positive")
        if not 0 < self.x_c < self.length:
            raise ValueError("insertion point must lie strictly inside the line")

    @classmethod
    def from_impedance(cls, z0: float, v: float, length: float, x_frac: float = 0.5) -> "TransmissionLine":
        return cls(z0 / v, 1.0 / (z0 * v), length, x_frac * length)

    @property
    def v(self) -> float:
        return 1.0 / np.sqrt(self.l0 * self.c0)

    @property
    def z0(self) -> float:
        return np.sqrt(self.l0 / self.c0)

    @property
    def x_frac(self) -> float:
        return self.x_c / self.length

    def with_length(self, length: float) -> "TransmissionLine":
        return replace(self, length=length, x_c=self.x_frac * length)

    def bare_frequency(self, n: int) -> float:
        return n * np.pi * self.v / self.length


@dataclass(frozen=True)
class ModeSearchConfig:
    omega_min: float
    omega_max: float
    grid_points: int = 2000  # per decade
    root_tol: float = 1e-13

    def __post_init__(self):
        if not 0 < self.omega_min < self.omega_max:
            raise ValueError("need 0 < omega_min < omega_max")
        if self.grid_points < 100:
            raise ValueError("grid_points must be at least 100")


@dataclass(frozen=True)
class NormalMode:
    omega: float
    k: float
    amp_left: float
    amp_right: float
    node_flux: np.ndarray  # ground-referenced node fluxes
    delta_u: np.ndarray  # junction drops, ordered as lin.junction_index
    c_sigma: float = float("nan")
    l_sigma: float = float("nan")
    ground_offset: float = 0.0  # line-referenced flux of the ground node

    def psi(self, x, tl: TransmissionLine) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(
            x < tl.x_c,
            self.amp_left * np.cos(self.k * x),
            self.amp_right * np.cos(self.k * (x - tl.length)),
        )

    @property
    def absolute_node_flux(self) -> np.ndarray:
        return self.node_flux + self.ground_offset


# ---------------------------------------------------------------------------
# matching system


def _trig(tl: TransmissionLine, k):
    a, b = k * tl.x_c, k * (tl.x_c - tl.length)
    return np.sin(a), np.cos(a), np.sin(b), np.cos(b)


def _matrix_from_block(tl: TransmissionLine, nm: NodeMatrices, k, z) -> np.ndarray:
    s1, c1, s2, c2 = _trig(tl, k)
    kl = k / tl.l0
    if nm.floating:
        d = z[..., 0, 0] - z[..., 0, 1] - z[..., 1, 0] + z[..., 1, 1]
        rows = [[-s1, s2], [-c1 + d * kl * s1, c2]]
    else:
        rows = [
            [c1 - z[..., 0, 0] * kl * s1, z[..., 0, 1] * kl * s2],
            [-z[..., 1, 0] * kl * s1, c2 + z[..., 1, 1] * kl * s2],
        ]
    return np.moveaxis(np.array([[np.broadcast_to(e, np.shape(k)) for e in r] for r in rows]), (0, 1), (-2, -1))


def matching_matrix(tl: TransmissionLine, nm: NodeMatrices, omega: float) -> np.ndarray:
    """2x2 system acting on (A, B)."""
    k = omega / tl.v
    return _matrix_from_block(tl, nm, k, port_block(nm, omega))


def matching_determinant(tl: TransmissionLine, nm: NodeMatrices, omega: float) -> float:
    return float(np.linalg.det(matching_matrix(tl, nm, omega)))


def _determinant_many(tl: TransmissionLine, nm: NodeMatrices, omegas: np.ndarray) -> np.ndarray:
    k = omegas / tl.v
    return np.linalg.det(_matrix_from_block(tl, nm, k, port_block_many(nm, omegas)))


# ---------------------------------------------------------------------------
# root search


def _intervals(nm: NodeMatrices, lo: float, hi: float) -> List[Tuple[float, float]]:
    """Split [lo, hi] at inner poles, leaving out the guard bands."""
    cuts = [p for p in nm.poles if lo < p < hi and p > 0]
    edges = [(lo, False)]
    for p in cuts:
        edges.append((p * (1 - 2 * POLE_GUARD), True))
        edges.append((p * (1 + 2 * POLE_GUARD), True))
    edges.append((hi, False))
    out = []
    for (a, _), (b, _) in zip(edges[0::2], edges[1::2]):
        if b > a:
            out.append((a, b))
    return out


def find_roots(
    tl: TransmissionLine, nm: NodeMatrices, cfg: ModeSearchConfig, max_roots: Optional[int] = None
) -> List[float]:
    """Eigenfrequencies in ``[omega_min, omega_max]``, ascending."""
    roots: List[float] = []

    def f(w):
        return matching_determinant(tl, nm, w)

    for a, b in _intervals(nm, cfg.omega_min, cfg.omega_max):
        npts = max(int(np.ceil(cfg.grid_points * np.log10(b / a))) + 1, 8)
        grid = np.geomspace(a, b, npts)
        vals = _determinant_many(tl, nm, grid)
        for i in range(npts - 1):
            va, vb = vals[i], vals[i + 1]
            if not (np.isfinite(va) and np.isfinite(vb)):
                continue
            if va == 0.0:
                root = grid[i]
            elif va * vb < 0:
                root = brentq(f, grid[i], grid[i + 1], xtol=1e-300, rtol=max(cfg.root_tol, 4.5e-16), maxiter=200)
            else:
                continue
            if not roots or root > roots[-1] * (1 + 1e-12):
                roots.append(float(root))
            if max_roots is not None and len(roots) >= max_roots:
                return roots
    return roots


def _null_vector(m: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(m)
    ab = vh[-1]
    lead = ab[0] if abs(ab[0]) > 1e-8 * np.max(np.abs(ab)) else ab[1]
    return ab * np.sign(lead)


def build_mode(tl: TransmissionLine, nm: NodeMatrices, omega: float) -> NormalMode:
    """Unnormalized mode at a root ``omega`` of the matching determinant."""
    k = omega / tl.v
    a_amp, b_amp = _null_vector(matching_matrix(tl, nm, omega))
    s1, c1, s2, c2 = _trig(tl, k)
    n = nm.size
    j = np.zeros(n)
    # current driven into each port by the adjoining line segment
    j_in = a_amp * k * s1 / tl.l0
    j_out = -b_amp * k * s2 / tl.l0
    offset = 0.0
    if nm.floating:
        j_out = -j_in
    if nm.idx_in is not None:
        j[nm.idx_in] += j_in
    if nm.idx_out is not None:
        j[nm.idx_out] += j_out
    phi = impedance_solve(nm, omega, j) if n else np.zeros(0)
    if nm.floating:
        phi_in = phi[nm.idx_in] if nm.idx_in is not None else 0.0
        offset = a_amp * c1 - phi_in
    du = nm.incidence.entries[nm.junction_rows()] @ phi if n else np.zeros(0)
    return NormalMode(float(omega), float(k), float(a_amp), float(b_amp), phi, du, ground_offset=float(offset))


# ---------------------------------------------------------------------------
# inner products


def _cos_cos(k1: float, k2: float, a: float) -> float:
    """∫₀ᵃ cos(k1 x) cos(k2 x) dx."""
    return 0.5 * a * (np.sinc((k1 - k2) * a / np.pi) + np.sinc((k1 + k2) * a / np.pi))


def _sin_sin(k1: float, k2: float, a: float) -> float:
    return 0.5 * a * (np.sinc((k1 - k2) * a / np.pi) - np.sinc((k1 + k2) * a / np.pi))


def c_inner(m1: NormalMode, m2: NormalMode, tl: TransmissionLine, nm: NodeMatrices) -> float:
    """Capacitive inner product C₀∫ψ₁ψ₂ dx + φ₁ᵀC̃φ₂."""
    left = m1.amp_left * m2.amp_left * _cos_cos(m1.k, m2.k, tl.x_c)
    right = m1.amp_right * m2.amp_right * _cos_cos(m1.k, m2.k, tl.length - tl.x_c)
    return float(tl.c0 * (left + right) + m1.node_flux @ nm.ctilde @ m2.node_flux)


def l_inner(m1: NormalMode, m2: NormalMode, tl: TransmissionLine, nm: NodeMatrices) -> float:
    """Inductive inner product (1/L₀)∫ψ₁'ψ₂' dx + φ₁ᵀL̃φ₂."""
    kk = m1.k * m2.k
    left = m1.amp_left * m2.amp_left * _sin_sin(m1.k, m2.k, tl.x_c)
    right = m1.amp_right * m2.amp_right * _sin_sin(m1.k, m2.k, tl.length - tl.x_c)
    return float(kk * (left + right) / tl.l0 + m1.node_flux @ nm.ltilde @ m2.node_flux)


def normalize_mode(
    mode: NormalMode, tl: TransmissionLine, nm: NodeMatrices, c_sigma: Optional[float] = None
) -> NormalMode:
    """Rescale so the capacitive self-product equals ``c_sigma`` (default C₀·length)."""
    target = tl.c0 * tl.length if c_sigma is None else c_sigma
    cp = c_inner(mode, mode, tl, nm)
    if not np.isfinite(cp) or cp <= 0 or cp < 1e-300:
        raise ZeroNormError(f"mode at w = {mode.omega:.6g} has zero capacitive norm")
    s = np.sqrt(target / cp)
    out = replace(
        mode,
        amp_left=mode.amp_left * s,
        amp_right=mode.amp_right * s,
        node_flux=mode.node_flux * s,
        delta_u=mode.delta_u * s,
        ground_offset=mode.ground_offset * s,
        c_sigma=target,
    )
    lp = l_inner(out, out, tl, nm)
    l_sigma = 1.0 / lp
    w = 1.0 / np.sqrt(target * l_sigma)
    if abs(w - mode.omega) > 1e-6 * mode.omega:
        raise SolverError(
            f"inner products inconsistent with root: {w:.12g} vs {mode.omega:.12g} rad/s"
        )
    return replace(out, l_sigma=l_sigma)


def find_modes(
    tl: TransmissionLine, nm: NodeMatrices, cfg: ModeSearchConfig, c_sigma: Optional[float] = None
) -> List[NormalMode]:
    roots = find_roots(tl, nm, cfg)
    if not roots:
        raise NoRootsInRangeError(
            f"no eigenfrequencies between {cfg.omega_min:.6g} and {cfg.omega_max:.6g} rad/s"
        )
    modes = []
    for w in roots:
        try:
            modes.append(normalize_mode(build_mode(tl, nm, w), tl, nm, c_sigma))
        except NearPoleError:
            continue  # root at an inner pole: reported by omission
    return modes


def calibrate_length(
    tl: TransmissionLine,
    nm: NodeMatrices,
    target_omega1: float,
    omega_floor: Optional[float] = None,
    grid_points: int = 2000,
) -> TransmissionLine:
    """Adjust the line length (insertion fraction fixed) so the lowest mode sits at ``target_omega1``."""
    floor = target_omega1 / 20 if omega_floor is None else omega_floor

    def first(length: float) -> float:
        t = tl.with_length(length)
        cfg = ModeSearchConfig(floor, max(2.5 * t.bare_frequency(1), 2 * floor), grid_points)
        r = find_roots(t, nm, cfg, max_roots=1)
        if not r:
            raise NoRootsInRangeError("no fundamental mode found during length calibration")
        return r[0]

    bare = np.pi * tl.v / target_omega1
    lo, hi = bare, bare
    for _ in range(60):
        if first(lo) > target_omega1:
            break
        lo /= 1.25
    else:
        raise TargetUnreachableError("target fundamental frequency not reachable by shortening the line")
    for _ in range(60):
        if first(hi) < target_omega1:
            break
        hi *= 1.25
    else:
        raise TargetUnreachableError("target fundamental frequency not reachable by lengthening the line")
    # root-find on length in units of the bare estimate to keep brentq's absolute tolerance meaningful
    u = brentq(lambda s: first(s * bare) - target_omega1, lo / bare, hi / bare, xtol=1e-15, rtol=1e-14)
    return tl.with_length(u * bare)
