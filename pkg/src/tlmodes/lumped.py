"""Branch/node matrices of the embedded circuit and its port response.

Junctions are replaced by their linear inductance so the inner circuit is an
LC network described by ``ctilde`` and ``ltilde`` (node-flux representation,
ground column removed).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from .constants import REDUCED_PHI0, ej_from_hz
from .errors import DegenerateCapacitanceError, IllConditionedError, NearPoleError
from .netlist import (
    Capacitor,
    CircuitNetlist,
    IncidenceMatrix,
    Inductor,
    Junction,
    build_incidence_matrix,
)

POLE_GUARD = 1e-9  # relative half-width of the excluded band around each inner pole
MAX_CONDITION = 1e14


@dataclass(frozen=True)
class LinearizedCircuit:
    base: CircuitNetlist
    branch_l: np.ndarray  # inverse inductance per branch, 1/H
    branch_c: np.ndarray  # capacitance per branch, F
    junction_index: Tuple[str, ...]


def linearize(net: CircuitNetlist) -> LinearizedCircuit:
    inv_l = np.zeros(len(net.branches))
    cap = np.zeros(len(net.branches))
    for i, b in enumerate(net.branches):
        k = b.kind
        if isinstance(k, Capacitor):
            cap[i] = k.c
        elif isinstance(k, Inductor):
            inv_l[i] = 1.0 / k.l
        elif isinstance(k, Junction):
            inv_l[i] = ej_from_hz(k.ej) / REDUCED_PHI0**2
            cap[i] = k.cj
    return LinearizedCircuit(net, inv_l, cap, tuple(b.id for b in net.junctions))


@dataclass(frozen=True)
class InnerSpectrum:
    frequencies: Tuple[float, ...]  # rad/s, ascending


@dataclass(frozen=True)
class NodeMatrices:
    ctilde: np.ndarray
    ltilde: np.ndarray
    idx_in: Optional[int]
    idx_out: Optional[int]
    incidence: IncidenceMatrix
    lin: LinearizedCircuit

    @property
    def size(self) -> int:
        return self.ctilde.shape[0]

    @property
    def floating(self) -> bool:
        return self.lin.base.floating

    @cached_property
    def poles(self) -> np.ndarray:
        return np.asarray(inner_spectrum(self).frequencies)

    def junction_rows(self) -> np.ndarray:
        rows = self.incidence.row_order
        return np.array([rows.index(j) for j in self.lin.junction_index], dtype=int)


def build_node_matrices(lin: LinearizedCircuit, k: Optional[IncidenceMatrix] = None) -> NodeMatrices:
    if k is None:
        k = build_incidence_matrix(lin.base)
    kk = k.entries
    n = kk.shape[1]
    ct = np.zeros((n, n))
    lt = np.zeros((n, n))
    # stamp branch by branch in id order so the result does not depend on declaration order
    for i in sorted(range(kk.shape[0]), key=lambda r: k.row_order[r]):
        outer = np.outer(kk[i], kk[i])
        ct += lin.branch_c[i] * outer
        lt += lin.branch_l[i] * outer
    net = lin.base
    return NodeMatrices(ct, lt, k.column(net.port_in), k.column(net.port_out), k, lin)


def node_matrices(net: CircuitNetlist) -> NodeMatrices:
    """Shortcut: linearize ``net`` and assemble its node matrices."""
    return build_node_matrices(linearize(net))


def _condense(nm: NodeMatrices) -> Tuple[np.ndarray, np.ndarray]:
    """Eliminate the null space of C̃ (massless directions) from L̃ by a Schur complement.

    Works in the eigenbasis of C̃, so series capacitors between floating
    nodes are handled as well as nodes without any capacitance.
    """
    c, l = nm.ctilde, nm.ltilde
    s, u = np.linalg.eigh(c)
    scale = np.max(np.abs(s)) if s.size else 0.0
    massless = s <= 1e-14 * max(scale, 1e-300)
    if not massless.any():
        return c, l
    keep = ~massless
    lr = u.T @ l @ u
    lbb = lr[np.ix_(massless, massless)]
    try:
        fac = sla.cho_factor(lbb)
    except np.linalg.LinAlgError:
        raise DegenerateCapacitanceError(
            "massless degrees of freedom without an inductive restoring force"
        ) from None
    lab = lr[np.ix_(keep, massless)]
    lred = lr[np.ix_(keep, keep)] - lab @ sla.cho_solve(fac, lab.T)
    return np.diag(s[keep]), 0.5 * (lred + lred.T)


def inner_spectrum(nm: NodeMatrices) -> InnerSpectrum:
    """Eigenfrequencies of the isolated inner circuit (generalized problem L̃v = ω²C̃v)."""
    if nm.size == 0:
        return InnerSpectrum(())
    c, l = _condense(nm)
    if c.size == 0:
        return InnerSpectrum(())
    try:
        w2 = sla.eigh(l, c, eigvals_only=True)
    except np.linalg.LinAlgError:
        raise DegenerateCapacitanceError("capacitance matrix is singular after condensation") from None
    w2 = np.clip(w2, 0.0, None)
    return InnerSpectrum(tuple(np.sort(np.sqrt(w2))))


def _scaled_condition(m: np.ndarray) -> float:
    d = np.sqrt(np.abs(np.diag(m)))
    d[d == 0] = 1.0
    return float(np.linalg.cond(m / d[:, None] / d[None, :]))


def nearest_pole(nm: NodeMatrices, omega: float) -> Optional[float]:
    if nm.poles.size == 0:
        return None
    return float(nm.poles[np.argmin(np.abs(nm.poles - omega))])


def impedance_solve(nm: NodeMatrices, omega: float, rhs: np.ndarray) -> np.ndarray:
    """Solve (L̃ − ω²C̃)x = rhs with pole and conditioning checks."""
    pole = nearest_pole(nm, omega)
    if pole is not None and abs(omega - pole) <= POLE_GUARD * max(pole, abs(omega)):
        raise NearPoleError(omega, pole)
    m = nm.ltilde - omega**2 * nm.ctilde
    cond = _scaled_condition(m)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        if pole is not None:
            raise NearPoleError(omega, pole)
        raise IllConditionedError(f"L - w^2 C has condition number {cond:.3g} at w = {omega:.6g}")
    return sla.solve(m, rhs, assume_a="sym")


def port_block(nm: NodeMatrices, omega: float) -> np.ndarray:
    """2x2 block [[Z_ii, Z_io], [Z_oi, Z_oo]] of (L̃ − ω²C̃)⁻¹; ground ports give zero rows."""
    n = nm.size
    rhs = np.zeros((n, 2))
    if nm.idx_in is not None:
        rhs[nm.idx_in, 0] = 1.0
    if nm.idx_out is not None:
        rhs[nm.idx_out, 1] = 1.0
    x = impedance_solve(nm, omega, rhs) if n else np.zeros((0, 2))
    z = np.zeros((2, 2))
    for r, idx in enumerate((nm.idx_in, nm.idx_out)):
        if idx is not None:
            z[r] = x[idx]
    return z


def response(nm: NodeMatrices, omega: float) -> float:
    """Flux drop per unit through-current, D(ω) = Z_ii − Z_io − Z_oi + Z_oo (henry)."""
    z = port_block(nm, omega)
    return float(z[0, 0] - z[0, 1] - z[1, 0] + z[1, 1])


def port_block_many(nm: NodeMatrices, omegas: Sequence[float]) -> np.ndarray:
    """Vectorized port block for scanning; no pole checks (callers exclude guard bands)."""
    w = np.asarray(omegas, dtype=float)
    n = nm.size
    out = np.zeros((w.size, 2, 2))
    if n == 0:
        return out
    m = nm.ltilde[None] - (w**2)[:, None, None] * nm.ctilde[None]
    rhs = np.zeros((n, 2))
    if nm.idx_in is not None:
        rhs[nm.idx_in, 0] = 1.0
    if nm.idx_out is not None:
        rhs[nm.idx_out, 1] = 1.0
    with np.errstate(all="ignore"):
        try:
            x = np.linalg.solve(m, np.broadcast_to(rhs, (w.size, n, 2)))
        except np.linalg.LinAlgError:
            x = np.stack([np.linalg.lstsq(mi, rhs, rcond=None)[0] for mi in m])
    for r, idx in enumerate((nm.idx_in, nm.idx_out)):
        if idx is not None:
            out[:, r, :] = x[:, idx, :]
    return out


def response_many(nm: NodeMatrices, omegas: Sequence[float]) -> np.ndarray:
    z = port_block_many(nm, omegas)
    return z[:, 0, 0] - z[:, 0, 1] - z[:, 1, 0] + z[:, 1, 1]
