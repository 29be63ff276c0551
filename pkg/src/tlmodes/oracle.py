"""Brute-force reference solvers used to validate the main pipeline.

Nothing here reuses the mode, Kerr or dressed-state solvers; only the netlist
data structures and physical constants are shared.

* :func:`discretize_and_solve` replaces the line by ``cells`` lumped LC
  sections, splices the inner circuit in and solves the resulting sparse
  generalized eigenproblem.
* :func:`quartic_fock_diagonalize` diagonalizes ħωa†a minus the quartic
  Josephson term without any rotating-wave truncation.
* :func:`first_order_ladder` and :func:`perturbative_kerr` give
  perturbative values for cross-Kerr and dressed Kerr constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .constants import HBAR, PHI0, REDUCED_PHI0, ej_from_hz
from .netlist import Capacitor, CircuitNetlist, Inductor, Junction


@dataclass(frozen=True)
class DiscretizedSystem:
    cells: int
    ctilde_big: sp.csr_matrix
    ltilde_big: sp.csr_matrix
    positions: np.ndarray  # x of each line node (the splice appears twice)
    splice: Tuple[int, int]  # global indices of the line nodes left/right of x_c
    inner_nodes: Dict[str, int]


@dataclass(frozen=True)
class DiscretizedModes:
    frequencies: np.ndarray  # rad/s
    vectors: np.ndarray  # columns, global node fluxes
    system: DiscretizedSystem


def build_discretized(tl, net: CircuitNetlist, cells: int) -> DiscretizedSystem:
    """Assemble the lumped-line model; ``tl`` needs l0, c0, length and x_c."""
    if cells < 100:
        raise ValueError("need at least 100 cells")
    dx = tl.length / cells
    jc = int(round(tl.x_c / dx))
    if not 0 < jc < cells:
        raise ValueError("insertion point falls on the line end for this cell count")
    # line nodes 0..jc (left) and jc+1..cells+1 (right; node jc+1 sits at x_c too)
    n_line = cells + 2
    positions = np.concatenate([np.arange(jc + 1) * dx, np.arange(jc, cells + 1) * dx])
    left, right = jc, jc + 1

    floating = net.ground in (net.port_in, net.port_out)
    index: Dict[str, int] = {net.port_in: left, net.port_out: right}
    nxt = n_line
    for node in net.nodes:
        if node in index:
            continue
        if node == net.ground and not floating:
            continue  # true ground
        index[node] = nxt
        nxt += 1
    size = nxt

    rows, cols, lv, cv = [], [], [], []

    def stamp(i: Optional[int], j: Optional[int], inv_l: float, cap: float) -> None:
        for a, b, s in ((i, i, 1.0), (j, j, 1.0), (i, j, -1.0), (j, i, -1.0)):
            if a is None or b is None:
                continue
            rows.append(a)
            cols.append(b)
            lv.append(s * inv_l)
            cv.append(s * cap)

    for seg_start, seg_end in ((0, left), (right, n_line - 1)):
        for i in range(seg_start, seg_end):
            stamp(i, i + 1, 1.0 / (tl.l0 * dx), 0.0)
        for i in range(seg_start, seg_end + 1):
            w = 0.5 if i in (seg_start, seg_end) else 1.0
            stamp(i, None, 0.0, w * tl.c0 * dx)

    for b in net.branches:
        k = b.kind
        inv_l = cap = 0.0
        if isinstance(k, Capacitor):
            cap = k.c
        elif isinstance(k, Inductor):
            inv_l = 1.0 / k.l
        elif isinstance(k, Junction):
            inv_l = ej_from_hz(k.ej) / REDUCED_PHI0**2
            cap = k.cj
        stamp(index.get(b.node_plus), index.get(b.node_minus), inv_l, cap)

    lmat = sp.csr_matrix((lv, (rows, cols)), shape=(size, size))
    cmat = sp.csr_matrix((cv, (rows, cols)), shape=(size, size))
    inner = {n: i for n, i in index.items() if i >= n_line}
    return DiscretizedSystem(cells, cmat, lmat, positions, (left, right), inner)


def discretize_and_solve(tl, net: CircuitNetlist, cells: int, n_modes: int = 4) -> DiscretizedModes:
    """Lowest ``n_modes`` nonzero eigenfrequencies of the discretized system."""
    sysm = build_discretized(tl, net, cells)
    v = 1.0 / math.sqrt(tl.l0 * tl.c0)
    w_ref = math.pi * v / tl.length
    sigma = (0.3 * w_ref) ** 2
    k = n_modes + 2
    v0 = np.ones(sysm.ltilde_big.shape[0])
    w2, vecs = spla.eigsh(sysm.ltilde_big, k=k, M=sysm.ctilde_big, sigma=sigma, which="LM", v0=v0)
    order = np.argsort(w2)
    w2, vecs = w2[order], vecs[:, order]
    # the uniform-flux zero mode comes back with round-off of order 1e-5 w_ref
    keep = w2 > (1e-2 * w_ref) ** 2
    w = np.sqrt(w2[keep])[:n_modes]
    return DiscretizedModes(w, vecs[:, keep][:, :n_modes], sysm)


def richardson_frequencies(tl, net: CircuitNetlist, cells: int = 10000, n_modes: int = 4) -> np.ndarray:
    """Second-order Richardson extrapolation from ``cells/2`` and ``cells`` sections."""
    coarse = discretize_and_solve(tl, net, cells // 2, n_modes).frequencies
    fine = discretize_and_solve(tl, net, cells, n_modes).frequencies
    n = min(len(coarse), len(fine))
    return (4.0 * fine[:n] - coarse[:n]) / 3.0


def splice_jump(modes: DiscretizedModes, m: int, tl) -> Tuple[float, float]:
    """Flux jump across the insertion and the line current just left of it for mode ``m``."""
    sysm = modes.system
    x = modes.vectors[:, m]
    left, right = sysm.splice
    dx = tl.length / sysm.cells
    jump = x[right] - x[left]
    current = -(x[left] - x[left - 1]) / (tl.l0 * dx)
    return float(jump), float(current)


# ---------------------------------------------------------------------------
# quartic single-mode ladder


def _x_operator(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    return a + a.T


def quartic_fock_diagonalize(
    omega: float,
    ej,
    delta_u,
    c_sigma: float,
    cutoff: int = 40,
    levels: int = 6,
) -> np.ndarray:
    """Ladder energies (joule) of ħωa†a − (2π⁴/3Φ₀⁴) Σ E_J δ̂⁴.

    ``ej`` (joule) and ``delta_u`` may be scalars or matching sequences for
    several junctions. Returned level n is the eigenstate with the largest
    overlap with Fock state n.
    """
    if cutoff < 30:
        raise ValueError("cutoff must be at least 30")
    ej = np.atleast_1d(np.asarray(ej, dtype=float))
    du = np.atleast_1d(np.asarray(delta_u, dtype=float))
    zpf = math.sqrt(HBAR / (2.0 * c_sigma * omega))
    scale = HBAR * omega
    # build X in a larger basis so X⁴ is exact inside the truncated space
    big = _x_operator(cutoff + 1 + 4)
    x4 = np.linalg.matrix_power(big, 4)[: cutoff + 1, : cutoff + 1]
    strength = (2.0 * math.pi**4 / 3.0) * np.sum(ej * du**4) * zpf**4 / PHI0**4
    h = np.diag(np.arange(cutoff + 1, dtype=float)) - (strength / scale) * x4
    w, v = np.linalg.eigh(h)
    out = []
    for n in range(levels):
        out.append(w[int(np.argmax(np.abs(v[n]) ** 2))])
    return np.array(out) * scale


def ladder_kerr(energies: np.ndarray) -> float:
    """(E₂ − 2E₁ + E₀)/ħ."""
    return float((energies[2] - 2 * energies[1] + energies[0]) / HBAR)


def first_order_ladder(
    omegas: Sequence[float], ej: Sequence[float], delta_u: np.ndarray, c_sigma: float, dim: int = 6
) -> np.ndarray:
    """First-order quartic energies E(n₁, n₂)/ħ for two modes, from explicit Fock matrices.

    ``delta_u`` has shape (2, junctions). Returns a (dim, dim) table.
    """
    x = _x_operator(dim + 4)
    eye = np.eye(dim + 4)
    x1, x2 = np.kron(x, eye), np.kron(eye, x)
    zp = [math.sqrt(HBAR / (2.0 * c_sigma * w)) for w in omegas]
    total = np.zeros_like(x1)
    for i, e in enumerate(ej):
        d = (zp[0] * delta_u[0][i] * x1 + zp[1] * delta_u[1][i] * x2) / PHI0
        d2 = d @ d
        total -= (2.0 * math.pi**4 / 3.0) * e * (d2 @ d2)
    diag = np.diag(total).reshape(dim + 4, dim + 4)[:dim, :dim]
    return diag / HBAR


def cross_kerr_first_order(omegas, ej, delta_u, c_sigma: float) -> float:
    """Coefficient of n₁n₂ in the first-order quartic energy (rad/s)."""
    e = first_order_ladder(omegas, ej, np.asarray(delta_u), c_sigma, dim=4)
    return float(e[1, 1] - e[1, 0] - e[0, 1] + e[0, 0])


# ---------------------------------------------------------------------------
# perturbative dressed Kerr


def _coupled_hamiltonian(omega3, k33, w1, w2, g1, g2, g12, cutoff):
    n = np.arange(cutoff + 1, dtype=float)
    a = np.diag(np.sqrt(n[1:]), 1)
    x = a + a.T
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sz = np.diag([1.0, -1.0])
    i2, ef = np.eye(2), np.eye(cutoff + 1)
    h0 = (
        np.kron(np.kron(np.diag(omega3 * n + 0.5 * k33 * n**2), i2), i2)
        + 0.5 * w1 * np.kron(np.kron(ef, sz), i2)
        + 0.5 * w2 * np.kron(np.kron(ef, i2), sz)
    )
    v = g1 * np.kron(np.kron(x, sx), i2) + g2 * np.kron(np.kron(x, i2), sx) - g12 * np.kron(np.kron(ef, sx), sx)
    return np.diag(h0), v


def rayleigh_schrodinger(e0: np.ndarray, v: np.ndarray, state: int) -> float:
    """Non-degenerate perturbation theory through fourth order for one level."""
    d = e0[state] - e0
    others = np.arange(e0.size) != state
    inv = np.zeros_like(d)
    inv[others] = 1.0 / d[others]
    vn = v[:, state] * inv  # V_kn / (E_n − E_k)
    vnn = v[state, state]
    e1 = vnn
    e2 = float(v[state] @ vn)
    t = v @ vn  # Σ_m V_km V_mn /(E_n − E_m)
    t[state] = 0.0
    e3 = float(vn @ t) - vnn * float(vn @ vn)
    u = v @ (inv * t)
    e4 = (
        float(vn @ u)
        - e2 * float(vn @ vn)
        - 2.0 * vnn * float((vn * inv) @ t)
        + vnn**2 * float(vn @ (vn * inv))
    )
    return e0[state] + e1 + e2 + e3 + e4


def perturbative_kerr(omega3, k33, w1, w2, g1, g2, g12, cutoff: int = 12, reference: int = 0) -> float:
    """Fourth-order dressed Kerr (E₂ − 2E₁ + E₀)/ħ with the qubits in basis state ``reference``."""
    e0, v = _coupled_hamiltonian(omega3, k33, w1, w2, g1, g2, g12, cutoff)
    e = [rayleigh_schrodinger(e0, v, n * 4 + 3 * reference) for n in range(3)]
    return e[2] - 2 * e[1] + e[0]
