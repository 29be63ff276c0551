"""End-to-end pipeline: netlist -> modes -> Kerr -> qubits -> dressed Kerr."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .constants import HBAR
from .effective import CoupledSpec, EffectiveKerr, effective_kerr
from .fluxqubit import (
    FluxQubitSpec,
    PhaseGrid,
    QubitSolution,
    calibrate_shunt,
    coupling_g,
    qubit_qubit_coupling,
    solve,
    with_shunt_scale,
)
from .lumped import NodeMatrices, node_matrices
from .netlist import CircuitNetlist, FluxLoopDecl, chain_endpoints, parse_netlist
from .quantize import KerrMatrix, QuantizedMode, kerr_matrix
from .resonator import ModeSearchConfig, NormalMode, TransmissionLine, calibrate_length, find_modes
from .scenario import TWO_PI, Scenario


def parallel_map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    """Order-preserving map, optionally on a thread pool."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def chain_drop(mode: NormalMode, nm: NodeMatrices, net: CircuitNetlist, loop: FluxLoopDecl) -> float:
    """Mode flux drop across a qubit's junction chain, end minus start."""
    start, end = chain_endpoints(net, loop)

    def flux(node: str) -> float:
        col = nm.incidence.column(node)
        return 0.0 if col is None else float(mode.node_flux[col])

    return flux(end) - flux(start)


@dataclass(frozen=True)
class ResonatorModel:
    net: CircuitNetlist
    nm: NodeMatrices
    tl: TransmissionLine
    modes: Tuple[NormalMode, ...]
    kerr: KerrMatrix


def solve_resonator(scn: Scenario) -> ResonatorModel:
    net = parse_netlist(scn.resolve_netlist())
    nm = node_matrices(net)
    length = scn.length if scn.length is not None else np.pi * scn.v / (TWO_PI * scn.target_f1)
    tl = TransmissionLine.from_impedance(scn.z0, scn.v, length, scn.x_frac)
    if scn.target_f1 is not None:
        tl = calibrate_length(tl, nm, TWO_PI * scn.target_f1, grid_points=scn.grid)
    cfg = ModeSearchConfig(TWO_PI * scn.f_min, TWO_PI * scn.f_max, scn.grid)
    modes = tuple(find_modes(tl, nm, cfg))
    return ResonatorModel(net, nm, tl, modes, kerr_matrix(modes, nm.lin))


@dataclass(frozen=True)
class QubitModel:
    loop: FluxLoopDecl
    base: FluxQubitSpec  # shunt as declared in the netlist
    spec: FluxQubitSpec  # after optional calibration
    solution: QubitSolution


def solve_qubits(scn: Scenario, net: CircuitNetlist, grid: Optional[int] = None) -> Tuple[QubitModel, ...]:
    pg = PhaseGrid(grid or scn.qubit_grid)
    out = []
    for i, loop in enumerate(net.flux_loops):
        base = FluxQubitSpec.from_loop(net, loop)
        spec = base
        if i < len(scn.qubit_targets):
            cs = calibrate_shunt(base, TWO_PI * scn.qubit_targets[i], pg)
            spec = with_shunt_scale(base, cs / base.cs_minus)
        out.append(QubitModel(loop, base, spec, solve(spec, pg)))
    return tuple(out)


@dataclass(frozen=True)
class CoupledModel:
    resonator: ResonatorModel
    qubits: Tuple[QubitModel, ...]
    mode_index: int  # zero-based
    g: Tuple[float, ...]  # rad/s per qubit
    g12: float  # rad/s, signed
    spec: CoupledSpec
    result: EffectiveKerr

    @property
    def mode(self) -> NormalMode:
        return self.resonator.modes[self.mode_index]


def couple(
    res: ResonatorModel,
    qubits: Sequence[QubitModel],
    mode_number: int,
    n_active: int = 2,
    eta: float = 1.0,
    cutoff: int = 12,
    reference: str = "label",
) -> CoupledModel:
    idx = mode_number - 1
    if not 0 <= idx < len(res.modes):
        raise IndexError(f"mode {mode_number} not among the {len(res.modes)} modes found")
    mode = res.modes[idx]
    qm = QuantizedMode.from_mode(mode)
    if len(qubits) < 2:
        raise ValueError("the coupled model needs two flux loops in the netlist")
    g = []
    for i, q in enumerate(qubits[:2]):
        du = chain_drop(mode, res.nm, res.net, q.loop)
        g.append(coupling_g(qm.zero_point_flux, q.spec, q.solution, du) if i < n_active else 0.0)
    g12 = 0.0
    if n_active == 2:
        q1, q2 = qubits[0], qubits[1]
        sign = q1.loop.coupling_sign * q2.loop.coupling_sign
        g12 = eta * qubit_qubit_coupling(q1.solution, q1.spec, q2.solution, q2.spec, q1.loop.lc, sign) / HBAR
    spec = CoupledSpec(
        omega3=mode.omega,
        k33=float(res.kerr.k_self[idx]),
        omega10_1=qubits[0].solution.omega10,
        omega10_2=qubits[1].solution.omega10,
        g3_1=g[0],
        g3_2=g[1],
        g12=g12,
        fock_cutoff=cutoff,
    )
    return CoupledModel(res, tuple(qubits), idx, tuple(g), g12, spec, effective_kerr(spec, reference))


def build_coupled(scn: Scenario, grid: Optional[int] = None, cutoff: Optional[int] = None) -> CoupledModel:
    res = solve_resonator(scn)
    qubits = solve_qubits(scn, res.net, grid)
    return couple(res, qubits, scn.mode, scn.qubits, scn.eta, cutoff or scn.cutoff, scn.reference)


def sweep_flux(
    model: CoupledModel,
    phi_values: Sequence[float],
    n_active: int = 2,
    eta: float = 1.0,
    reference: str = "label",
    grid: int = 64,
    threads: int = 1,
) -> List[Tuple[float, float]]:
    """K̃/ω at each external flux (Φ₀ units), shunts held at their calibrated values."""
    pg = PhaseGrid(grid)

    def point(phi: float) -> Tuple[float, float]:
        qs = []
        for q in model.qubits:
            spec = replace(q.spec, phi_ext=phi)
            qs.append(replace(q, spec=spec, solution=solve(spec, pg)))
        cm = couple(model.resonator, qs, model.mode_index + 1, n_active, eta, model.spec.fock_cutoff, reference)
        return float(phi), cm.result.k_tilde / cm.spec.omega3

    return parallel_map(point, list(phi_values), threads)


def sweep_shunt(
    qubit: QubitModel, scales: Sequence[float], grid: int = 64, threads: int = 1
) -> List[Tuple[float, float]]:
    """(C_S/C_S0, ω₁₀/2π in Hz) relative to the shunt declared in the netlist."""
    pg = PhaseGrid(grid)

    def point(s: float) -> Tuple[float, float]:
        return float(s), solve(with_shunt_scale(qubit.base, s), pg).omega10 / TWO_PI

    return parallel_map(point, list(scales), threads)
