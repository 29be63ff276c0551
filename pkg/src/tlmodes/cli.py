"""Command-line driver: ``tlmodes <command> --scenario <file|name>``.

Exit codes: 0 success, 2 usage or input error, 3 solver error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import oracle
from .effective import sweep_eta
from .errors import NetlistError, SolverError
from .netlist import parse_netlist
from .quantize import junction_pairs, kerr_self
from .scenario import TWO_PI, Scenario, load_scenario
from .system import build_coupled, parallel_map, solve_qubits, solve_resonator, sweep_flux, sweep_shunt

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 2, 3


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) or isinstance(x, str):
        return str(x)
    return f"{float(x):.12g}"


class Table:
    def __init__(self, header: Sequence[str], comments: Sequence[str] = ()):
        self.header = list(header)
        self.comments = list(comments)
        self.rows: List[List[str]] = []

    def add(self, *values) -> None:
        self.rows.append([_fmt(v) for v in values])

    def render(self) -> str:
        buf = io.StringIO()
        for c in self.comments:
            buf.write(f"# {c}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


def cmd_modes(scn: Scenario, args) -> Table:
    res = solve_resonator(scn)
    lin = res.nm.lin
    t = Table(
        ["index", "freq_hz", "c_sigma_F", "l_sigma_H"] + [f"du_{j}" for j in lin.junction_index],
        [f"length_m={_fmt(res.tl.length)}", f"x_c_m={_fmt(res.tl.x_c)}"],
    )
    for i, m in enumerate(res.modes, start=1):
        t.add(i, m.omega / TWO_PI, m.c_sigma, m.l_sigma, *m.delta_u)
    return t


def cmd_kerr(scn: Scenario, args) -> Table:
    res = solve_resonator(scn)
    km = res.kerr
    t = Table(["m", "n", "k_mn_over_omega_m", "k_mn_rad_per_s"], [f"length_m={_fmt(res.tl.length)}"])
    for i in range(len(km.omegas)):
        for j in range(len(km.omegas)):
            t.add(i + 1, j + 1, km.k_cross[i, j] / km.omegas[i], km.k_cross[i, j])
    return t


def cmd_qubit(scn: Scenario, args) -> Table:
    net = parse_netlist(scn.resolve_netlist())
    qubits = solve_qubits(scn, net, args.grid)
    t = Table(
        ["loop", "omega10_hz", "s01", "p01", "cs_minus_F", "cs_plus_F", "cs_over_cs0", "e2_minus_e1_over_e1_minus_e0"]
    )
    for q in qubits:
        t.add(
            q.loop.id,
            q.solution.omega10 / TWO_PI,
            q.solution.s01,
            q.solution.p01,
            q.spec.cs_minus,
            q.spec.cs_plus,
            q.spec.cs_minus / q.base.cs_minus if q.base.cs_minus else float("nan"),
            q.solution.anharmonic_ratio,
        )
    return t


def cmd_coupled(scn: Scenario, args) -> Table:
    cm = build_coupled(scn, args.grid, args.cutoff)
    s, r = cm.spec, cm.result
    t = Table(
        [
            "omega_tilde3_hz",
            "k_tilde33_rad_per_s",
            "k_tilde33_over_omega3",
            "g3_1_hz",
            "g3_2_hz",
            "g12_hz",
            "omega10_1_hz",
            "omega10_2_hz",
        ],
        [
            f"omega3_hz={_fmt(s.omega3 / TWO_PI)}",
            f"k33_over_omega3={_fmt(s.k33 / s.omega3)}",
            f"qubits={scn.qubits}",
            f"eta={_fmt(scn.eta)}",
            f"reference={scn.reference}",
            f"k_tilde_upper_over_omega3={_fmt(r.k_tilde_upper / s.omega3)}",
        ],
    )
    t.add(
        r.omega_tilde / TWO_PI,
        r.k_tilde,
        r.k_tilde / s.omega3,
        s.g3_1 / TWO_PI,
        s.g3_2 / TWO_PI,
        s.g12 / TWO_PI,
        s.omega10_1 / TWO_PI,
        s.omega10_2 / TWO_PI,
    )
    return t


def cmd_sweep(scn: Scenario, args) -> Table:
    values = scn.sweep_values()
    if scn.sweep is None or not values:
        raise UsageError("scenario defines no sweep or an empty sweep range")
    if scn.sweep == "shunt":
        res = solve_resonator(scn)
        qubits = solve_qubits(replace(scn, qubit_targets=()), res.net, args.grid)
        t = Table(["cs_over_cs0", "omega10_hz"], [f"loop={qubits[0].loop.id}"])
        for row in sweep_shunt(qubits[0], values, args.grid or scn.qubit_grid, args.threads):
            t.add(*row)
        return t
    base = build_coupled(replace(scn, eta=1.0), args.grid, args.cutoff)
    if scn.sweep == "eta":
        t = Table(["eta", "k_tilde33_over_omega3"], [f"qubits={scn.qubits}"])
        points = parallel_map(lambda e: sweep_eta(base.spec, [e], scn.reference)[0], list(values), args.threads)
    else:
        t = Table(["phi_ext_phi0", "k_tilde33_over_omega3"], [f"qubits={scn.qubits}"])
        points = sweep_flux(
            base, values, scn.qubits, scn.eta, scn.reference, args.grid or scn.qubit_grid, args.threads
        )
    for row in points:
        t.add(*row)
    return t


def cmd_oracle_check(scn: Scenario, args) -> Table:
    res = solve_resonator(scn)
    t = Table(["check", "value", "tolerance", "status"])
    n = len(res.modes)
    ref = oracle.richardson_frequencies(res.tl, res.net, scn.oracle_cells, n)
    for i, m in enumerate(res.modes[: len(ref)]):
        dev = abs(m.omega / ref[i] - 1.0)
        t.add(f"mode{i + 1}_frequency_rel", dev, 1e-4, "pass" if dev <= 1e-4 else "fail")
    lin = res.nm.lin
    for i, m in enumerate(res.modes):
        pairs = junction_pairs(m, lin)
        k = kerr_self(m, pairs)
        if not pairs or abs(k) < 1e-15 * m.omega:
            continue  # mode without junction participation
        e = oracle.quartic_fock_diagonalize(m.omega, [p[0] for p in pairs], [p[1] for p in pairs], m.c_sigma)
        ko = oracle.ladder_kerr(e)
        dev = abs(k / ko - 1.0)
        t.add(f"mode{i + 1}_kerr_rel", dev, 0.05, "pass" if dev <= 0.05 else "fail")
    return t


COMMANDS: Dict[str, Callable] = {
    "modes": cmd_modes,
    "kerr": cmd_kerr,
    "qubit": cmd_qubit,
    "coupled": cmd_coupled,
    "sweep": cmd_sweep,
    "oracle-check": cmd_oracle_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tlmodes", description="Normal modes and Kerr constants of a resonator with an embedded circuit."
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--scenario", required=True, help="scenario file, or the name of a packaged scenario")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--grid", type=int, help="qubit phase-grid points per axis")
    p.add_argument("--cutoff", type=int, help="Fock cutoff of the dressed-state model")
    p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        scn = load_scenario(args.scenario)
        table = COMMANDS[args.command](scn, args)
    except (NetlistError, FileNotFoundError, UsageError, ValueError) as exc:
        print(f"tlmodes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"tlmodes: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    text = table.render()
    out = args.out or scn.output
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
