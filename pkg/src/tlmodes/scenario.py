"""Scenario files: ``key=value`` lines with ``#`` comments.

Frequencies are ordinary frequencies in Hz; the library works in rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple

from .errors import NetlistSyntaxError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Scenario:
    netlist_path: str
    z0: float = 50.0
    v: float = 1.2e8
    length: Optional[float] = None
    target_f1: Optional[float] = None
    x_frac: float = 0.5
    f_min: float = 0.5e9
    f_max: float = 12e9
    grid: int = 2000
    mode: int = 3
    qubit_targets: Tuple[float, ...] = ()
    qubit_grid: int = 64
    qubits: int = 2
    cutoff: int = 12
    eta: float = 1.0
    reference: str = "label"
    sweep: Optional[str] = None
    sweep_start: float = 0.0
    sweep_stop: float = 1.0
    sweep_steps: int = 0
    oracle_cells: int = 10000
    output: Optional[str] = None
    base_dir: str = field(default=".", compare=False)

    def resolve_netlist(self) -> str:
        p = Path(self.netlist_path)
        if not p.is_absolute():
            p = Path(self.base_dir) / p
        if p.exists():
            return p.read_text(encoding="utf-8")
        data = resources.files("tlmodes").joinpath("data", self.netlist_path)
        if data.is_file():
            return data.read_text(encoding="utf-8")
        raise FileNotFoundError(f"netlist {self.netlist_path!r} not found")

    def sweep_values(self) -> Tuple[float, ...]:
        if self.sweep_steps < 1:
            return ()
        if self.sweep_steps == 1:
            return (self.sweep_start,)
        d = (self.sweep_stop - self.sweep_start) / (self.sweep_steps - 1)
        return tuple(self.sweep_start + i * d for i in range(self.sweep_steps))


_FLOATS = {"z0", "v", "length", "target_f1", "x_frac", "f_min", "f_max", "eta", "sweep_start", "sweep_stop"}
_INTS = {"grid", "mode", "qubit_grid", "qubits", "cutoff", "sweep_steps", "oracle_cells"}
_STRINGS = {"netlist": "netlist_path", "reference": "reference", "sweep": "sweep", "output": "output"}


def parse_scenario(text: str, base_dir: str = ".") -> Scenario:
    kw: Dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = (s.strip() for s in line.partition("="))
        if not sep or not val:
            raise NetlistSyntaxError(lineno, f"expected key=value, got {line!r}")
        try:
            if key in _FLOATS:
                kw[key] = float(val)
            elif key in _INTS:
                kw[key] = int(val)
            elif key == "qubit_targets":
                kw[key] = tuple(float(t) for t in val.split(","))
            elif key in _STRINGS:
                kw[_STRINGS[key]] = val
            else:
                raise NetlistSyntaxError(lineno, f"unknown scenario key {key!r}")
        except ValueError:
            raise NetlistSyntaxError(lineno, f"malformed value for {key}: {val!r}") from None
    if "netlist_path" not in kw:
        raise NetlistSyntaxError(0, "scenario needs a netlist entry")
    if kw.get("length") is None and kw.get("target_f1") is None:
        raise NetlistSyntaxError(0, "scenario needs either length or target_f1")
    if kw.get("sweep") not in (None, "eta", "flux", "shunt"):
        raise NetlistSyntaxError(0, "sweep must be eta, flux or shunt")
    if kw.get("reference", "label") not in ("label", "ground"):
        raise NetlistSyntaxError(0, "reference must be label or ground")
    if kw.get("qubits", 2) not in (1, 2):
        raise NetlistSyntaxError(0, "qubits must be 1 or 2")
    return Scenario(base_dir=base_dir, **kw)


def load_scenario(path_or_name: str) -> Scenario:
    """Load a scenario file, or a packaged scenario by bare name (e.g. ``twoqubit``)."""
    p = Path(path_or_name)
    if p.exists():
        return parse_scenario(p.read_text(encoding="utf-8"), str(p.parent))
    data = resources.files("tlmodes").joinpath("data", f"{path_or_name}.scn")
    if data.is_file():
        return parse_scenario(data.read_text(encoding="utf-8"), ".")
    raise FileNotFoundError(f"scenario {path_or_name!r} not found")
