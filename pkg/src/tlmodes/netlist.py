"""Line-oriented circuit netlists, spanning trees and incidence matrices.

Grammar (``#`` starts a comment, tokens are whitespace separated)::

    ground <node>
    port_in <node>
    port_out <node>
    nodes <node> <node> ...          # optional; fixes node order, enables undeclared-node checks
    C  <id> <node+> <node-> <farad>
    L  <id> <node+> <node-> <henry>
    JJ <id> <node+> <node-> ej=<hertz> cj=<farad>
    fluxloop <id> branches=<j1>,<ja>,<j3> ext=<phi0> sign=<+1|-1> \
             cs_minus=<farad> cs_plus=<farad> lc=<henry>

Junction energies are given as ordinary frequencies E_J/h.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DuplicateIdError,
    MissingDeclarationError,
    NetlistSyntaxError,
    UnknownNodeError,
)


@dataclass(frozen=True)
class Capacitor:
    c: float


@dataclass(frozen=True)
class Inductor:
    l: float


@dataclass(frozen=True)
class Junction:
    ej: float  # E_J / h in Hz
    cj: float = 0.0


ElementKind = Union[Capacitor, Inductor, Junction]


@dataclass(frozen=True)
class Branch:
    id: str
    node_plus: str
    node_minus: str
    kind: ElementKind

    @property
    def is_junction(self) -> bool:
        return isinstance(self.kind, Junction)


@dataclass(frozen=True)
class FluxLoopDecl:
    id: str
    branch_ids: Tuple[str, str, str]
    phi_ext: float
    coupling_sign: int
    shunt_cap_minus: float
    shunt_cap_plus: float
    lc: float = 0.0

    @property
    def alpha_branch(self) -> str:
        return self.branch_ids[1]


@dataclass(frozen=True)
class CircuitNetlist:
    nodes: Tuple[str, ...]
    branches: Tuple[Branch, ...]
    ground: str
    port_in: str
    port_out: str
    flux_loops: Tuple[FluxLoopDecl, ...] = ()

    def branch(self, branch_id: str) -> Branch:
        for b in self.branches:
            if b.id == branch_id:
                return b
        raise KeyError(branch_id)

    def loop(self, loop_id: str) -> FluxLoopDecl:
        for lp in self.flux_loops:
            if lp.id == loop_id:
                return lp
        raise KeyError(loop_id)

    @property
    def non_ground_nodes(self) -> Tuple[str, ...]:
        return tuple(n for n in self.nodes if n != self.ground)

    @property
    def junctions(self) -> Tuple[Branch, ...]:
        return tuple(b for b in self.branches if b.is_junction)

    @property
    def floating(self) -> bool:
        """True when the ground node is one of the ports (inline circuit without a shunt path)."""
        return self.ground in (self.port_in, self.port_out)


# ---------------------------------------------------------------------------
# parsing


def _number(tok: str, lineno: int, what: str) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise NetlistSyntaxError(lineno, f"malformed number for {what}: {tok!r}") from None
    if not math.isfinite(val):
        raise NetlistSyntaxError(lineno, f"non-finite value for {what}: {tok!r}")
    return val


def _keywords(tokens: Sequence[str], lineno: int, required: Sequence[str]) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or not val:
            raise NetlistSyntaxError(lineno, f"expected key=value, got {tok!r}")
        if key in out:
            raise NetlistSyntaxError(lineno, f"repeated key {key!r}")
        out[key] = val
    unknown = set(out) - set(required)
    if unknown:
        raise NetlistSyntaxError(lineno, f"unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in out]
    if missing:
        raise NetlistSyntaxError(lineno, f"missing keys {missing}")
    return out


def _strip(line: str) -> List[str]:
    return line.split("#", 1)[0].split()


def parse_netlist(text: str) -> CircuitNetlist:
    """Parse netlist text into a validated :class:`CircuitNetlist`.

    Branch order follows file order. Raises subclasses of
    :class:`~tlmodes.errors.NetlistError` on any problem.
    """
    singles: Dict[str, Tuple[str, int]] = {}
    declared: Optional[List[str]] = None
    branches: List[Branch] = []
    loops: List[Tuple[FluxLoopDecl, int]] = []
    seen_ids: Dict[str, int] = {}
    node_order: List[str] = []

    def claim(ident: str, lineno: int) -> None:
        if ident in seen_ids:
            raise DuplicateIdError(f"line {lineno}: id {ident!r} already used on line {seen_ids[ident]}")
        seen_ids[ident] = lineno

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _strip(raw)
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]
        if head in ("ground", "port_in", "port_out"):
            if len(args) != 1:
                raise NetlistSyntaxError(lineno, f"{head} takes exactly one node")
            if head in singles:
                raise NetlistSyntaxError(lineno, f"{head} declared twice")
            singles[head] = (args[0], lineno)
        elif head == "nodes":
            if not args:
                raise NetlistSyntaxError(lineno, "nodes needs at least one node id")
            declared = (declared or []) + args
        elif head in ("C", "L", "JJ"):
            if len(args) < 3:
                raise NetlistSyntaxError(lineno, f"{head} needs <id> <node+> <node-> and a value")
            ident, npl, nmi = args[:3]
            if npl == nmi:
                raise NetlistSyntaxError(lineno, f"branch {ident!r} connects node {npl!r} to itself")
            if head == "JJ":
                kw = _keywords(args[3:], lineno, ("ej", "cj"))
                ej = _number(kw["ej"], lineno, "ej")
                cj = _number(kw["cj"], lineno, "cj")
                if ej <= 0 or cj < 0:
                    raise NetlistSyntaxError(lineno, "junction needs ej > 0 and cj >= 0")
                kind: ElementKind = Junction(ej, cj)
            else:
                if len(args) != 4:
                    raise NetlistSyntaxError(lineno, f"{head} takes exactly one value")
                val = _number(args[3], lineno, head)
                if val <= 0:
                    raise NetlistSyntaxError(lineno, f"{head} value must be positive")
                kind = Capacitor(val) if head == "C" else Inductor(val)
            claim(ident, lineno)
            for n in (npl, nmi):
                if n not in node_order:
                    node_order.append(n)
            branches.append(Branch(ident, npl, nmi, kind))
        elif head == "fluxloop":
            if not args:
                raise NetlistSyntaxError(lineno, "fluxloop needs an id")
            ident = args[0]
            kw = _keywords(args[1:], lineno, ("branches", "ext", "sign", "cs_minus", "cs_plus", "lc"))
            ids = tuple(kw["branches"].split(","))
            if len(ids) != 3 or not all(ids):
                raise NetlistSyntaxError(lineno, "fluxloop needs exactly three branch ids")
            sign = _number(kw["sign"], lineno, "sign")
            if sign not in (1.0, -1.0):
                raise NetlistSyntaxError(lineno, "sign must be +1 or -1")
            cs_m = _number(kw["cs_minus"], lineno, "cs_minus")
            cs_p = _number(kw["cs_plus"], lineno, "cs_plus")
            lc = _number(kw["lc"], lineno, "lc")
            if cs_m < 0 or cs_p < 0 or lc < 0:
                raise NetlistSyntaxError(lineno, "shunt capacitances and lc must be non-negative")
            claim(ident, lineno)
            loops.append(
                (FluxLoopDecl(ident, ids, _number(kw["ext"], lineno, "ext"), int(sign), cs_m, cs_p, lc), lineno)
            )
        else:
            raise NetlistSyntaxError(lineno, f"unknown statement {head!r}")

    for key in ("ground", "port_in", "port_out"):
        if key not in singles:
            raise MissingDeclarationError(f"missing {key} declaration")

    if declared is not None:
        dset = set(declared)
        for b in branches:
            for n in (b.node_plus, b.node_minus):
                if n not in dset:
                    raise UnknownNodeError(f"branch {b.id!r} references undeclared node {n!r}")
        if len(dset) != len(declared):
            raise DuplicateIdError("node declared twice in nodes statement")
        node_order = list(declared)

    for key in ("ground", "port_in", "port_out"):
        node, lineno = singles[key]
        if node not in node_order:
            raise UnknownNodeError(f"line {lineno}: {key} node {node!r} is not connected to any branch")

    net = CircuitNetlist(
        nodes=tuple(node_order),
        branches=tuple(branches),
        ground=singles["ground"][0],
        port_in=singles["port_in"][0],
        port_out=singles["port_out"][0],
        flux_loops=tuple(lp for lp, _ in loops),
    )
    validate(net)
    for lp, lineno in loops:
        _check_loop(net, lp, lineno)
    return net


def validate(net: CircuitNetlist) -> None:
    """Structural checks shared by the parser and programmatic construction."""
    for key in ("ground", "port_in", "port_out"):
        if getattr(net, key) not in net.nodes:
            raise UnknownNodeError(f"{key} node {getattr(net, key)!r} not in netlist")
    ids = [b.id for b in net.branches]
    if len(set(ids)) != len(ids):
        raise DuplicateIdError("branch ids must be unique")
    reached = _reachable(net, net.ground)
    missing = [n for n in net.nodes if n not in reached]
    if missing:
        raise DisconnectedGraphError(f"nodes not connected to ground: {missing}")


def _adjacency(net: CircuitNetlist, skip: Sequence[str] = ()) -> Dict[str, List[Tuple[Branch, str]]]:
    adj: Dict[str, List[Tuple[Branch, str]]] = {n: [] for n in net.nodes}
    for b in net.branches:
        if b.id in skip:
            continue
        adj[b.node_plus].append((b, b.node_minus))
        adj[b.node_minus].append((b, b.node_plus))
    return adj


def _reachable(net: CircuitNetlist, start: str, skip: Sequence[str] = ()) -> set:
    adj = _adjacency(net, skip)
    seen = {start}
    todo = [start]
    while todo:
        n = todo.pop()
        for _, m in adj[n]:
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return seen


def chain_endpoints(net: CircuitNetlist, loop: FluxLoopDecl) -> Tuple[str, str]:
    """Start and end nodes of the three-junction chain, traversed j1 -> alpha -> j3."""
    b1, ba, b3 = (net.branch(i) for i in loop.branch_ids)
    s1 = {b1.node_plus, b1.node_minus} & {ba.node_plus, ba.node_minus}
    s3 = {b3.node_plus, b3.node_minus} & {ba.node_plus, ba.node_minus}
    if len(s1) != 1 or len(s3) != 1 or s1 == s3:
        raise ValueError(f"fluxloop {loop.id!r}: branches do not form a chain")
    (m1,), (m3,) = s1, s3
    start = b1.node_minus if b1.node_plus == m1 else b1.node_plus
    end = b3.node_minus if b3.node_plus == m3 else b3.node_plus
    return start, end


def _check_loop(net: CircuitNetlist, loop: FluxLoopDecl, lineno: int) -> None:
    for bid in loop.branch_ids:
        try:
            b = net.branch(bid)
        except KeyError:
            raise NetlistSyntaxError(lineno, f"fluxloop {loop.id!r} references unknown branch {bid!r}") from None
        if not b.is_junction:
            raise NetlistSyntaxError(lineno, f"fluxloop {loop.id!r}: branch {bid!r} is not a junction")
    try:
        start, end = chain_endpoints(net, loop)
    except ValueError as exc:
        raise NetlistSyntaxError(lineno, str(exc)) from None
    if start == end:
        return
    if end not in _reachable(net, start, skip=loop.branch_ids):
        raise NetlistSyntaxError(lineno, f"fluxloop {loop.id!r} does not close through the circuit")


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_netlist(net: CircuitNetlist) -> str:
    lines = [f"ground {net.ground}", f"port_in {net.port_in}", f"port_out {net.port_out}"]
    lines.append("nodes " + " ".join(net.nodes))
    for b in net.branches:
        k = b.kind
        if isinstance(k, Capacitor):
            lines.append(f"C {b.id} {b.node_plus} {b.node_minus} {_fmt(k.c)}")
        elif isinstance(k, Inductor):
            lines.append(f"L {b.id} {b.node_plus} {b.node_minus} {_fmt(k.l)}")
        else:
            lines.append(f"JJ {b.id} {b.node_plus} {b.node_minus} ej={_fmt(k.ej)} cj={_fmt(k.cj)}")
    for lp in net.flux_loops:
        sign = "+1" if lp.coupling_sign > 0 else "-1"
        lines.append(
            f"fluxloop {lp.id} branches={','.join(lp.branch_ids)} ext={_fmt(lp.phi_ext)} sign={sign} "
            f"cs_minus={_fmt(lp.shunt_cap_minus)} cs_plus={_fmt(lp.shunt_cap_plus)} lc={_fmt(lp.lc)}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# graph structures


@dataclass(frozen=True)
class SpanningTree:
    """Breadth-first spanning tree rooted at ground.

    ``orientation[b]`` is +1 when the branch's ``+`` node lies farther from
    ground than its ``-`` node, so walking from ground to a node accumulates
    ``orientation[b] * delta_b``.
    """

    tree_branches: Tuple[str, ...]
    closure_branches: Tuple[str, ...]
    orientation: Dict[str, int] = field(default_factory=dict)
    parent: Dict[str, Tuple[str, str]] = field(default_factory=dict)
    ground: str = ""

    def path(self, node: str) -> List[Tuple[str, int]]:
        """Branches (with signs) from ground to ``node``."""
        out: List[Tuple[str, int]] = []
        while node != self.ground:
            bid, up = self.parent[node]
            out.append((bid, self.orientation[bid]))
            node = up
        out.reverse()
        return out


def build_spanning_tree(net: CircuitNetlist) -> SpanningTree:
    adj = _adjacency(net)
    parent: Dict[str, Tuple[str, str]] = {}
    orient: Dict[str, int] = {}
    tree: List[str] = []
    seen = {net.ground}
    queue = deque([net.ground])
    while queue:
        n = queue.popleft()
        # adjacency lists are already in file order
        for b, m in adj[n]:
            if m in seen:
                continue
            seen.add(m)
            parent[m] = (b.id, n)
            orient[b.id] = 1 if b.node_plus == m else -1
            tree.append(b.id)
            queue.append(m)
    closure = tuple(b.id for b in net.branches if b.id not in orient)
    return SpanningTree(tuple(tree), closure, orient, parent, net.ground)


def path_matrix(net: CircuitNetlist, tree: SpanningTree) -> np.ndarray:
    """Matrix S with phi_n = sum_b S[n, b] delta_b (non-ground nodes x branches)."""
    cols = net.non_ground_nodes
    rows = {b.id: i for i, b in enumerate(net.branches)}
    s = np.zeros((len(cols), len(net.branches)))
    for j, n in enumerate(cols):
        for bid, sign in tree.path(n):
            s[j, rows[bid]] = sign
    return s


@dataclass(frozen=True)
class IncidenceMatrix:
    entries: np.ndarray
    row_order: Tuple[str, ...]
    col_order: Tuple[str, ...]

    def column(self, node: str) -> Optional[int]:
        return self.col_order.index(node) if node in self.col_order else None


def build_incidence_matrix(net: CircuitNetlist) -> IncidenceMatrix:
    """Branch x node matrix with the ground column dropped, so delta = K phi."""
    cols = net.non_ground_nodes
    cidx = {n: j for j, n in enumerate(cols)}
    k = np.zeros((len(net.branches), len(cols)))
    for i, b in enumerate(net.branches):
        if b.node_plus in cidx:
            k[i, cidx[b.node_plus]] = 1.0
        if b.node_minus in cidx:
            k[i, cidx[b.node_minus]] = -1.0
    k.flags.writeable = False
    return IncidenceMatrix(k, tuple(b.id for b in net.branches), cols)
