"""Gate-level circuit container, resource accounting and emitters."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

GATE_SET = ("cx", "rz", "sx", "x")


class Gate(NamedTuple):
    name: str
    qubits: tuple
    theta: float | None = None


@dataclass(frozen=True)
class BlockSpan:
    """Range of gates ``[start, stop)`` emitted for one isometry block."""

    tag: str
    qubits: tuple
    start: int
    stop: int
    layer: int
    method: str = ""


@dataclass
class Circuit:
    n_qubits: int
    gates: list = field(default_factory=list)
    blocks: list = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, gate):
        if gate.name not in GATE_SET:
            raise ValueError(f"gate {gate.name!r} outside {GATE_SET}")
        if any(not 0 <= q < self.n_qubits for q in gate.qubits):
            raise ValueError(f"gate {gate} acts outside {self.n_qubits} qubits")
        if gate.name == "cx" and (len(gate.qubits) != 2 or gate.qubits[0] == gate.qubits[1]):
            raise ValueError(f"malformed CNOT {gate}")
        if gate.name == "rz" and not math.isfinite(gate.theta):
            raise ValueError("non-finite rotation angle")

    def append(self, gate):
        self._check(gate)
        self.gates.append(gate)

    def extend_block(self, tag, qubits, gates, layer, method=""):
        start = len(self.gates)
        for g in gates:
            self.append(g)
        self.blocks.append(BlockSpan(tag, tuple(qubits), start, len(self.gates), layer, method))

    def __len__(self):
        return len(self.gates)


@dataclass(frozen=True)
class ResourceReport:
    depth: int
    gates_total: int
    cnots: int
    ancillae: int
    one_qubit: int
    block_layers: int
    n_blocks: int
    stage_times_ms: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "depth": self.depth,
            "gates_total": self.gates_total,
            "cnots": self.cnots,
            "ancillae": self.ancillae,
            "one_qubit": self.one_qubit,
            "block_layers": self.block_layers,
            "n_blocks": self.n_blocks,
            "stage_times_ms": dict(self.stage_times_ms),
        }


def circuit_depth(gates, n_qubits):
    """Critical path length with as-soon-as-possible scheduling."""
    front = [0] * n_qubits
    depth = 0
    for g in gates:
        t = 1 + max(front[q] for q in g.qubits)
        for q in g.qubits:
            front[q] = t
        depth = max(depth, t)
    return depth


def resource_report(circ, n_logical=None, stage_times_ms=None):
    n_logical = circ.n_qubits if n_logical is None else n_logical
    cnots = sum(1 for g in circ.gates if g.name == "cx")
    layers = max((b.layer for b in circ.blocks), default=-1) + 1
    return ResourceReport(
        depth=circuit_depth(circ.gates, circ.n_qubits),
        gates_total=len(circ.gates),
        cnots=cnots,
        ancillae=circ.n_qubits - n_logical,
        one_qubit=len(circ.gates) - cnots,
        block_layers=layers,
        n_blocks=len(circ.blocks),
        stage_times_ms=dict(stage_times_ms or {}),
    )


def _angle(theta):
    return repr(float(theta))


def to_qasm(circ):
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{circ.n_qubits}] q;"]
    for g in circ.gates:
        args = ", ".join(f"q[{q}]" for q in g.qubits)
        if g.name == "rz":
            lines.append(f"rz({_angle(g.theta)}) {args};")
        else:
            lines.append(f"{g.name} {args};")
    return "\n".join(lines) + "\n"


def to_json(circ):
    gates = []
    for g in circ.gates:
        entry = {"g": g.name, "q": list(g.qubits)}
        if g.theta is not None:
            entry["theta"] = float(g.theta)
        gates.append(entry)
    return {"qubits": circ.n_qubits, "gates": gates}


def dumps_json(circ):
    return json.dumps(to_json(circ), separators=(",", ":"))


def from_json(data):
    gates = [Gate(e["g"], tuple(e["q"]), e.get("theta")) for e in data["gates"]]
    return Circuit(int(data["qubits"]), gates)
