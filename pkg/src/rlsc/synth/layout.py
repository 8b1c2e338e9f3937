"""Block placement for sequential (staircase) and tree generation, and the
driver that decomposes every block into gates."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .circuit import Circuit
from .decompose import choose_method, decompose_isometry, householder_cnot_count, qsd_cnot_count, state_prep_cnot_count
from .isometry import Isometry, pad_isometries


@dataclass(frozen=True, eq=False)
class Block:
    isometry: Isometry
    layer: int

    @property
    def qubits(self):
        return self.isometry.qubits

    @property
    def width(self):
        return len(self.isometry.qubits)


@dataclass(frozen=True, eq=False)
class CircuitSkeleton:
    """Blocks in application order on ``n_qubits`` qubits."""

    n_qubits: int
    blocks: tuple
    kind: str

    @property
    def widths(self):
        return tuple(b.width for b in self.blocks)

    @property
    def site_widths(self):
        """Block widths listed from site 1 (sequential layouts only)."""
        if self.kind != "seq":
            raise ValueError("site widths are defined for sequential layouts")
        return tuple(reversed(self.widths))

    @property
    def block_layers(self):
        return max((b.layer for b in self.blocks), default=-1) + 1

    def estimated_cnots(self):
        """Worst-case CNOT total of the decomposition (no peephole savings)."""
        total = 0
        for b in self.blocks:
            n, m = b.isometry.n_qubits, b.isometry.n_inputs
            method = choose_method(n, m)
            if method == "stateprep":
                total += state_prep_cnot_count(n)
            elif method == "householder":
                total += householder_cnot_count(n, m)
            else:
                total += qsd_cnot_count(n)
        return total


def _asap_layers(blocks_qubits, n_qubits):
    front = [0] * n_qubits
    layers = []
    for qs in blocks_qubits:
        t = max((front[q] for q in qs), default=0)
        for q in qs:
            front[q] = t + 1
        layers.append(t)
    return layers


def seq_layout(isos, n):
    """Staircase: site N's block first, down to site 1; each block spans the
    physical qubit of its site and the bond register to its left."""
    order = list(reversed(isos))
    layers = _asap_layers([iso.qubits for iso in order], n)
    return CircuitSkeleton(n, tuple(Block(iso, t) for iso, t in zip(order, layers)), "seq")


def tree_layout(net):
    """Root-to-leaves placement of the tree isometries."""
    isos = pad_isometries(net)
    order = list(reversed(isos))
    layers = _asap_layers([iso.qubits for iso in order], net.n_sites)
    return CircuitSkeleton(net.n_sites, tuple(Block(iso, t) for iso, t in zip(order, layers)), "tree")


def _threads():
    try:
        return max(1, int(os.environ.get("RLSC_THREADS", "1")))
    except ValueError:
        return 1


def synthesize(skeleton, threads=None):
    """Decompose every block; emission order follows the skeleton."""
    threads = _threads() if threads is None else threads

    def work(block):
        return decompose_isometry(block.isometry.matrix, block.qubits)

    if threads > 1 and len(skeleton.blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, skeleton.blocks))
    else:
        results = [work(b) for b in skeleton.blocks]
    circ = Circuit(skeleton.n_qubits)
    for block, (gates, method) in zip(skeleton.blocks, results):
        circ.extend_block(block.isometry.tag, block.qubits, gates, block.layer, method)
    return circ
