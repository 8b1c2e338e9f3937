"""Isometric network to gate-level circuit."""

from .circuit import Circuit, Gate, ResourceReport, resource_report, to_json, to_qasm
from .decompose import decompose_isometry, decompose_unitary
from .isometry import Isometry, embed_unitary, pad_isometries
from .layout import Block, CircuitSkeleton, seq_layout, synthesize, tree_layout

__all__ = [
    "Block",
    "Circuit",
    "CircuitSkeleton",
    "Gate",
    "Isometry",
    "ResourceReport",
    "decompose_isometry",
    "decompose_unitary",
    "embed_unitary",
    "pad_isometries",
    "resource_report",
    "seq_layout",
    "synthesize",
    "to_json",
    "to_qasm",
    "tree_layout",
]
