"""Hierarchical (tree) canonicalisation of a left-canonical MPS.

Adjacent tensors are merged pairwise, left to right.  Each merge reshapes the
pair into a matrix with the two vertical legs as rows and the two horizontal
legs as columns; its SVD yields an isometry (rows -> new vertical leg) and a
parent tensor that moves up one layer.  An unpaired rightmost tensor is
propagated unchanged.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError
from .mps import MAX_STATEVECTOR_SITES, TAU, _rank, fix_gauge


@dataclass(frozen=True, eq=False)
class TreeNode:
    layer: int
    index: int
    span: tuple  # leaves [lo, hi)
    dim: int  # vertical (parent) leg
    children: tuple | None = None  # indices into the previous layer
    isometry: np.ndarray | None = None  # (dim_a * dim_b, dim)
    left_bond: int = 1
    right_bond: int = 1

    @property
    def is_merge(self):
        return self.isometry is not None


@dataclass(frozen=True, eq=False)
class TreeNetwork:
    n_sites: int
    d: int
    layers: tuple  # layers[0] are the leaves
    schedule: tuple  # per merge layer: tuple of (i, j) pairs or (i,) carries
    root: np.ndarray  # amplitudes on the top node's vertical leg
    norm: complex = 1.0

    @property
    def n_layers(self):
        """Number of merge layers."""
        return len(self.layers) - 1

    @property
    def n_levels(self):
        """Layers counting the physical leaf level."""
        return len(self.layers)

    def merges(self):
        return [node for layer in self.layers[1:] for node in layer if node.is_merge]

    @property
    def max_horizontal(self):
        return max((max(nd.left_bond, nd.right_bond) for layer in self.layers for nd in layer), default=1)

    @property
    def max_vertical(self):
        return max((nd.dim for layer in self.layers[1:] for nd in layer), default=self.d)

    def basis_map(self, node):
        """Matrix sending the node's vertical leg to amplitudes on its leaves."""
        if node.layer == 0:
            return np.eye(self.d)
        if not node.is_merge:
            return self.basis_map(self.layers[node.layer - 1][node.children[0]])
        prev = self.layers[node.layer - 1]
        a = self.basis_map(prev[node.children[0]])
        b = self.basis_map(prev[node.children[1]])
        pair = np.einsum("ax,by->abxy", a, b).reshape(a.shape[0] * b.shape[0], -1)
        return node.isometry.T @ pair

    def to_statevector(self, normalize=True):
        if self.n_sites > MAX_STATEVECTOR_SITES:
            raise SizeLimitError(f"refusing to expand {self.n_sites} sites")
        v = (self.root @ self.basis_map(self.layers[-1][0])) * self.norm
        return v / np.linalg.norm(v) if normalize else v


def _merge(a, b, tol):
    theta = np.tensordot(a, b, axes=(2, 0))
    left, ka, kb, right = theta.shape
    m = theta.transpose(1, 2, 0, 3).reshape(ka * kb, left * right)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    k = _rank(s, tol)
    u = fix_gauge(u[:, :k], s[:k])
    parent = (u.conj().T @ m).reshape(k, left, right).transpose(1, 0, 2)
    return u, parent


def _threads():
    try:
        return max(1, int(os.environ.get("RLSC_THREADS", "1")))
    except ValueError:
        return 1


def tree_svd_pass(mps, tol=TAU, threads=None):
    """Build the isometry tree of a canonical MPS (see module docstring)."""
    threads = _threads() if threads is None else threads
    tensors = list(mps.tensors)
    n = len(tensors)
    leaves = tuple(
        TreeNode(0, j, (j, j + 1), mps.d, left_bond=t.shape[0], right_bond=t.shape[2])
        for j, t in enumerate(tensors)
    )
    layers = [leaves]
    schedule = []
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while len(tensors) > 1:
            prev = layers[-1]
            pairs = [(i, i + 1) for i in range(0, len(tensors) - 1, 2)]
            jobs = [(tensors[i], tensors[j], tol) for i, j in pairs]
            results = list(pool.map(lambda job: _merge(*job), jobs)) if pool else [_merge(*job) for job in jobs]
            nodes, new_tensors = [], []
            for (i, j), (u, parent) in zip(pairs, results):
                nodes.append(TreeNode(
                    len(layers), len(nodes), (prev[i].span[0], prev[j].span[1]), u.shape[1],
                    (i, j), u, parent.shape[0], parent.shape[2],
                ))
                new_tensors.append(parent)
            if len(tensors) % 2:
                last = len(tensors) - 1
                t = tensors[last]
                nodes.append(TreeNode(len(layers), len(nodes), prev[last].span, prev[last].dim,
                                      (last,), None, t.shape[0], t.shape[2]))
                new_tensors.append(t)
                pairs.append((last,))
            layers.append(tuple(nodes))
            schedule.append(tuple(pairs))
            tensors = new_tensors
    finally:
        if pool:
            pool.shutdown()
    root = tensors[0].reshape(-1)
    return TreeNetwork(n, mps.d, tuple(layers), tuple(schedule), root, mps.norm)
