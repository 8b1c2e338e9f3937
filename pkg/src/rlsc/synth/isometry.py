"""Isometric blocks: power-of-two padding, qubit placement and unitary embedding.

Within a block the qubits are listed in increasing order and read big-endian
(first listed qubit is the most significant bit).  The fresh qubits, which
enter in |0>, are the leading ones, so an input basis state ``b`` of the
register corresponds to column ``b`` of the isometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NotIsometricError
from ..mps import Mps
from ..tree import TreeNetwork

ISOMETRY_TOL = 1e-10


def qubits_for(dim):
    """Number of qubits holding a leg of dimension ``dim``."""
    return max(0, int(dim - 1).bit_length())


@dataclass(frozen=True, eq=False)
class Isometry:
    matrix: np.ndarray  # 2**(m + k) x 2**m
    qubits: tuple
    tag: str

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != 2 ** len(self.qubits) or cols & (cols - 1) or cols > rows:
            raise ValueError(f"isometry shape {self.matrix.shape} does not fit {len(self.qubits)} qubits")

    @property
    def n_qubits(self):
        return len(self.qubits)

    @property
    def n_inputs(self):
        return int(self.matrix.shape[1]).bit_length() - 1

    @property
    def n_fresh(self):
        return self.n_qubits - self.n_inputs

    def defect(self):
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(m.shape[1])).max())


def _complete_columns(v, cols):
    """Extend orthonormal columns ``v`` to ``cols`` columns deterministically."""
    if v.shape[1] == cols:
        return v
    return embed_unitary(v)[:, :cols]


def _pad_rows(t, shape):
    out = np.zeros(shape, dtype=np.result_type(t, float))
    out[tuple(slice(0, s) for s in t.shape)] = t
    return out


def _seq_isometries(mps):
    n = mps.n_sites
    widths = [qubits_for(D) for D in mps.bond_dims]
    isos = []
    for site, a in enumerate(mps.tensors):
        wl, wr = widths[site], widths[site + 1]
        padded = _pad_rows(a, (2**wl, 2, a.shape[2]))
        v = _complete_columns(padded.reshape(2 ** (wl + 1), a.shape[2]), 2**wr)
        qubits = tuple(range(site - wl, site + 1))
        isos.append(Isometry(v, qubits, f"site {site + 1}"))
    if n and widths[0] != 0:
        raise ValueError("left boundary bond must be 1")
    return isos


def _tree_isometries(net):
    regs = [[(j,) for j in range(net.n_sites)]]
    isos = []
    for layer in net.layers[1:]:
        prev = regs[-1]
        current = []
        for node in layer:
            if not node.is_merge:
                current.append(prev[node.children[0]])
                continue
            i, j = node.children
            below = net.layers[node.layer - 1]
            ka, kb = below[i].dim, below[j].dim
            qa, qb = prev[i], prev[j]
            u = node.isometry.reshape(ka, kb, node.dim)
            u = _pad_rows(u, (2 ** len(qa), 2 ** len(qb), node.dim))
            w = qubits_for(node.dim)
            v = _complete_columns(u.reshape(-1, node.dim), 2**w)
            qubits = qa + qb
            isos.append(Isometry(v, qubits, f"layer {node.layer} node {node.index}"))
            current.append(qubits[len(qubits) - w:] if w else ())
        regs.append(current)
    root = net.layers[-1][0]
    top = np.asarray(net.root).reshape(-1, 1)
    if root.dim > 1 or not isos:
        # the top node still carries a vertical leg: prepare it directly
        w = qubits_for(root.dim)
        col = _pad_rows(top / np.linalg.norm(top), (2**w, 1))
        isos.append(Isometry(col, regs[-1][0], "root"))
    else:
        # absorb the root phase into the top merge
        last = isos[-1]
        isos[-1] = Isometry(last.matrix * top[0, 0] / abs(top[0, 0]), last.qubits, last.tag)
    return isos


def pad_isometries(net):
    """Padded isometric matrices with their qubit placements.

    A canonical :class:`Mps` gives one block per site in site order; a
    :class:`TreeNetwork` gives one block per merge in bottom-up order, plus a
    root block when the top leg is not trivial.
    """
    if isinstance(net, Mps):
        return _seq_isometries(net)
    if isinstance(net, TreeNetwork):
        return _tree_isometries(net)
    raise TypeError(f"cannot pad {type(net).__name__}")


def embed_unitary(v, tol=ISOMETRY_TOL):
    """Unitary whose leading columns are exactly ``v``; the rest come from
    Gram-Schmidt of the canonical basis against ``v`` in index order."""
    if isinstance(v, Isometry):
        v = v.matrix
    v = np.asarray(v)
    rows, cols = v.shape
    if cols > rows:
        raise NotIsometricError(f"{rows}x{cols} matrix cannot have orthonormal columns")
    defect = np.abs(v.conj().T @ v - np.eye(cols)).max() if cols else 0.0
    if defect > tol:
        raise NotIsometricError(f"columns are not orthonormal (defect {defect:.2e})")
    u = np.zeros((rows, rows), dtype=np.result_type(v, float))
    u[:, :cols] = v
    # a basis vector whose residual is below 1/sqrt(rows) can always be skipped:
    # the residual norms of the remaining complement sum to its dimension
    threshold = 0.5 / np.sqrt(rows)
    k = cols
    for j in range(rows):
        if k == rows:
            break
        r = np.zeros(rows, dtype=u.dtype)
        r[j] = 1.0
        for _ in range(2):
            r -= u[:, :k] @ (u[:, :k].conj().T @ r)
        nr = np.linalg.norm(r)
        if nr > threshold:
            u[:, k] = r / nr
            k += 1
    return u
