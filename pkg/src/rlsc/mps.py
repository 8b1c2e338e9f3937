"""Matrix product states built from automata, and their canonicalisation.

Tensors have shape ``(D_left, d, D_right)`` with boundary bonds of size 1.
Automaton-derived states keep their one-hot tensors as transition tables
(``table[i, x] = j`` means ``A[i, x, j] = 1``) so that large unminimised
automata never need to be expanded into dense arrays.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .automata import unroll_dfa
from .errors import NotCanonicalError, NumericalDegeneracyWarning, SizeLimitError

TAU = 1e-12
DEGENERACY_RATIO = 1e3
MAX_DENSE_ENTRIES = 50_000_000
MAX_STATEVECTOR_SITES = 20

# gauge fixing: singular values closer than this (relative) share a subspace
_CLUSTER_TOL = 1e-9
_PIVOT_TOL = 1e-9
_BASIS_TOL = 1e-6


class Mps:
    """Open-boundary MPS with an overall scalar ``norm`` factor."""

    def __init__(self, tensors=None, *, tables=None, d=2, norm=1.0):
        if (tensors is None) == (tables is None):
            raise ValueError("give exactly one of tensors or tables")
        self.norm = norm
        self._tensors = None
        self.tables = None
        if tables is not None:
            self.tables = [np.asarray(t, dtype=np.int64) for t in tables]
            self.d = int(d)
            dims = [1] + [int(t.max(initial=-1)) + 1 for t in self.tables]
            dims[1:-1] = [t.shape[0] for t in self.tables[1:]]
            self._dims = tuple(dims)
        else:
            self._tensors = [np.asarray(a) for a in tensors]
            self.d = self._tensors[0].shape[1]
            self._dims = (1,) + tuple(a.shape[2] for a in self._tensors)
        self._check()

    def _check(self):
        if self._dims[0] != 1 or self._dims[-1] != 1:
            raise ValueError(f"boundary bonds must be 1, got {self._dims}")
        if self._tensors is not None:
            for n, a in enumerate(self._tensors):
                if a.ndim != 3 or a.shape[0] != self._dims[n] or a.shape[1] != self.d:
                    raise ValueError(f"site {n} has inconsistent shape {a.shape}")

    @property
    def n_sites(self):
        return len(self._dims) - 1

    @property
    def bond_dims(self):
        return self._dims

    @property
    def tensors(self):
        if self._tensors is None:
            self._tensors = [self._dense_site(n) for n in range(self.n_sites)]
        return self._tensors

    def _dense_site(self, n):
        t = self.tables[n]
        left, right = self._dims[n], self._dims[n + 1]
        if left * self.d * right > MAX_DENSE_ENTRIES:
            raise SizeLimitError(f"site {n} tensor {left}x{self.d}x{right} is too large to densify")
        a = np.zeros((left, self.d, right))
        i, x = np.nonzero(t >= 0)
        a[i, x, t[i, x]] = 1.0
        return a

    def apply_right(self, n, right):
        """Contract site ``n`` with a matrix on its right bond."""
        if self.tables is not None:
            padded = np.vstack([right, np.zeros((1, right.shape[1]), dtype=right.dtype)])
            return padded[self.tables[n]]
        return np.tensordot(self.tensors[n], right, axes=(2, 0))

    def amplitude(self, symbols):
        """Contract the chain on one word given as symbol indices (norm included)."""
        if self.tables is not None:
            state = 0
            for t, x in zip(self.tables, symbols):
                state = t[state, x]
                if state < 0:
                    return 0.0 * self.norm
            return 1.0 * self.norm
        v = np.ones(1)
        for a, x in zip(self.tensors, symbols):
            v = v @ a[:, x, :]
        return v[0] * self.norm

    def is_left_canonical(self, tol=1e-10):
        for a in self.tensors:
            m = a.reshape(-1, a.shape[2])
            if not np.allclose(m.conj().T @ m, np.eye(m.shape[1]), atol=tol, rtol=0):
                return False
        return True

    def to_json(self):
        sites = []
        for a in self.tensors:
            entry = {"shape": list(a.shape)}
            if np.iscomplexobj(a) and np.any(a.imag):
                entry["re"] = a.real.reshape(-1).tolist()
                entry["im"] = a.imag.reshape(-1).tolist()
            else:
                entry["data"] = np.real(a).reshape(-1).tolist()
            sites.append(entry)
        norm = complex(self.norm)
        return {
            "n": self.n_sites,
            "d": self.d,
            "bond_dims": list(self.bond_dims),
            "norm": norm.real if norm.imag == 0 else [norm.real, norm.imag],
            "tensors": sites,
        }

    def dumps(self):
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class SchmidtProfile:
    ranks: tuple
    values: tuple = field(default=(), compare=False, repr=False)

    @property
    def chi(self):
        return max(self.ranks, default=1)


def uniform_bulk(dfa):
    """Boundary vectors and bulk tensor ``A[i, x, j] = [j == delta(i, x)]``."""
    q = dfa.n_states
    bulk = np.zeros((q, dfa.d, q))
    i, x = np.nonzero(dfa.table >= 0)
    bulk[i, x, dfa.table[i, x]] = 1.0
    v_left = np.zeros(q)
    v_left[dfa.initial] = 1.0
    v_right = np.zeros(q)
    v_right[list(dfa.accepting)] = 1.0
    return v_left, bulk, v_right


def dfa_to_uniform_mps(dfa, n):
    """Uniform-bulk MPS of ``L`` sliced to length ``n``; the boundary vectors
    are absorbed into the first and last sites."""
    unroll_dfa(dfa, n)  # raises on an empty slice
    accept = np.full(dfa.n_states + 1, -1, dtype=np.int64)
    accept[list(dfa.accepting)] = 0
    last = accept[dfa.table]
    first = dfa.table[[dfa.initial]]
    if n == 1:
        return Mps(tables=[accept[first]], d=dfa.d)
    return Mps(tables=[first] + [dfa.table] * (n - 2) + [last], d=dfa.d)


def dagdfa_to_mps(dag):
    """Site-dependent MPS with one-hot tensors read off each layer's transitions."""
    return Mps(tables=list(dag.tables), d=dag.d)


def _rank(s, tol):
    if s.size == 0 or s[0] == 0:
        return 0
    k = int(np.count_nonzero(s > tol * s[0]))
    if k < s.size and s[k] > 0 and s[k - 1] / s[k] < DEGENERACY_RATIO:
        warnings.warn(
            f"singular values {s[k - 1]:.3e} (kept) and {s[k]:.3e} (dropped) are within "
            f"a factor {DEGENERACY_RATIO:g}; the rank cut may be unreliable",
            NumericalDegeneracyWarning,
            stacklevel=3,
        )
    return k


def _span_basis(block):
    """Basis of span(block) that depends only on the subspace: Gram-Schmidt of
    the projector's columns taken in canonical order."""
    proj = block @ block.conj().T
    basis = []
    for j in range(proj.shape[0]):
        v = proj[:, j].copy()
        for _ in range(2):
            for b in basis:
                v -= b * (b.conj() @ v)
        nv = np.linalg.norm(v)
        if nv > _BASIS_TOL:
            basis.append(v / nv)
            if len(basis) == block.shape[1]:
                break
    return basis


def fix_gauge(u, s):
    """Remove the SVD's sign/phase and degenerate-rotation freedom from the
    left singular vectors ``u`` so the result is a function of the state."""
    cols = []
    k = len(s)
    start = 0
    while start < k:
        stop = start + 1
        while stop < k and s[stop - 1] - s[stop] <= _CLUSTER_TOL * s[0]:
            stop += 1
        if stop - start == 1:
            v = u[:, start]
            pivot = v[np.flatnonzero(np.abs(v) > _PIVOT_TOL)[0]]
            cols.append(v * (np.conj(pivot) / abs(pivot)))
        else:
            cols.extend(_span_basis(u[:, start:stop]))
        start = stop
    return np.column_stack(cols)


def sequential_svd_pass(mps, tol=TAU):
    """Right-to-left then left-to-right exact SVD sweep.

    Returns a left-canonical MPS whose bonds equal the Schmidt ranks, with the
    overall normalisation moved into ``norm``, and the Schmidt profile.
    """
    n, d = mps.n_sites, mps.d
    right = [None] * n
    env = np.ones((1, 1))
    for site in range(n - 1, 0, -1):
        t = mps.apply_right(site, env)
        rows, _, r = t.shape
        # states with equal rows have equal futures; factoring the sorted
        # distinct rows makes the sweep independent of automaton redundancy
        uniq, inverse = np.unique(t.reshape(rows, d * r), axis=0, return_inverse=True)
        u, s, vh = np.linalg.svd(uniq, full_matrices=False)
        k = _rank(s, tol)
        if k == 0:
            raise ValueError("the MPS represents the zero vector")
        right[site] = vh[:k].reshape(k, d, r)
        env = (u[:, :k] * s[:k])[inverse.reshape(-1)]
    carry = mps.apply_right(0, env)

    tensors, values = [], []
    for site in range(n):
        if site:
            carry = np.tensordot(c, right[site], axes=(1, 0))
        chi_prev, _, r = carry.shape
        m = carry.reshape(chi_prev * d, r)
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        k = _rank(s, tol)
        if k == 0:
            raise ValueError("the MPS represents the zero vector")
        u = fix_gauge(u[:, :k], s[:k])
        tensors.append(u.reshape(chi_prev, d, k))
        values.append(s[:k])
        c = u.conj().T @ m
    norm = c[0, 0]
    if np.isreal(norm):
        norm = float(np.real(norm))
    scale = abs(norm)
    out = Mps(tensors, norm=norm)
    profile = SchmidtProfile(
        tuple(out.bond_dims[1:-1]),
        tuple(v / scale for v in values[:-1]),
    )
    return out, profile


def schmidt_ranks(mps, tol=1e-10):
    """Per-cut Schmidt ranks read off a left-canonical MPS."""
    if not mps.is_left_canonical(tol):
        raise NotCanonicalError("MPS tensors do not satisfy the left isometry condition")
    return SchmidtProfile(tuple(mps.bond_dims[1:-1]))


def mps_to_statevector(mps, normalize=True):
    """Dense amplitudes in big-endian word order (site 1 is the leading symbol)."""
    if mps.n_sites > MAX_STATEVECTOR_SITES:
        raise SizeLimitError(f"refusing to expand {mps.n_sites} sites (limit {MAX_STATEVECTOR_SITES})")
    v = np.ones((1, 1))
    for a in mps.tensors:
        left, d, right = a.shape
        v = (v @ a.reshape(left, d * right)).reshape(-1, right)
    v = v.reshape(-1) * mps.norm
    if normalize:
        nv = np.linalg.norm(v)
        if nv == 0:
            raise ValueError("zero state cannot be normalised")
        v = v / nv
    return v
