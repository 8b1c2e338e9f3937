"""Independent oracles: exhaustive language enumeration, dense target states,
statevector simulation and fidelity.

Qubit 0 carries the leftmost symbol; basis index ``i`` is the big-endian
reading of the word.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import layered_accept, run_program
from .automaton import DagDfa, Dfa
from .errors import SizeLimitError
from .synth.gates import gate_matrix

MAX_ENUMERATE = 22
MAX_SIMULATE = 20


def _indicator(auto, n=None):
    if isinstance(auto, DagDfa):
        if n is not None and n != auto.n:
            raise ValueError(f"automaton has length {auto.n}, asked for {n}")
        n = auto.n
        tables = list(auto.tables)
        start, accept = 0, np.ones(1, dtype=np.uint8)
    elif isinstance(auto, Dfa):
        if n is None:
            raise ValueError("a length is required for a general DFA")
        tables = [auto.table] * n
        start = auto.initial
        accept = np.zeros(auto.n_states, dtype=np.uint8)
        accept[list(auto.accepting)] = 1
    else:
        raise TypeError(f"cannot enumerate {type(auto).__name__}")
    if n > MAX_ENUMERATE:
        raise SizeLimitError(f"refusing to enumerate words of length {n} (limit {MAX_ENUMERATE})")
    offsets = np.cumsum([0] + [t.size for t in tables[:-1]]).astype(np.int64)
    flat = np.concatenate([t.reshape(-1) for t in tables]).astype(np.int64)
    hit = layered_accept(flat, offsets, auto.d if isinstance(auto, DagDfa) else len(auto.alphabet),
                         n, start, accept)
    return np.asarray(hit, dtype=bool), n


def _word(index, n, alphabet):
    d = len(alphabet)
    out = []
    for _ in range(n):
        index, s = divmod(index, d)
        out.append(alphabet[s])
    return "".join(reversed(out))


def enumerate_language(auto, n=None):
    """Accepted words of length ``n`` by running the automaton on every word."""
    hit, n = _indicator(auto, n)
    return {_word(int(i), n, auto.alphabet) for i in np.flatnonzero(hit)}


@dataclass(frozen=True, eq=False)
class TargetState:
    n: int
    words: frozenset
    amplitudes: np.ndarray

    @classmethod
    def from_words(cls, words, n=None):
        words = frozenset(words)
        if not words:
            raise ValueError("no words")
        n = len(next(iter(words))) if n is None else n
        if n > MAX_SIMULATE:
            raise SizeLimitError(f"dense target for {n} qubits exceeds the limit {MAX_SIMULATE}")
        vec = np.zeros(1 << n)
        vec[[int(w, 2) for w in words]] = 1.0 / np.sqrt(len(words))
        return cls(n, words, vec)

    @classmethod
    def from_automaton(cls, auto, n=None):
        hit, n = _indicator(auto, n)
        if n > MAX_SIMULATE:
            raise SizeLimitError(f"dense target for {n} qubits exceeds the limit {MAX_SIMULATE}")
        idx = np.flatnonzero(hit)
        vec = np.zeros(1 << n)
        vec[idx] = 1.0 / np.sqrt(len(idx))
        words = frozenset(_word(int(i), n, auto.alphabet) for i in idx)
        return cls(n, words, vec)


def compile_program(gates):
    """Pack gates into the (ops, matrices) arrays the simulation kernel reads."""
    mats, index, ops = [], {}, []
    for g in gates:
        if g.name == "cx":
            ops.append((1, g.qubits[0], g.qubits[1], 0))
            continue
        key = (g.name, g.theta)
        if key not in index:
            index[key] = len(mats)
            mats.append(gate_matrix(g.name, g.theta))
        ops.append((0, g.qubits[0], 0, index[key]))
    ops = np.array(ops, dtype=np.int64).reshape(-1, 4)
    mats = np.array(mats, dtype=complex).reshape(-1, 2, 2) if mats else np.zeros((1, 2, 2), dtype=complex)
    return np.ascontiguousarray(ops), np.ascontiguousarray(mats)


def simulate_circuit(circ, initial=None):
    """Apply the circuit to |0...0> (or ``initial``) and return the state."""
    n = circ.n_qubits
    if n > MAX_SIMULATE:
        raise SizeLimitError(f"refusing to simulate {n} qubits (limit {MAX_SIMULATE})")
    state = np.zeros(1 << n, dtype=complex)
    if initial is None:
        state[0] = 1.0
    else:
        state[:] = initial
    ops, mats = compile_program(circ.gates)
    return np.asarray(run_program(state, n, ops, mats))


def fidelity(a, b, tol=1e-10):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1) > tol:
            raise ValueError("fidelity needs normalised vectors")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))
