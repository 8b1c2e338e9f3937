"""Numpy implementations of the compiled kernels, used when the extension is
not built or ``RLSC_PURE_PYTHON`` is set."""

import numpy as np


def run_program(state, n_qubits, ops, mats):
    psi = state.reshape((2,) * n_qubits) if n_qubits else state
    for kind, q0, q1, m in ops:
        if kind == 0:
            moved = np.moveaxis(psi, q0, 0)
            moved[...] = np.tensordot(mats[m], moved, axes=(1, 0))
        else:
            index = [slice(None)] * n_qubits
            index[q0] = 1
            sub = psi[tuple(index)]
            t = q1 - 1 if q1 > q0 else q1
            sub[...] = np.flip(sub, axis=t).copy()
    return state


def layered_accept(flat, offsets, d, n, start, accept):
    total = d**n
    words = np.arange(total, dtype=np.int64)
    state = np.full(total, start, dtype=np.int64)
    alive = np.ones(total, dtype=bool)
    for i in range(n):
        sym = (words // d ** (n - 1 - i)) % d
        idx = offsets[i] + np.where(alive, state, 0) * d + sym
        state = np.where(alive, flat[idx], -1)
        alive = state >= 0
    out = np.zeros(total, dtype=np.uint8)
    out[alive] = np.asarray(accept)[state[alive]]
    return out
