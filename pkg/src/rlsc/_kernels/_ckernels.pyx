# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: gate-program execution on a dense statevector and
whole-language acceptance sweeps over layered transition tables."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def run_program(double complex[::1] state, int n_qubits,
                long long[:, ::1] ops, double complex[:, :, ::1] mats):
    """Apply ``ops`` in order.  Row layout: (kind, q0, q1, matrix index);
    kind 0 is a one-qubit matrix on q0, kind 1 is CNOT(q0 -> q1)."""
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t g, i, j, stride, cmask, tmask
    cdef long long kind
    cdef double complex a, b, m00, m01, m10, m11
    for g in range(ops.shape[0]):
        kind = ops[g, 0]
        if kind == 0:
            stride = (<Py_ssize_t>1) << (n_qubits - 1 - ops[g, 1])
            m00 = mats[ops[g, 3], 0, 0]
            m01 = mats[ops[g, 3], 0, 1]
            m10 = mats[ops[g, 3], 1, 0]
            m11 = mats[ops[g, 3], 1, 1]
            for i in range(dim):
                if i & stride:
                    continue
                j = i | stride
                a = state[i]
                b = state[j]
                state[i] = m00 * a + m01 * b
                state[j] = m10 * a + m11 * b
        else:
            cmask = (<Py_ssize_t>1) << (n_qubits - 1 - ops[g, 1])
            tmask = (<Py_ssize_t>1) << (n_qubits - 1 - ops[g, 2])
            for i in range(dim):
                if (i & cmask) and not (i & tmask):
                    j = i | tmask
                    a = state[i]
                    state[i] = state[j]
                    state[j] = a
    return np.asarray(state)


def layered_accept(long long[::1] flat, long long[::1] offsets, int d, int n,
                   long long start, unsigned char[::1] accept):
    """Indicator over all ``d**n`` words (big-endian symbol order) of a run
    through per-layer tables ending in an accepting state."""
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t w, rest, place
    cdef int i
    cdef long long state, sym
    for i in range(n):
        total *= d
    out = np.zeros(total, dtype=np.uint8)
    cdef unsigned char[::1] res = out
    for w in range(total):
        state = start
        place = total
        rest = w
        for i in range(n):
            place //= d
            sym = rest // place
            rest -= sym * place
            state = flat[offsets[i] + state * d + sym]
            if state < 0:
                break
        if state >= 0:
            res[w] = accept[state]
    return out
