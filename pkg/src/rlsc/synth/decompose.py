"""Exact synthesis of block unitaries and isometries into {cx, rz, sx, x}.

Intermediate programs are lists of ``("u", q, 2x2 matrix)`` and
``("cx", control, target)`` in application order, on local qubits read
big-endian (qubit 0 is the most significant bit).  Runs of one-qubit matrices
are fused and lowered to ``rz``/``sx``/``x`` only at the end.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import cossin, schur

from ..errors import NotIsometricError, SizeLimitError
from .circuit import Gate
from .gates import ANGLE_TOL, X, emit_angle, is_zero_angle, ry, rz

MAX_QUBITS = 8
UNITARY_TOL = 1e-10
_EXACT = 1e-12


# one-qubit lowering

def zyz_angles(u):
    """(theta, phi, lam) with u proportional to RZ(phi) RY(theta) RZ(lam)."""
    v = u / np.sqrt(np.linalg.det(u))
    c, s = abs(v[0, 0]), abs(v[1, 0])
    theta = 2 * np.arctan2(s, c)
    total = 2 * np.angle(v[1, 1]) if c > _EXACT else 0.0
    diff = 2 * np.angle(v[1, 0]) if s > _EXACT else 0.0
    return theta, (total + diff) / 2, (total - diff) / 2


def one_qubit_gates(u, q):
    """Lower a 2x2 unitary to at most five gates (exact up to global phase)."""
    u = np.asarray(u, dtype=complex)
    if abs(u[0, 1]) < _EXACT and abs(u[1, 0]) < _EXACT:
        angle = np.angle(u[1, 1]) - np.angle(u[0, 0])
        return [] if is_zero_angle(angle) else [Gate("rz", (q,), emit_angle(angle))]
    if abs(u[0, 0]) < _EXACT and abs(u[1, 1]) < _EXACT:
        # u = X diag(u[1,0], u[0,1])
        angle = np.angle(u[0, 1]) - np.angle(u[1, 0])
        head = [] if is_zero_angle(angle) else [Gate("rz", (q,), emit_angle(angle))]
        return head + [Gate("x", (q,))]
    theta, phi, lam = zyz_angles(u)
    out = []
    for name, angle in (("rz", lam), ("sx", None), ("rz", theta + np.pi), ("sx", None), ("rz", phi + np.pi)):
        if name == "sx":
            out.append(Gate("sx", (q,)))
        elif not is_zero_angle(angle):
            out.append(Gate("rz", (q,), emit_angle(angle)))
    return out


# multiplexed rotations

@lru_cache(maxsize=None)
def _gray_signs(k):
    size = 1 << k
    gray = np.arange(size) ^ (np.arange(size) >> 1)
    bits = np.arange(size)[:, None] & gray[None, :]
    parity = np.array([bin(int(b)).count("1") & 1 for b in bits.reshape(-1)]).reshape(size, size)
    return 1 - 2 * parity


def _rotation(axis, angle):
    return ry(angle) if axis == "y" else rz(angle)


def mux_rotation(axis, target, controls, angles, ops):
    """Append a rotation about ``axis`` on ``target`` whose angle is selected
    by the control register (``angles[c]``, controls read big-endian)."""
    angles = np.asarray(angles, dtype=float).reshape(-1)
    controls = list(controls)
    j = 0
    while j < len(controls):
        split = angles.reshape(1 << j, 2, -1)
        if np.allclose(split[:, 0], split[:, 1], atol=_EXACT, rtol=0):
            angles = split[:, 0].reshape(-1)
            del controls[j]
        else:
            j += 1
    # rotations have period 4*pi: angles 2*pi apart differ by a relative sign
    if all(is_zero_angle(a / 2, ANGLE_TOL / 2) for a in angles) if controls else is_zero_angle(angles[0]):
        return
    k = len(controls)
    if k == 0:
        ops.append(("u", target, _rotation(axis, angles[0])))
        return
    size = 1 << k
    alpha = _gray_signs(k).T @ angles / size
    for i in range(size):
        if not is_zero_angle(alpha[i]):
            ops.append(("u", target, _rotation(axis, alpha[i])))
        flip = (i ^ (i >> 1)) ^ (((i + 1) % size) ^ (((i + 1) % size) >> 1))
        ops.append(("cx", controls[k - flip.bit_length()], target))


def diagonal(phases, qubits, ops):
    """Append ``diag(exp(i*phases))`` up to global phase (2**n - 2 CNOTs at most)."""
    phases = np.asarray(phases, dtype=float)
    for j in range(len(qubits) - 1, -1, -1):
        pairs = phases.reshape(-1, 2)
        mux_rotation("z", qubits[j], qubits[:j], pairs[:, 1] - pairs[:, 0], ops)
        phases = pairs.mean(axis=1)


# unitaries (quantum Shannon decomposition)

def _demultiplex(a, b, qubits, ops):
    """blockdiag(a, b) selected by ``qubits[0]``."""
    rest = qubits[1:]
    if np.allclose(a, b, atol=_EXACT, rtol=0):
        _qsd(a, rest, ops)
        return
    t, v = schur(a @ b.conj().T, output="complex")
    d = np.sqrt(np.diag(t).astype(complex))
    w = d[:, None] * (v.conj().T @ b)
    _qsd(w, rest, ops)
    mux_rotation("z", qubits[0], rest, -2 * np.angle(d), ops)
    _qsd(v, rest, ops)


def _qsd(u, qubits, ops):
    if len(qubits) == 1:
        ops.append(("u", qubits[0], u))
        return
    h = u.shape[0] // 2
    if np.abs(u[:h, h:]).max() < _EXACT and np.abs(u[h:, :h]).max() < _EXACT:
        _demultiplex(u[:h, :h], u[h:, h:], qubits, ops)
        return
    (u1, u2), theta, (v1h, v2h) = cossin(u, p=h, q=h, separate=True)
    _demultiplex(v1h, v2h, qubits, ops)
    mux_rotation("y", qubits[0], qubits[1:], 2 * theta, ops)
    _demultiplex(u1, u2, qubits, ops)


# isometries

def state_preparation(psi, qubits, ops):
    """Append a cascade preparing ``psi`` from |0...0> (magnitudes, then phases)."""
    psi = np.asarray(psi, dtype=complex)
    mags = np.abs(psi)
    for j in range(len(qubits)):
        norms = np.linalg.norm(mags.reshape(1 << j, 2, -1), axis=2)
        theta = 2 * np.arctan2(norms[:, 1], norms[:, 0])
        if np.allclose(theta, np.pi, atol=_EXACT, rtol=0):
            # the target is still |0>, so a bit flip has the same effect
            ops.append(("u", qubits[j], X))
            continue
        mux_rotation("y", qubits[j], qubits[:j], theta, ops)
    support = mags > _EXACT
    # phases on zero amplitudes are free; a common value lets controls drop out
    phases = np.where(support, np.angle(psi), np.angle(psi[np.argmax(support)]))
    diagonal(phases, qubits, ops)


def _inverse(ops):
    return [op if op[0] == "cx" else ("u", op[1], op[2].conj().T) for op in reversed(ops)]


def _reflection(u, qubits, ops):
    """Append I - 2|u><u|."""
    prep = []
    state_preparation(u, qubits, prep)
    ops.extend(_inverse(prep))
    flip = np.zeros(1 << len(qubits))
    flip[0] = np.pi
    diagonal(flip, qubits, ops)
    ops.extend(prep)


def householder(v, qubits, ops):
    """Column-by-column Householder synthesis of an isometry ``v``."""
    w = np.array(v, dtype=complex)
    rows, cols = w.shape
    reflections, alphas = [], []
    for j in range(cols):
        x = w[:, j]
        if abs(abs(x[j]) - 1) < _EXACT:
            alphas.append(x[j] / abs(x[j]))
            continue
        phase = x[j] / abs(x[j]) if abs(x[j]) > _EXACT else 1.0
        alpha = -phase * np.linalg.norm(x)
        r = x.copy()
        r[j] -= alpha
        r /= np.linalg.norm(r)
        w -= 2 * np.outer(r, r.conj() @ w)
        reflections.append(r)
        alphas.append(alpha)
    phases = np.zeros(rows)
    phases[:cols] = np.angle(alphas)
    diagonal(phases, qubits, ops)
    for r in reversed(reflections):
        _reflection(r, qubits, ops)


@lru_cache(maxsize=None)
def qsd_cnot_count(n):
    """CNOTs emitted by the unoptimised recursion on a generic n-qubit unitary."""
    return 0 if n <= 1 else 4 * qsd_cnot_count(n - 1) + 3 * (1 << (n - 1))


def state_prep_cnot_count(n):
    return 2 * ((1 << n) - 2)


def householder_cnot_count(n, m):
    per_column = 2 * state_prep_cnot_count(n) + (1 << n) - 2
    return (1 << m) * per_column + (1 << n) - 2


def choose_method(n, m):
    """Cheapest exact method for a 2**n x 2**m isometry by worst-case CNOT count."""
    if m == 0 and n > 0:
        return "stateprep"
    if m < n and householder_cnot_count(n, m) < qsd_cnot_count(n):
        return "householder"
    return "qsd"


# clean-up

def _is_identity(m):
    return abs(m[0, 1]) + abs(m[1, 0]) < _EXACT and abs(m[0, 0] - m[1, 1]) < _EXACT


def _fuse(ops, n):
    pending = [None] * n
    out = []

    def flush(q):
        if pending[q] is not None and not _is_identity(pending[q]):
            out.append(("u", q, pending[q]))
        pending[q] = None

    for op in ops:
        if op[0] == "u":
            q = op[1]
            pending[q] = op[2] if pending[q] is None else op[2] @ pending[q]
        else:
            flush(op[1])
            flush(op[2])
            out.append(op)
    for q in range(n):
        flush(q)
    return out


def _cancel_cx(ops, n):
    out = []
    last = [-1] * n
    removed = False
    for op in ops:
        qs = (op[1],) if op[0] == "u" else (op[1], op[2])
        if op[0] == "cx":
            i = last[op[1]]
            if i >= 0 and i == last[op[2]] and out[i] == op:
                out[i] = None
                last[op[1]] = last[op[2]] = -2  # unknown: block further matches
                removed = True
                continue
        out.append(op)
        for q in qs:
            last[q] = len(out) - 1
    return [op for op in out if op is not None], removed


def optimize(ops, n):
    ops = _fuse(ops, n)
    while True:
        ops, removed = _cancel_cx(ops, n)
        ops = _fuse(ops, n)
        if not removed:
            return ops


def lower(ops, qubits=None):
    """Translate a local program into gates on ``qubits`` (defaults to identity)."""
    gates = []
    for op in ops:
        if op[0] == "cx":
            c, t = op[1], op[2]
            gates.append(Gate("cx", (c, t) if qubits is None else (qubits[c], qubits[t])))
        else:
            q = op[1] if qubits is None else qubits[op[1]]
            gates.extend(one_qubit_gates(op[2], q))
    return gates


def _check_size(n):
    if n > MAX_QUBITS:
        raise SizeLimitError(f"refusing to decompose a {n}-qubit block (limit {MAX_QUBITS})")


def decompose_unitary(u, qubits=None):
    """Gate list for an n-qubit unitary, exact up to global phase."""
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if u.shape != (dim, dim) or dim != 1 << n or n < 1:
        raise ValueError(f"expected a 2**n x 2**n matrix, got {u.shape}")
    _check_size(n)
    if np.abs(u.conj().T @ u - np.eye(dim)).max() > UNITARY_TOL:
        raise NotIsometricError("matrix is not unitary")
    ops = []
    _qsd(u, list(range(n)), ops)
    return lower(optimize(ops, n), qubits)


def decompose_isometry(v, qubits=None, method=None):
    """Gates mapping |0..0>|b> to column ``b`` of ``v`` (fresh qubits lead).

    Returns ``(gates, method)``; the method is picked by :func:`choose_method`
    unless given.
    """
    from .isometry import embed_unitary

    v = np.asarray(v, dtype=complex)
    rows, cols = v.shape
    n, m = rows.bit_length() - 1, cols.bit_length() - 1
    _check_size(n)
    if np.abs(v.conj().T @ v - np.eye(cols)).max() > UNITARY_TOL:
        raise NotIsometricError("columns are not orthonormal")
    if n == 0:
        return [], "trivial"
    method = method or choose_method(n, m)
    ops = []
    local = list(range(n))
    if method == "stateprep":
        state_preparation(v[:, 0], local, ops)
    elif method == "householder":
        householder(v, local, ops)
    elif method == "qsd":
        _qsd(embed_unitary(v), local, ops)
    else:
        raise ValueError(f"unknown method {method!r}")
    return lower(optimize(ops, n), qubits), method


def gates_unitary(gates, n):
    """Dense matrix of a gate list on n local qubits (for round-trip checks)."""
    from .gates import gate_matrix

    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        full = _embed_gate(gate_matrix(g.name, g.theta), g.qubits, n)
        u = full @ u
    return u


def _embed_gate(m, qubits, n):
    k = len(qubits)
    others = [q for q in range(n) if q not in qubits]
    perm = list(qubits) + others
    full = np.kron(m, np.eye(1 << (n - k)))
    full = full.reshape((2,) * (2 * n))
    inv = np.argsort(perm)
    axes = list(inv) + [n + i for i in inv]
    return full.transpose(axes).reshape(1 << n, 1 << n)


__all__ = [
    "ANGLE_TOL",
    "choose_method",
    "decompose_isometry",
    "decompose_unitary",
    "diagonal",
    "gates_unitary",
    "householder",
    "lower",
    "mux_rotation",
    "one_qubit_gates",
    "optimize",
    "qsd_cnot_count",
    "state_preparation",
]
