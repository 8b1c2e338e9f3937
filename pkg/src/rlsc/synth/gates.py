"""Gate definitions shared by the synthesiser and the simulator."""

import numpy as np

SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
SX_DAG = SX.conj().T
X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

ANGLE_TOL = 1e-10
ANGLE_DECIMALS = 12


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def wrap_angle(theta):
    """Map to (-pi, pi]."""
    t = np.remainder(theta + np.pi, 2 * np.pi) - np.pi
    return np.pi if t == -np.pi else float(t)


def emit_angle(theta):
    """Canonical emitted value: wrapped and rounded to 12 decimals so that
    numerically equivalent blocks print identically."""
    t = round(wrap_angle(theta), ANGLE_DECIMALS)
    return -t if t == -round(np.pi, ANGLE_DECIMALS) else t + 0.0


def is_zero_angle(theta, tol=ANGLE_TOL):
    return abs(wrap_angle(theta)) < tol


def gate_matrix(name, theta=None):
    if name == "rz":
        return rz(theta)
    if name == "sx":
        return SX
    if name == "x":
        return X
    if name == "cx":
        return CX
    raise ValueError(f"unknown gate {name!r}")
