import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from oracles import same_up_to_phase, uniform_vector
from rlsc.automata import minimize_dagdfa, minimize_dfa, unroll_dfa
from rlsc.errors import NotIsometricError, SizeLimitError
from rlsc.families import GHZ_REGEX, W_REGEX, dicke_words
from rlsc.frontend import regex_to_dfa, strings_to_dagdfa
from rlsc.mps import Mps, dagdfa_to_mps, sequential_svd_pass
from rlsc.synth import (
    Circuit,
    Gate,
    decompose_isometry,
    decompose_unitary,
    embed_unitary,
    pad_isometries,
    resource_report,
    seq_layout,
    synthesize,
    to_json,
    to_qasm,
    tree_layout,
)
from rlsc.synth.decompose import choose_method, gates_unitary, qsd_cnot_count
from rlsc.synth.gates import SX, X, rz
from rlsc.synth.isometry import qubits_for
from rlsc.tree import tree_svd_pass
from rlsc.verify import fidelity, simulate_circuit


def canonical_words(words):
    return sequential_svd_pass(dagdfa_to_mps(minimize_dagdfa(strings_to_dagdfa(words))[0]))[0]


def canonical_regex(text, n):
    return sequential_svd_pass(dagdfa_to_mps(unroll_dfa(minimize_dfa(regex_to_dfa(text))[0], n)))[0]


def test_padding_widths():
    assert [qubits_for(c) for c in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_w_chain_needs_no_padding():
    mps = canonical_regex(W_REGEX, 6)
    for iso in pad_isometries(mps):
        assert iso.matrix.shape[1] in (1, 2)
        assert iso.defect() < 1e-12
    assert seq_layout(pad_isometries(mps), 6).site_widths == (1, 2, 2, 2, 2, 2)


def test_dicke4_pads_to_eight():
    mps = canonical_words(dicke_words(10, 4))
    isos = pad_isometries(mps)
    assert max(mps.bond_dims) == 5
    assert max(iso.matrix.shape[1] for iso in isos) == 8
    assert all(iso.defect() < 1e-10 for iso in isos)


def test_embed_identity_block():
    np.testing.assert_allclose(embed_unitary(np.eye(4)[:, :2]), np.eye(4), atol=1e-15)


def test_embed_hadamard_like():
    v = np.array([[1], [1]]) / np.sqrt(2)
    u = embed_unitary(v)
    np.testing.assert_array_equal(u[:, :1], v)
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12


def test_embed_rejects_non_isometry():
    with pytest.raises(NotIsometricError):
        embed_unitary(np.array([[1.0], [1.0]]))


def test_dicke3_blocks_embed_unitarily():
    mps = canonical_words(dicke_words(8, 3))
    for iso in pad_isometries(mps):
        u = embed_unitary(iso)
        assert np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() < 1e-10
        np.testing.assert_array_equal(u[:, : iso.matrix.shape[1]], iso.matrix)


def test_embed_is_deterministic():
    v = unitary_group.rvs(8, random_state=3)[:, :2]
    assert np.array_equal(embed_unitary(v), embed_unitary(v.copy()))


def test_seq_layout_full_rank_profile():
    # a generic 6-qubit state has profile (1,2,4,8,4,2,1)
    rng = np.random.default_rng(7)
    psi = rng.normal(size=64) + 1j * rng.normal(size=64)
    tensors, rest = [], psi.reshape(1, -1)
    for _ in range(5):
        left = rest.shape[0]
        u, s, vh = np.linalg.svd(rest.reshape(left * 2, -1), full_matrices=False)
        tensors.append(u.reshape(left, 2, -1))
        rest = s[:, None] * vh
    tensors.append(rest.reshape(rest.shape[0], 2, 1))
    mps, profile = sequential_svd_pass(Mps(tensors))
    assert mps.bond_dims == (1, 2, 4, 8, 4, 2, 1)
    sk = seq_layout(pad_isometries(mps), 6)
    assert sk.site_widths == (1, 2, 3, 4, 3, 2)
    circ = synthesize(sk)
    assert fidelity(simulate_circuit(circ), psi / np.linalg.norm(psi)) > 1 - 1e-9


def test_product_state_layout():
    mps = canonical_words(["10110"])
    sk = seq_layout(pad_isometries(mps), 5)
    assert sk.widths == (1,) * 5
    circ = synthesize(sk)
    assert [g.name for g in circ.gates] == ["x"] * 3
    assert resource_report(circ).depth == 1


def test_w5_staircase():
    mps = canonical_regex(W_REGEX, 5)
    sk = seq_layout(pad_isometries(mps), 5)
    assert sk.site_widths == (1, 2, 2, 2, 2)
    for block in sk.blocks:
        qs = block.qubits
        assert list(qs) == list(range(qs[0], qs[0] + len(qs)))  # nearest neighbours


def test_tree_layout_ghz8():
    tree = tree_svd_pass(canonical_regex(GHZ_REGEX, 8))
    sk = tree_layout(tree)
    per_layer = [sum(1 for b in sk.blocks if b.layer == t) for t in range(sk.block_layers)]
    assert per_layer == [1, 2, 4]
    for t in range(sk.block_layers):
        used = [q for b in sk.blocks if b.layer == t for q in b.qubits]
        assert len(used) == len(set(used))


def test_tree_layout_small():
    assert len(tree_layout(tree_svd_pass(canonical_regex(W_REGEX, 2))).blocks) == 1
    sk = tree_layout(tree_svd_pass(canonical_regex(W_REGEX, 7)))
    assert sk.block_layers <= math.ceil(math.log2(7)) + 1


def test_decompose_x_and_h():
    assert decompose_unitary(X) == [Gate("x", (0,))]
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    gates = decompose_unitary(h)
    assert {g.name for g in gates} <= {"rz", "sx"}
    assert same_up_to_phase(gates_unitary(gates, 1), h, 1e-12)


def test_decompose_guards():
    with pytest.raises(SizeLimitError):
        decompose_unitary(np.eye(2**9))
    with pytest.raises(NotIsometricError):
        decompose_unitary(np.ones((2, 2)))
    with pytest.raises(ValueError):
        decompose_unitary(np.eye(3))


def test_qsd_cnot_counts():
    assert [qsd_cnot_count(n) for n in (1, 2, 3, 4)] == [0, 6, 36, 168]
    for n in (2, 3, 4):
        gates = decompose_unitary(unitary_group.rvs(2**n, random_state=n))
        assert sum(g.name == "cx" for g in gates) <= qsd_cnot_count(n) <= 4**n


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_unitary_round_trip(n, seed):
    u = unitary_group.rvs(2**n, random_state=seed) if n > 1 else unitary_group.rvs(2, random_state=seed)
    gates = decompose_unitary(u)
    assert {g.name for g in gates} <= {"cx", "rz", "sx", "x"}
    assert same_up_to_phase(gates_unitary(gates, n), u, 1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))), st.integers(0, 2**32 - 1),
       st.sampled_from([None, "qsd", "householder"]))
def test_isometry_round_trip(nm, seed, method):
    n, m = nm
    if method == "householder" and m == n:
        method = None
    v = unitary_group.rvs(2**n, random_state=seed)[:, : 2**m] if n > 1 else np.eye(2)[:, : 2**m]
    gates, used = decompose_isometry(v, method=method)
    u = gates_unitary(gates, n)[:, : 2**m]
    assert same_up_to_phase(u, v, 1e-9)


def test_real_sign_patterns_round_trip():
    # real states with negative entries exercise the phase diagonal
    rng = np.random.default_rng(0)
    for n in range(1, 6):
        psi = rng.normal(size=2**n)
        psi /= np.linalg.norm(psi)
        gates, method = decompose_isometry(psi.reshape(-1, 1))
        assert method == ("stateprep" if n else "trivial")
        assert same_up_to_phase(gates_unitary(gates, n)[:, 0], psi, 1e-10)


def test_method_choice():
    assert choose_method(3, 0) == "stateprep"
    assert choose_method(8, 1) == "householder"
    assert choose_method(3, 2) == "qsd"


def test_resource_report_examples():
    empty = resource_report(Circuit(3))
    assert (empty.depth, empty.gates_total, empty.ancillae) == (0, 0, 0)
    one = resource_report(Circuit(2, [Gate("cx", (0, 1))]))
    assert (one.depth, one.gates_total, one.cnots) == (1, 1, 1)
    par = resource_report(Circuit(4, [Gate("x", (0,)), Gate("x", (1,)), Gate("cx", (2, 3)), Gate("cx", (1, 2))]))
    assert par.depth == 2


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit(1, [Gate("h", (0,))])
    with pytest.raises(ValueError):
        Circuit(2, [Gate("cx", (0, 0))])
    with pytest.raises(ValueError):
        Circuit(1, [Gate("rz", (1,), 0.1)])


def test_qasm_and_json_emitters():
    circ = Circuit(2, [Gate("sx", (0,)), Gate("rz", (1,), 0.5), Gate("cx", (0, 1)), Gate("x", (1,))])
    text = to_qasm(circ)
    assert text.splitlines()[:3] == ["OPENQASM 3.0;", 'include "stdgates.inc";', "qubit[2] q;"]
    assert "rz(0.5) q[1];" in text and "cx q[0], q[1];" in text
    data = to_json(circ)
    assert data["qubits"] == 2
    assert data["gates"][2] == {"g": "cx", "q": [0, 1]}
    assert data["gates"][1] == {"g": "rz", "q": [1], "theta": 0.5}
    json.dumps(data)


def test_gate_definitions_agree_with_simulator():
    np.testing.assert_allclose(SX @ SX, X, atol=1e-15)
    circ = Circuit(1, [Gate("sx", (0,)), Gate("sx", (0,))])
    assert fidelity(simulate_circuit(circ), np.array([0, 1])) > 1 - 1e-14
    circ = Circuit(1, [Gate("rz", (0,), 0.7)])
    v = np.array([1, 1]) / np.sqrt(2)
    np.testing.assert_allclose(simulate_circuit(circ, v), rz(0.7) @ v, atol=1e-15)


@pytest.mark.parametrize("backend", ["seq", "tree"])
def test_w8_end_to_end(backend):
    mps = canonical_regex(W_REGEX, 8)
    sk = seq_layout(pad_isometries(mps), 8) if backend == "seq" else tree_layout(tree_svd_pass(mps))
    circ = synthesize(sk)
    assert fidelity(simulate_circuit(circ), uniform_vector(dicke_words(8, 1), 8)) >= 1 - 1e-9
    assert resource_report(circ, 8).ancillae == 0
    for block in circ.blocks:
        # every block stays on its own qubits
        assert all(set(g.qubits) <= set(block.qubits) for g in circ.gates[block.start:block.stop])


def test_diagonal_keeps_two_pi_relative_signs():
    # -pi and pi are the same phase, but RZ(2*pi) = -I; a controlled 2*pi
    # rotation is a relative sign, not a no-op
    from rlsc.synth.decompose import diagonal, lower

    for phases in ([-np.pi, np.pi, np.pi, np.pi], [0, 2 * np.pi, 0, 0, -np.pi, 0, np.pi, 0]):
        phases = np.array(phases)
        n = int(np.log2(len(phases)))
        ops = []
        diagonal(phases, tuple(range(n)), ops)
        assert same_up_to_phase(np.diag(gates_unitary(lower(ops), n)), np.exp(1j * phases), 1e-12)


def test_householder_sparse_real_isometry():
    # sparse real columns produce reflection phases of exactly +-pi
    v = np.zeros((16, 2))
    v[[0, 5, 9], 0] = 1 / np.sqrt(3)
    v[[0, 5], 1] = np.array([1, -1]) / np.sqrt(2)
    v[:, 1] -= v[:, 0] * (v[:, 0] @ v[:, 1])
    v[:, 1] /= np.linalg.norm(v[:, 1])
    gates, _ = decompose_isometry(v, method="householder")
    assert same_up_to_phase(gates_unitary(gates, 4)[:, :2], v, 1e-9)
