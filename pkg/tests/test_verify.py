import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_words, uniform_vector
from rlsc import _kernels
from rlsc._kernels import _fallback
from rlsc.automata import complement_dfa, minimize_dagdfa, minimize_dfa, unroll_dfa
from rlsc.errors import SizeLimitError
from rlsc.families import GHZ_REGEX, dicke_regex
from rlsc.frontend import regex_to_dfa, strings_to_dagdfa
from rlsc.pipeline import CompileConfig, run_pipeline
from rlsc.synth import Circuit, Gate
from rlsc.verify import TargetState, compile_program, enumerate_language, fidelity, simulate_circuit


def test_enumerate_examples():
    f1, _ = minimize_dfa(regex_to_dfa("0*10*"))
    assert enumerate_language(f1, 3) == {"001", "010", "100"}
    assert enumerate_language(regex_to_dfa(dicke_regex(3)), 4) == {"0111", "1011", "1101", "1110"}
    comp = unroll_dfa(complement_dfa(f1), 3)
    assert enumerate_language(comp) == set(all_words(3)) - {"001", "010", "100"}


def test_enumerate_guard():
    with pytest.raises(SizeLimitError):
        enumerate_language(regex_to_dfa("(0|1)*"), 23)


def test_target_state():
    t = TargetState.from_words({"01", "10"})
    np.testing.assert_allclose(t.amplitudes, [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0])
    assert abs(np.linalg.norm(t.amplitudes) - 1) < 1e-14
    t2 = TargetState.from_automaton(strings_to_dagdfa(["01", "10"]))
    np.testing.assert_array_equal(t.amplitudes, t2.amplitudes)


def test_simulate_examples():
    np.testing.assert_allclose(simulate_circuit(Circuit(1, [Gate("x", (0,))])), [0, 1])
    out = simulate_circuit(Circuit(1, [Gate("sx", (0,)), Gate("sx", (0,))]))
    assert fidelity(out, np.array([0, 1])) > 1 - 1e-14
    # qubit 0 is the most significant bit
    np.testing.assert_allclose(simulate_circuit(Circuit(2, [Gate("x", (0,))])), [0, 0, 1, 0])
    out = simulate_circuit(Circuit(2, [Gate("x", (0,)), Gate("cx", (0, 1))]))
    np.testing.assert_allclose(out, [0, 0, 0, 1])


def test_simulate_guard():
    with pytest.raises(SizeLimitError):
        simulate_circuit(Circuit(21))


def test_ghz_four_end_to_end():
    result = run_pipeline(CompileConfig("regex", GHZ_REGEX, 4))
    out = simulate_circuit(result.circuit)
    target = np.zeros(16)
    target[[0, 15]] = 1 / np.sqrt(2)
    assert fidelity(out, target) > 1 - 1e-12


def test_fidelity_examples():
    rng = np.random.default_rng(0)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    v /= np.linalg.norm(v)
    assert abs(fidelity(v, v) - 1) < 1e-14
    assert fidelity(np.array([1, 0]), np.array([0, 1])) == 0
    assert abs(fidelity(v, np.exp(0.7j) * v) - 1) < 1e-14
    with pytest.raises(ValueError):
        fidelity(v, v[:4] / np.linalg.norm(v[:4]))
    with pytest.raises(ValueError):
        fidelity(v, 2 * v)


def test_target_matches_canonical_mps():
    from rlsc.mps import dagdfa_to_mps, mps_to_statevector, sequential_svd_pass

    dag, _ = minimize_dagdfa(strings_to_dagdfa(["0110", "1001", "1111", "0000", "0101"]))
    mps, _ = sequential_svd_pass(dagdfa_to_mps(dag))
    v = mps_to_statevector(mps)
    t = TargetState.from_automaton(dag).amplitudes
    np.testing.assert_allclose(v * np.sign(v @ t), t, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10).flatmap(lambda n: st.sets(st.text("01", min_size=n, max_size=n), min_size=1)))
def test_enumeration_stable_under_minimization(words):
    dag = strings_to_dagdfa(words)
    assert enumerate_language(minimize_dagdfa(dag)[0]) == enumerate_language(dag) == words


def _random_program(rng, n, length):
    gates = []
    for _ in range(length):
        kind = rng.integers(4)
        if kind == 0 and n > 1:
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(Gate("cx", (int(c), int(t))))
        elif kind == 1:
            gates.append(Gate("rz", (int(rng.integers(n)),), float(rng.normal())))
        elif kind == 2:
            gates.append(Gate("sx", (int(rng.integers(n)),)))
        else:
            gates.append(Gate("x", (int(rng.integers(n)),)))
    return gates


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_kernels_agree(n):
    rng = np.random.default_rng(n)
    gates = _random_program(rng, n, 200)
    ops, mats = compile_program(gates)
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    a = _kernels.run_program(psi.copy(), n, ops, mats)
    b = _fallback.run_program(psi.copy(), n, ops, mats)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_layered_accept_kernels_agree():
    dfa = regex_to_dfa("(0|1)*11(0|1)*")
    tables = [dfa.table] * 9
    flat = np.concatenate([t.reshape(-1) for t in tables]).astype(np.int64)
    offsets = np.cumsum([0] + [t.size for t in tables[:-1]]).astype(np.int64)
    accept = np.zeros(dfa.n_states, dtype=np.uint8)
    accept[list(dfa.accepting)] = 1
    a = _kernels.layered_accept(flat, offsets, 2, 9, 0, accept)
    b = _fallback.layered_accept(flat, offsets, 2, 9, 0, accept)
    np.testing.assert_array_equal(np.asarray(a), b)
    assert int(np.asarray(a).sum()) == sum("11" in w for w in all_words(9))


def test_kernel_backend_selected():
    assert _kernels.BACKEND in ("cython", "python")
