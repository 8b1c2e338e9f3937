"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both kernels run on identical inputs; the script checks that they agree and
prints best-of-repeat wall times.
"""

import argparse
import time

import numpy as np

from rlsc import _kernels
from rlsc._kernels import _fallback
from rlsc.families import dicke_regex
from rlsc.frontend import regex_to_dfa
from rlsc.pipeline import CompileConfig, run_pipeline
from rlsc.verify import compile_program


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def bench_simulation(n, repeat):
    circ = run_pipeline(CompileConfig("regex", dicke_regex(3), n, backend="seq")).circuit
    ops, mats = compile_program(circ.gates)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    fast, a = best_of(lambda: _kernels.run_program(psi.copy(), n, ops, mats), repeat)
    slow, b = best_of(lambda: _fallback.run_program(psi.copy(), n, ops, mats), repeat)
    assert np.allclose(a, b, atol=1e-12)
    return f"run_program N={n} ({len(circ.gates)} gates)", fast, slow


def bench_acceptance(n, repeat):
    dfa = regex_to_dfa("(0|1)*1(0|1)(0|1)(0|1)")
    flat = np.tile(dfa.table.reshape(-1), n).astype(np.int64)
    offsets = np.arange(n, dtype=np.int64) * dfa.table.size
    accept = np.zeros(dfa.n_states, dtype=np.uint8)
    accept[list(dfa.accepting)] = 1
    fast, a = best_of(lambda: _kernels.layered_accept(flat, offsets, 2, n, 0, accept), repeat)
    slow, b = best_of(lambda: _fallback.layered_accept(flat, offsets, 2, n, 0, accept), repeat)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    return f"layered_accept N={n} ({dfa.n_states} states)", fast, slow


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"compiled backend: {_kernels.BACKEND}")
    if _kernels.BACKEND != "cython":
        print("compiled kernels unavailable; both columns time the fallback")
    print(f"{'kernel':<42}{'compiled ms':>12}{'numpy ms':>12}{'speedup':>9}")
    cases = [bench_simulation(n, args.repeat) for n in (10, 14, 18)]
    cases += [bench_acceptance(n, args.repeat) for n in (12, 16, 20)]
    for name, fast, slow in cases:
        print(f"{name:<42}{fast * 1e3:>12.2f}{slow * 1e3:>12.2f}{slow / fast:>8.1f}x")


if __name__ == "__main__":
    main()
