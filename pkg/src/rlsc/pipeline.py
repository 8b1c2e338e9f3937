"""The compile pipeline: input -> automaton -> MPS -> isometries -> circuit.

Every stage is timed and failures are re-raised as :class:`StageError`
carrying the stage name (and the original exit code).
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import product

from .automata import complement_dagdfa, complement_dfa, count_words, minimize_dagdfa, minimize_dfa, unroll_dfa
from .automaton import BINARY, DagDfa, Dfa
from .errors import InputError, RlscError, StageError, VerificationError
from .frontend import DEFAULT_STATE_CAP, read_words, regex_to_dfa, strings_to_dagdfa
from .mps import TAU, dagdfa_to_mps, sequential_svd_pass
from .synth.circuit import resource_report
from .synth.isometry import pad_isometries
from .synth.layout import seq_layout, synthesize, tree_layout
from .tree import tree_svd_pass

VERIFY_MAX_N = 12
FIDELITY_TOL = 1e-9
BACKENDS = ("seq", "tree")
KINDS = ("strings", "regex", "dfa", "words")


@dataclass
class CompileConfig:
    """``kind`` is strings (path), words (in-memory list), regex (text) or dfa
    (path or parsed JSON dict)."""

    kind: str
    source: object
    n: int | None = None
    complement: bool = False
    backend: str = "seq"
    emit: tuple = ("qasm", "report")
    verify: bool = False
    state_cap: int = DEFAULT_STATE_CAP
    tol: float = TAU
    out_dir: str | None = None
    minimize: bool = True
    alphabet: tuple = BINARY

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown input kind {self.kind!r}")
        if self.backend not in BACKENDS:
            raise InputError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.n is not None and self.n < 1:
            raise InputError("length must be at least 1")
        if self.kind in ("regex", "dfa") and self.n is None:
            raise InputError("--length is required for regex and DFA inputs")


@dataclass
class CompileResult:
    config: CompileConfig
    source_automaton: object = None
    dag: DagDfa | None = None
    d_init: int = 0
    d_min_dfa: int = 0
    mps: object = None
    canonical: object = None
    profile: object = None
    tree: object = None
    skeleton: object = None
    circuit: object = None
    resources: object = None
    words_total: int = 0
    fidelity: float | None = None
    stage_times_ms: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.dag.n

    @property
    def chi(self):
        return self.profile.chi if self.profile else None

    def report(self, timings=True):
        out = {}
        if self.resources is not None:
            r = self.resources
            out.update(depth=r.depth, gates_total=r.gates_total, cnots=r.cnots, ancillae=r.ancillae)
        out.update(chi=self.chi, d_min_dfa=self.d_min_dfa)
        if timings:
            out["stage_times_ms"] = {k: round(v, 3) for k, v in self.stage_times_ms.items()}
        out.update(
            n=self.n,
            backend=self.config.backend,
            complement=self.config.complement,
            minimized=self.config.minimize,
            d_init=self.d_init,
            dag_layer_sizes=list(self.dag.layer_sizes),
            words=self.words_total,
            schmidt_profile=list(self.profile.ranks) if self.profile else None,
        )
        if self.skeleton is not None:
            sk = self.skeleton
            out.update(
                block_widths=list(sk.widths),
                block_layers=sk.block_layers,
                n_blocks=len(sk.blocks),
                estimated_cnots=sk.estimated_cnots(),
            )
        if self.tree is not None:
            out.update(tree_layers=self.tree.n_layers, tree_max_vertical=self.tree.max_vertical,
                       tree_max_horizontal=self.tree.max_horizontal)
        if self.circuit is not None:
            methods = {}
            for b in self.circuit.blocks:
                methods[b.method] = methods.get(b.method, 0) + 1
            out["block_methods"] = dict(sorted(methods.items()))
        if self.fidelity is not None:
            out["fidelity"] = self.fidelity
        return out


class _Stages:
    def __init__(self, times):
        self.times = times

    @contextmanager
    def __call__(self, name):
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except RlscError as exc:
            raise StageError(name, exc) from exc
        finally:
            self.times[name] = self.times.get(name, 0.0) + 1000 * (time.perf_counter() - start)


def _load(cfg):
    if cfg.kind in ("strings", "words"):
        words = read_words(cfg.source) if cfg.kind == "strings" else list(cfg.source)
        return strings_to_dagdfa(words, cfg.n, cfg.alphabet)
    if cfg.kind == "regex":
        return regex_to_dfa(cfg.source, cfg.alphabet, cfg.state_cap)
    if isinstance(cfg.source, dict):
        return Dfa.from_json(cfg.source)
    return Dfa.load(cfg.source)


def _oracle_words(result):
    """Accepted words computed from the unprocessed input, independent of the
    automaton passes."""
    from .verify import enumerate_language

    cfg, n, src = result.config, result.n, result.source_automaton
    words = enumerate_language(src, n) if isinstance(src, Dfa) else enumerate_language(src)
    if cfg.complement:
        alphabet = src.alphabet
        words = {"".join(w) for w in product(alphabet, repeat=n)} - words
    return words


def run_pipeline(cfg, synthesize_circuit=True):
    """Run all stages for ``cfg``; ``synthesize_circuit=False`` stops after layout."""
    result = CompileResult(cfg)
    stage = _Stages(result.stage_times_ms)

    with stage("frontend"):
        auto = _load(cfg)
        result.source_automaton = auto
        if isinstance(auto, DagDfa):
            if cfg.n is not None and cfg.n != auto.n:
                raise InputError(f"words have length {auto.n} but --length is {cfg.n}")
            result.d_init = auto.width
        else:
            result.d_init = auto.n_states
    n = cfg.n if cfg.n is not None else auto.n

    if isinstance(auto, Dfa):
        with stage("minimize"):
            if cfg.minimize or cfg.complement:
                auto, _ = minimize_dfa(auto)
        if cfg.complement:
            with stage("complement"):
                auto = complement_dfa(auto)
        result.d_min_dfa = auto.n_states
        with stage("unroll"):
            dag = unroll_dfa(auto, n)
        if cfg.minimize:
            with stage("minimize"):
                dag, _ = minimize_dagdfa(dag)
    else:
        dag = auto
        if cfg.complement:
            with stage("complement"):
                dag = complement_dagdfa(dag)
        elif cfg.minimize:
            with stage("minimize"):
                dag, _ = minimize_dagdfa(dag)
        result.d_min_dfa = dag.width
    result.dag = dag
    result.words_total = count_words(dag)

    with stage("mps"):
        result.mps = dagdfa_to_mps(dag)
    with stage("svd"):
        result.canonical, result.profile = sequential_svd_pass(result.mps, cfg.tol)
    with stage("layout"):
        if cfg.backend == "tree":
            result.tree = tree_svd_pass(result.canonical, cfg.tol)
            result.skeleton = tree_layout(result.tree)
        else:
            result.skeleton = seq_layout(pad_isometries(result.canonical), n)
    if synthesize_circuit:
        with stage("synth"):
            result.circuit = synthesize(result.skeleton)
            result.resources = resource_report(result.circuit, n)
    if cfg.verify:
        with stage("verify"):
            verify_result(result)
    return result


def verify_result(result):
    """Simulate the circuit and compare with the enumeration oracle."""
    from .verify import TargetState, fidelity, simulate_circuit

    if result.n > VERIFY_MAX_N:
        raise InputError(f"verification is limited to N <= {VERIFY_MAX_N} (got {result.n})")
    words = _oracle_words(result)
    if len(words) != result.words_total:
        raise VerificationError(f"word count mismatch: automaton {result.words_total}, oracle {len(words)}")
    target = TargetState.from_words(words, result.n)
    result.fidelity = fidelity(simulate_circuit(result.circuit), target.amplitudes)
    if result.fidelity < 1 - FIDELITY_TOL:
        raise VerificationError(f"fidelity {result.fidelity:.12f} below 1 - {FIDELITY_TOL:g}")
    return result.fidelity
