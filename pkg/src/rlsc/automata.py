"""Optimisation passes over the automaton IR: minimisation, complement,
unrolling to fixed length, and exact word counting."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .automaton import DagDfa, Dfa
from .errors import EmptyComplementError, EmptyLanguageError
from .frontend import _coreachable, bfs_renumber


@dataclass(frozen=True)
class MinimizationReport:
    states_before: int
    states_after: int
    d_init: int
    d_min: int
    elapsed: float


def _empty_dfa(alphabet):
    return Dfa(alphabet, np.full((1, len(alphabet)), -1, dtype=np.int64), 0, frozenset())


def _complete(table):
    """Add an explicit sink (last index) receiving every undefined transition."""
    n, d = table.shape
    full = np.vstack([table, np.full((1, d), n, dtype=np.int64)])
    full[full < 0] = n
    return full


def _hopcroft(table, accepting):
    """Coarsest stable partition of a complete DFA; returns a class id per state."""
    n, d = table.shape
    inverse = [[[] for _ in range(n)] for _ in range(d)]
    for q in range(n):
        for s in range(d):
            inverse[s][table[q, s]].append(q)
    acc = set(accepting)
    blocks = [b for b in (sorted(acc), sorted(set(range(n)) - acc)) if b]
    block_of = np.empty(n, dtype=np.int64)
    members = []
    for i, b in enumerate(blocks):
        block_of[b] = i
        members.append(set(b))
    work = {min(range(len(members)), key=lambda i: len(members[i]))} if len(members) == 2 else set()
    while work:
        a = work.pop()
        splitter = list(members[a])
        for s in range(d):
            x = {p for q in splitter for p in inverse[s][q]}
            if not x:
                continue
            touched = {}
            for p in x:
                touched.setdefault(int(block_of[p]), set()).add(p)
            for y, inside in sorted(touched.items()):
                if len(inside) == len(members[y]):
                    continue
                members[y] -= inside
                z = len(members)
                members.append(inside)
                block_of[list(inside)] = z
                if y in work:
                    work.add(z)
                else:
                    work.add(z if len(inside) <= len(members[y]) else y)
    return block_of


def minimize_dfa(dfa):
    """Minimal partial DFA (dead states pruned) with canonical BFS numbering."""
    start = time.perf_counter()
    table, accepting = bfs_renumber(dfa.table, dfa.initial, dfa.accepting)
    full = _complete(table)
    block_of = _hopcroft(full, accepting)
    n_blocks = int(block_of.max()) + 1
    quotient = np.full((n_blocks, dfa.d), -1, dtype=np.int64)
    for q in range(full.shape[0]):
        quotient[block_of[q]] = block_of[full[q]]
    q_accepting = frozenset(int(block_of[q]) for q in accepting)
    alive = _coreachable(quotient, q_accepting)
    init = int(block_of[0])
    if not alive[init]:
        result = _empty_dfa(dfa.alphabet)
    else:
        t, acc = bfs_renumber(quotient, init, q_accepting, keep=alive)
        result = Dfa(dfa.alphabet, t, 0, acc)
    report = MinimizationReport(dfa.n_states, result.n_states, dfa.n_states, result.n_states,
                                time.perf_counter() - start)
    return result, report


def complement_dfa(dfa):
    """Minimal DFA of the complement language over all finite words."""
    table = _complete(dfa.table)
    sink = table.shape[0] - 1
    accepting = frozenset(set(range(sink + 1)) - set(dfa.accepting))
    return minimize_dfa(Dfa(dfa.alphabet, table, dfa.initial, accepting))[0]


def _map_targets(table, mapping):
    """Relabel targets of ``table`` through ``mapping``; -1 stays -1."""
    out = np.full(table.shape, -1, dtype=np.int64)
    defined = table >= 0
    out[defined] = mapping[table[defined]]
    return out


def minimize_dagdfa(dag):
    """Acyclic minimisation by right-to-left signature merging.

    States whose rows of (symbol -> class of target) coincide are merged; dead
    and unreachable states are dropped.  The result is renumbered breadth-first.
    """
    start = time.perf_counter()
    n = dag.n
    reach = [np.ones(1, dtype=bool)]
    for i, table in enumerate(dag.tables[:-1]):
        rows = table[reach[-1]]
        mask = np.zeros(dag.layer_sizes[i + 1], dtype=bool)
        mask[rows[rows >= 0]] = True
        reach.append(mask)

    cls_next = np.zeros(1, dtype=np.int64)
    class_tables = [None] * n
    for i in range(n - 1, -1, -1):
        sig = _map_targets(dag.tables[i], cls_next)
        live = reach[i] & (sig >= 0).any(axis=1)
        cls = np.full(sig.shape[0], -1, dtype=np.int64)
        if live.any():
            uniq, inverse = np.unique(sig[live], axis=0, return_inverse=True)
            cls[live] = inverse.reshape(-1)
            class_tables[i] = uniq
        else:
            class_tables[i] = np.zeros((0, dag.d), dtype=np.int64)
        cls_next = cls
    if cls_next[0] < 0:
        raise EmptyLanguageError("the automaton accepts no word of the requested length")

    order = np.array([cls_next[0]], dtype=np.int64)
    tables = []
    for i in range(n):
        rows = class_tables[i][order]
        flat = rows.reshape(-1)
        valid = flat[flat >= 0]
        _, first = np.unique(valid, return_index=True)
        next_order = valid[np.sort(first)]
        relabel = np.full(class_tables[i + 1].shape[0] if i + 1 < n else 1, -1, dtype=np.int64)
        relabel[next_order] = np.arange(len(next_order))
        tables.append(_map_targets(rows, relabel))
        order = next_order
    result = DagDfa(dag.alphabet, tuple(tables))
    report = MinimizationReport(dag.n_states, result.n_states, dag.width, result.width,
                                time.perf_counter() - start)
    return result, report


def complement_dagdfa(dag):
    """DAG-DFA for the length-n complement, built with one sink per layer.

    Undefined transitions are redirected to the next layer's sink, sinks feed
    each other on every symbol, the old accepting state is deleted and the
    last sink becomes the accepting state.  The result is re-minimised.
    """
    dag, _ = minimize_dagdfa(dag)
    if all((t >= 0).all() for t in dag.tables):
        raise EmptyComplementError("the language already contains every word of this length")
    n, d = dag.n, dag.d
    sizes = dag.layer_sizes
    tables = []
    for i, table in enumerate(dag.tables):
        last = i == n - 1
        sink_next = 0 if last else sizes[i + 1]
        rows = table.copy()
        if last:
            defined = rows >= 0
            rows[defined] = -1
            rows[~defined] = 0
        else:
            rows[rows < 0] = sink_next
        if i > 0:
            rows = np.vstack([rows, np.full((1, d), sink_next, dtype=np.int64)])
        tables.append(rows)
    return minimize_dagdfa(DagDfa(dag.alphabet, tuple(tables)))[0]


def unroll_dfa(dfa, n):
    """Slice ``L`` to words of length ``n`` as a trimmed layered automaton."""
    if n < 1:
        raise ValueError("n must be at least 1")
    q = dfa.n_states
    table = dfa.table
    reach = [np.zeros(q, dtype=bool)]
    reach[0][dfa.initial] = True
    for _ in range(n):
        targets = table[reach[-1]]
        nxt = np.zeros(q, dtype=bool)
        nxt[targets[targets >= 0]] = True
        reach.append(nxt)
    accept = np.zeros(q, dtype=bool)
    accept[list(dfa.accepting)] = True
    alive = [None] * (n + 1)
    alive[n] = reach[n] & accept
    padded = np.vstack([table, np.full((1, dfa.d), -1, dtype=np.int64)])
    padded[padded < 0] = q
    for i in range(n - 1, -1, -1):
        ok = np.append(alive[i + 1], False)
        alive[i] = reach[i] & ok[padded[:q]].any(axis=1)
    if not alive[0][dfa.initial]:
        raise EmptyLanguageError(f"the language has no word of length {n}")
    tables = []
    for i in range(n):
        states = np.flatnonzero(alive[i])
        if i == n - 1:
            index = np.where(alive[n], 0, -1)
        else:
            index = np.full(q, -1, dtype=np.int64)
            index[alive[i + 1]] = np.arange(int(alive[i + 1].sum()))
        index = np.append(index, -1)
        tables.append(index[padded[states]])
    return DagDfa(dfa.alphabet, tuple(tables))


def count_words(dag):
    """Exact number of accepted words (arbitrary precision)."""
    counts = np.array([1], dtype=object)
    for table, size in zip(dag.tables, dag.layer_sizes[1:]):
        nxt = np.zeros(size, dtype=object)
        src, _ = np.nonzero(table >= 0)
        np.add.at(nxt, table[table >= 0], counts[src])
        counts = nxt
    return int(counts[0])
