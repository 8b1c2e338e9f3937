"""Automaton data types: partial DFAs and layered DAG-DFAs.

Transition functions are stored as integer tables indexed by
``[state, symbol_index]``; ``-1`` marks an undefined transition.  Symbols are
single characters and their position in ``alphabet`` fixes the symbol index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError

BINARY = ("0", "1")


def encode_word(word, alphabet):
    """Translate a word into a tuple of symbol indices."""
    index = {s: i for i, s in enumerate(alphabet)}
    try:
        return tuple(index[c] for c in word)
    except KeyError as exc:
        raise InputError(f"symbol {exc.args[0]!r} not in alphabet {list(alphabet)}") from None


def decode_word(symbols, alphabet):
    return "".join(alphabet[s] for s in symbols)


@dataclass(frozen=True, eq=False)
class Dfa:
    """Deterministic automaton with a partial transition function."""

    alphabet: tuple
    table: np.ndarray
    initial: int
    accepting: frozenset

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "accepting", frozenset(int(q) for q in self.accepting))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        n = table.shape[0]
        if table.ndim != 2 or table.shape[1] != len(self.alphabet):
            raise InputError(f"transition table shape {table.shape} does not match alphabet size")
        if not 0 <= self.initial < n:
            raise InputError(f"initial state {self.initial} out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise InputError("accepting state out of range")
        if table.size and (table.min() < -1 or table.max() >= n):
            raise InputError("transition target out of range")

    @property
    def n_states(self):
        return self.table.shape[0]

    @property
    def d(self):
        return len(self.alphabet)

    def accepts(self, word):
        state = self.initial
        for s in encode_word(word, self.alphabet):
            state = self.table[state, s]
            if state < 0:
                return False
        return int(state) in self.accepting

    def same_as(self, other):
        """Exact structural equality (same numbering)."""
        return (
            self.alphabet == other.alphabet
            and self.initial == other.initial
            and self.accepting == other.accepting
            and np.array_equal(self.table, other.table)
        )

    def to_json(self):
        transitions = [
            [q, self.alphabet[s], int(t)]
            for q in range(self.n_states)
            for s in range(self.d)
            if (t := self.table[q, s]) >= 0
        ]
        return {
            "alphabet": list(self.alphabet),
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": transitions,
        }

    @classmethod
    def from_json(cls, data, alphabet=None):
        """Build a DFA from the ``states/initial/accepting/transitions`` schema."""
        try:
            n = int(data["states"])
            initial = int(data["initial"])
            accepting = [int(q) for q in data["accepting"]]
            transitions = data["transitions"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed DFA description: {exc}") from None
        alphabet = tuple(alphabet or data.get("alphabet") or BINARY)
        if n < 1:
            raise InputError("a DFA needs at least one state")
        index = {s: i for i, s in enumerate(alphabet)}
        table = np.full((n, len(alphabet)), -1, dtype=np.int64)
        for entry in transitions:
            try:
                q, sym, t = entry
                q, t = int(q), int(t)
            except (TypeError, ValueError):
                raise InputError(f"malformed transition {entry!r}") from None
            if str(sym) not in index:
                raise InputError(f"transition symbol {sym!r} not in alphabet {list(alphabet)}")
            if not (0 <= q < n and 0 <= t < n):
                raise InputError(f"transition {entry!r} references a missing state")
            s = index[str(sym)]
            if table[q, s] >= 0 and table[q, s] != t:
                raise InputError(f"state {q} has two transitions on {sym!r}")
            table[q, s] = t
        return cls(alphabet, table, initial, frozenset(accepting))

    @classmethod
    def load(cls, path, alphabet=None):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_json(data, alphabet)


@dataclass(frozen=True, eq=False)
class DagDfa:
    """Layered acyclic automaton recognising a language of words of length ``n``.

    ``tables[i]`` maps the states of layer ``i`` to states of layer ``i + 1``.
    Layer 0 holds the initial state and layer ``n`` the single accepting state.
    """

    alphabet: tuple
    tables: tuple

    def __post_init__(self):
        tables = tuple(np.asarray(t, dtype=np.int64).reshape(-1, len(self.alphabet)) for t in self.tables)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not tables:
            raise InputError("a DAG-DFA needs at least one layer of transitions")
        if tables[0].shape[0] != 1:
            raise InputError("layer 0 must contain exactly one state")
        sizes = self.layer_sizes
        for i, t in enumerate(tables):
            if t.size and (t.min() < -1 or t.max() >= sizes[i + 1]):
                raise InputError(f"layer {i + 1} transition target out of range")

    @property
    def n(self):
        return len(self.tables)

    @property
    def d(self):
        return len(self.alphabet)

    @property
    def layer_sizes(self):
        return tuple(t.shape[0] for t in self.tables) + (1,)

    @property
    def width(self):
        return max(self.layer_sizes)

    @property
    def n_states(self):
        return sum(self.layer_sizes)

    def accepts(self, word):
        if len(word) != self.n:
            return False
        state = 0
        for table, s in zip(self.tables, encode_word(word, self.alphabet)):
            state = table[state, s]
            if state < 0:
                return False
        return True

    def same_as(self, other):
        return (
            self.alphabet == other.alphabet
            and self.n == other.n
            and all(np.array_equal(a, b) for a, b in zip(self.tables, other.tables))
        )

    def to_json(self):
        transitions = []
        for i, table in enumerate(self.tables, start=1):
            for q, s in zip(*np.nonzero(table >= 0)):
                transitions.append([i, int(q), self.alphabet[s], int(table[q, s])])
        return {
            "n": self.n,
            "alphabet": list(self.alphabet),
            "layer_sizes": list(self.layer_sizes),
            "transitions": transitions,
        }

    @classmethod
    def from_json(cls, data):
        alphabet = tuple(data.get("alphabet") or BINARY)
        index = {s: i for i, s in enumerate(alphabet)}
        sizes = [int(x) for x in data["layer_sizes"]]
        n = int(data["n"])
        if len(sizes) != n + 1 or sizes[0] != 1 or sizes[-1] != 1:
            raise InputError("layer_sizes must have n+1 entries with single boundary states")
        tables = [np.full((sizes[i], len(alphabet)), -1, dtype=np.int64) for i in range(n)]
        for layer, q, sym, t in data["transitions"]:
            tables[int(layer) - 1][int(q), index[str(sym)]] = int(t)
        return cls(alphabet, tuple(tables))
