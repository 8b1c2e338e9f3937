"""User input to automata: regex parsing, Thompson NFAs, subset construction
and prefix-trie construction of DAG-DFAs from explicit word lists.

Regex grammar (single-character symbols)::

    union   := concat ('|' concat)*
    concat  := starred starred*
    starred := atom '*'*
    atom    := SYMBOL | '@' | '~' | '(' union ')'

``@`` is the empty word, ``~`` the empty language.  Star binds tighter than
concatenation, which binds tighter than union.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .automaton import BINARY, DagDfa, Dfa
from .errors import (
    EmptyLanguageError,
    InputError,
    LengthMismatchError,
    RegexSyntaxError,
    StateCapError,
    UnknownSymbolError,
)

DEFAULT_STATE_CAP = 10**6

_OPERATORS = set("|*()@~")


class Regex:
    """Base class of regex syntax tree nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class EmptySet(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Literal(Regex):
    symbol: str


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    child: Regex


@dataclass(frozen=True)
class RegexAst:
    root: Regex
    alphabet: tuple = BINARY

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Literal) and node.symbol not in self.alphabet:
                raise UnknownSymbolError(f"symbol {node.symbol!r} not in alphabet", 0)
            if isinstance(node, (Concat, Union)):
                stack.extend((node.left, node.right))
            elif isinstance(node, Star):
                stack.append(node.child)


class _Parser:
    def __init__(self, text, alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def offset(self, pos=None):
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def fail(self, message, pos=None):
        raise RegexSyntaxError(message, self.offset(pos))

    def parse(self):
        if not self.text:
            self.fail("empty regular expression")
        node = self.union()
        if self.pos != len(self.text):
            self.fail(f"unexpected {self.peek()!r}")
        return node

    def union(self):
        branches = [self.concat()]
        while self.peek() == "|":
            self.pos += 1
            branches.append(self.concat())
        return _fold(Union, branches)

    def concat(self):
        parts = []
        while (c := self.peek()) is not None and c not in "|)":
            parts.append(self.starred())
        if not parts:
            self.fail("expected an expression")
        return _fold(Concat, parts)

    def starred(self):
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            node = Star(node)
        return node

    def atom(self):
        c = self.peek()
        start = self.pos
        if c == "(":
            self.pos += 1
            node = self.union()
            if self.peek() != ")":
                self.fail("missing ')'")
            self.pos += 1
            return node
        if c == "@":
            self.pos += 1
            return Epsilon()
        if c == "~":
            self.pos += 1
            return EmptySet()
        if c == "*":
            self.fail("'*' without operand")
        if c in self.alphabet:
            self.pos += 1
            return Literal(c)
        raise UnknownSymbolError(f"symbol {c!r} not in alphabet {list(self.alphabet)}", self.offset(start))


def _fold(cls, items):
    node = items[-1]
    for item in reversed(items[:-1]):
        node = cls(item, node)
    return node


def parse_regex(text, alphabet=BINARY):
    """Parse ``text`` into a :class:`RegexAst` over ``alphabet``."""
    alphabet = tuple(alphabet)
    clash = _OPERATORS.intersection(alphabet)
    if clash:
        raise InputError(f"alphabet symbols {sorted(clash)} collide with regex operators")
    return RegexAst(_Parser(text, alphabet).parse(), alphabet)


@dataclass(frozen=True, eq=False)
class Nfa:
    """NFA with epsilon moves; ``edges[q]`` maps symbol index to target set."""

    alphabet: tuple
    n_states: int
    initial: frozenset
    accepting: frozenset
    edges: tuple
    eps: tuple

    def closure(self, states):
        seen = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for t in self.eps[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def accepts(self, word):
        index = {s: i for i, s in enumerate(self.alphabet)}
        current = self.closure(self.initial)
        for c in word:
            s = index[c]
            current = self.closure({t for q in current for t in self.edges[q].get(s, ())})
            if not current:
                return False
        return bool(current & self.accepting)


def regex_to_nfa(ast):
    """Thompson construction: one fresh (start, final) pair per syntax node."""
    index = {s: i for i, s in enumerate(ast.alphabet)}
    edges, eps = [], []

    def fresh():
        edges.append({})
        eps.append(set())
        return len(edges) - 1

    # iterative post-order with a value stack, so long concatenations do not
    # hit the recursion limit and shared subtrees get their own fragments
    frags = []
    stack = [(ast.root, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            stack.append((node, True))
            if isinstance(node, (Concat, Union)):
                stack.append((node.right, False))
                stack.append((node.left, False))
            elif isinstance(node, Star):
                stack.append((node.child, False))
            continue
        s, f = fresh(), fresh()
        if isinstance(node, Epsilon):
            eps[s].add(f)
        elif isinstance(node, Literal):
            edges[s].setdefault(index[node.symbol], set()).add(f)
        elif isinstance(node, Concat):
            (rs, rf), (ls, lf) = frags.pop(), frags.pop()
            eps[s].add(ls)
            eps[lf].add(rs)
            eps[rf].add(f)
        elif isinstance(node, Union):
            (rs, rf), (ls, lf) = frags.pop(), frags.pop()
            eps[s].update((ls, rs))
            eps[lf].add(f)
            eps[rf].add(f)
        elif isinstance(node, Star):
            cs, cf = frags.pop()
            eps[s].update((cs, f))
            eps[cf].update((cs, f))
        frags.append((s, f))
    start, final = frags.pop()
    return Nfa(
        ast.alphabet,
        len(edges),
        frozenset([start]),
        frozenset([final]),
        tuple({k: frozenset(v) for k, v in e.items()} for e in edges),
        tuple(frozenset(e) for e in eps),
    )


def _coreachable(table, accepting):
    """Boolean mask of states from which an accepting state is reachable."""
    n = table.shape[0]
    preds = [[] for _ in range(n)]
    for q, t in zip(*np.nonzero(table >= 0)):
        preds[table[q, t]].append(q)
    alive = np.zeros(n, dtype=bool)
    stack = list(accepting)
    alive[stack] = True
    while stack:
        q = stack.pop()
        for p in preds[q]:
            if not alive[p]:
                alive[p] = True
                stack.append(p)
    return alive


def bfs_renumber(table, initial, accepting, keep=None):
    """Restrict to ``keep`` states reachable from ``initial`` and renumber them
    breadth-first, visiting symbols in alphabet order."""
    if keep is None:
        keep = np.ones(table.shape[0], dtype=bool)
    order = {initial: 0}
    queue = deque([initial])
    rows = []
    while queue:
        q = queue.popleft()
        row = []
        for t in table[q]:
            t = int(t)
            if t < 0 or not keep[t]:
                row.append(-1)
                continue
            if t not in order:
                order[t] = len(order)
                queue.append(t)
            row.append(order[t])
        rows.append(row)
    new_table = np.array(rows, dtype=np.int64).reshape(len(rows), table.shape[1])
    new_accepting = frozenset(order[q] for q in accepting if q in order)
    return new_table, new_accepting


def determinize(nfa, state_cap=DEFAULT_STATE_CAP):
    """Subset construction with dead-state pruning and canonical BFS numbering."""
    d = len(nfa.alphabet)
    start = nfa.closure(nfa.initial)
    ids = {start: 0}
    subsets = [start]
    rows = []
    i = 0
    while i < len(subsets):
        current = subsets[i]
        row = []
        for s in range(d):
            moved = {t for q in current for t in nfa.edges[q].get(s, ())}
            if not moved:
                row.append(-1)
                continue
            target = nfa.closure(moved)
            if target not in ids:
                if len(subsets) >= state_cap:
                    raise StateCapError(f"subset construction exceeded the state cap of {state_cap}")
                ids[target] = len(subsets)
                subsets.append(target)
            row.append(ids[target])
        rows.append(row)
        i += 1
    table = np.array(rows, dtype=np.int64).reshape(len(rows), d)
    accepting = frozenset(k for k, sub in enumerate(subsets) if sub & nfa.accepting)
    alive = _coreachable(table, accepting)
    if not alive[0]:
        return Dfa(nfa.alphabet, np.full((1, d), -1, dtype=np.int64), 0, frozenset())
    table, accepting = bfs_renumber(table, 0, accepting, keep=alive)
    return Dfa(nfa.alphabet, table, 0, accepting)


def regex_to_dfa(text, alphabet=BINARY, state_cap=DEFAULT_STATE_CAP):
    return determinize(regex_to_nfa(parse_regex(text, alphabet)), state_cap)


def strings_to_dagdfa(words, n=None, alphabet=BINARY):
    """Prefix trie of ``words`` with every length-``n`` endpoint merged into the
    single accepting state.  States of each layer are numbered by (parent,
    symbol), which is the canonical breadth-first order."""
    alphabet = tuple(alphabet)
    words = sorted(set(words))
    if not words:
        raise EmptyLanguageError("the word set is empty; there is no state to prepare")
    if n is None:
        n = len(words[0])
    bad = next((w for w in words if len(w) != n), None)
    if bad is not None:
        raise LengthMismatchError(f"word {bad!r} has length {len(bad)}, expected {n}")
    if n < 1:
        raise LengthMismatchError("words must have length at least 1")
    d = len(alphabet)
    lookup = np.full(256, -1, dtype=np.int64)
    for i, s in enumerate(alphabet):
        if len(s) != 1 or ord(s) > 255:
            raise InputError("string-set input requires single-byte alphabet symbols")
        lookup[ord(s)] = i
    try:
        raw = np.frombuffer("".join(words).encode("latin-1"), dtype=np.uint8)
    except UnicodeEncodeError:
        raise InputError("word contains a symbol outside the alphabet") from None
    symbols = lookup[raw].reshape(len(words), n)
    if (symbols < 0).any():
        w, c = map(int, np.argwhere(symbols < 0)[0])
        raise InputError(f"word {words[w]!r} uses symbol {words[w][c]!r} outside alphabet {list(alphabet)}")
    prefix = np.zeros(len(words), dtype=np.int64)
    n_prev = 1
    tables = []
    for i in range(n):
        key = prefix * d + symbols[:, i]
        uniq, inverse = np.unique(key, return_inverse=True)
        if i == n - 1:
            inverse = np.zeros_like(inverse)
            targets = np.zeros(len(uniq), dtype=np.int64)
        else:
            targets = np.arange(len(uniq), dtype=np.int64)
        table = np.full(n_prev * d, -1, dtype=np.int64)
        table[uniq] = targets
        tables.append(table.reshape(n_prev, d))
        prefix = inverse.reshape(-1)
        n_prev = len(uniq)
    return DagDfa(alphabet, tuple(tables))


def read_words(path):
    """Read a UTF-8 word list, one word per line; blank lines are ignored."""
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]
