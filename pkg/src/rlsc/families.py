"""Benchmark state families: Dicke-k, W, GHZ, complements and random sets."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import InputError

GHZ_REGEX = "0*|1*"
FULL_REGEX = "(0|1)*"


def dicke_regex(k):
    """Words with exactly ``k`` ones."""
    return "0*" + "10*" * k


W_REGEX = dicke_regex(1)


def dicke_words(n, k):
    if not 0 <= k <= n:
        raise InputError(f"Dicke weight {k} impossible at length {n}")
    out = []
    for ones in combinations(range(n), k):
        w = ["0"] * n
        for i in ones:
            w[i] = "1"
        out.append("".join(w))
    return out


def w_words(n):
    return dicke_words(n, 1)


def ghz_words(n):
    return ["0" * n, "1" * n]


def random_words(n, s, seed=0):
    """``s`` distinct uniformly random words of length ``n``."""
    if s < 1 or (n < 63 and s > 1 << n):
        raise InputError(f"cannot draw {s} distinct words of length {n}")
    rng = np.random.default_rng(seed)
    if n <= 20:
        picks = rng.choice(1 << n, size=s, replace=False)
        return [format(int(p), f"0{n}b") for p in sorted(picks)]
    seen = set()
    while len(seen) < s:
        seen.add("".join(rng.choice(["0", "1"], size=n)))
    return sorted(seen)
