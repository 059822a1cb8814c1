"""Brute-force reference implementations used to cross-check the fast paths.

These work on raw (prefix, period) term lists and never use canonical forms,
so they share no logic with the code they check.
"""
from __future__ import annotations

import math


def term(prefix, period, i):
    if i < len(prefix):
        return prefix[i]
    return period[(i - len(prefix)) % len(period)]


def terms(u, depth: int, start: int = 0) -> tuple:
    """Entries start .. start+depth-1 of an EpSeq-like value (prefix, period)."""
    prefix, period = u.prefix, u.period
    return tuple(term(prefix, period, i) for i in range(start, start + depth))


def termwise_compare(cmp, a: tuple, b: tuple) -> int:
    for x, y in zip(a, b):
        c = cmp(x, y)
        if c:
            return int(c)
    return 0


def exhaustive_tail_equiv(u, v, n: int, scale: int = 4):
    """All-pairs shift search over k, l below scale x the complete bounds.

    Returns some (k, l) with k = l (mod n) and sigma^k u = sigma^l v, or None.
    Tails are compared on windows long enough to decide equality of two
    eventually periodic sequences.
    """
    pu, pv = len(u.prefix), len(v.prefix)
    W = max(pu, pv) + math.lcm(len(u.period), len(v.period)) + 1
    ku = scale * (pu + n * len(u.period))
    lv = scale * (pv + n * len(v.period))
    seen = {}
    for l in range(lv):
        seen.setdefault((terms(v, W, l), l % n), l)
    for k in range(ku):
        l = seen.get((terms(u, W, k), k % n))
        if l is not None:
            return k, l
    return None


def is_primitive(w: tuple) -> bool:
    n = len(w)
    return not any(n % d == 0 and w[:d] * (n // d) == w for d in range(1, n))


def dyadic_key(w: str):
    """Numeric position of a word over L/R: each letter halves the step and moves left or right."""
    from fractions import Fraction

    x, step = Fraction(1, 2), Fraction(1, 4)
    for c in w:
        x += step if c == "R" else -step
        step /= 2
    return x
