"""Eventually periodic points of A^omega.

An :class:`EpSeq` ``r|s`` denotes the sequence r s s s ... over an order A.
Values are always kept in canonical form (primitive period, shortest prefix),
so two EpSeqs denote the same point exactly when they are equal.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence

from .errors import BaseMismatch, InvalidElement
from .orders import Cmp, Order, construct

__all__ = [
    "EpSeq", "EquivWitness", "canonicalize", "const", "entry", "head", "compare_ep",
    "shift", "prepend", "eventual_period", "tail_equiv_n", "primitive_root",
]


class EpSeq:
    __slots__ = ("order", "prefix", "period")

    def __init__(self, order: Order, prefix: tuple, period: tuple):
        # trusted constructor: callers go through canonicalize / _canon
        self.order = order
        self.prefix = prefix
        self.period = period

    @property
    def base(self):
        return self.order.descriptor

    def __eq__(self, other):
        return (
            isinstance(other, EpSeq)
            and self.prefix == other.prefix
            and self.period == other.period
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.prefix, self.period))

    def __lt__(self, other):
        return compare_ep(self, other) < 0

    def __le__(self, other):
        return compare_ep(self, other) <= 0

    def __gt__(self, other):
        return compare_ep(self, other) > 0

    def __ge__(self, other):
        return compare_ep(self, other) >= 0

    def __getitem__(self, i: int):
        return entry(self, i)

    def take(self, d: int) -> tuple:
        return tuple(entry(self, i) for i in range(d))

    def __repr__(self):
        return f"EpSeq({self.prefix!r}|{self.period!r})"


class EquivWitness(NamedTuple):
    k: int
    l: int


def primitive_root(w: tuple) -> tuple:
    n = len(w)
    for d in range(1, n):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


def _canon(order: Order, prefix: tuple, period: tuple) -> EpSeq:
    period = primitive_root(period)
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1:] + period[:-1]
    return EpSeq(order, prefix, period)


def canonicalize(base, prefix: Sequence, period: Sequence) -> EpSeq:
    """Validate the entries and return the canonical form of ``prefix . period^omega``."""
    order = construct(base)
    if not period:
        raise InvalidElement("period must be nonempty")
    prefix = tuple(order.check(x) for x in prefix)
    period = tuple(order.check(x) for x in period)
    return _canon(order, prefix, period)


def const(base, a) -> EpSeq:
    """The constant sequence a a a ..."""
    return canonicalize(base, (), (a,))


def entry(u: EpSeq, i: int):
    p = len(u.prefix)
    if i < p:
        return u.prefix[i]
    return u.period[(i - p) % len(u.period)]


def head(u: EpSeq):
    return entry(u, 0)


def _same_base(u: EpSeq, v: EpSeq):
    if u.order != v.order:
        raise BaseMismatch(f"{u.base!r} vs {v.base!r}")


def compare_ep(u: EpSeq, v: EpSeq) -> Cmp:
    _same_base(u, v)
    if u.prefix == v.prefix and u.period == v.period:
        return Cmp.EQ
    cmp = u.order.compare
    D = max(len(u.prefix), len(v.prefix)) + math.lcm(len(u.period), len(v.period))
    for i in range(D):
        c = cmp(entry(u, i), entry(v, i))
        if c:
            return c
    return Cmp.EQ


def shift(u: EpSeq, k: int = 1) -> EpSeq:
    """sigma^k u."""
    p = len(u.prefix)
    if k <= p:
        return EpSeq(u.order, u.prefix[k:], u.period)
    r = (k - p) % len(u.period)
    return EpSeq(u.order, (), u.period[r:] + u.period[:r])


def prepend(t: Sequence, u: EpSeq, check: bool = False) -> EpSeq:
    t = tuple(t)
    if check:
        t = tuple(u.order.check(x) for x in t)
    return _canon(u.order, t + u.prefix, u.period)


def eventual_period(u: EpSeq) -> int:
    return len(u.period)


def _rotation_offset(target: tuple, source: tuple) -> Optional[int]:
    """e with source rotated left by e equal to target, if any."""
    if len(target) != len(source):
        return None
    doubled = source + source
    for e in range(len(source)):
        if doubled[e:e + len(source)] == target:
            return e
    return None


def tail_equiv_n(u: EpSeq, v: EpSeq, n: int = 1) -> Optional[EquivWitness]:
    """Least (k, l), ordered by k then l, with k = l mod n and sigma^k u = sigma^l v.

    Returns None when u and v are not n-tail-equivalent.
    """
    _same_base(u, v)
    if n < 1:
        raise ValueError("modulus must be >= 1")
    pu, pv, p = len(u.prefix), len(v.prefix), len(u.period)
    e0 = _rotation_offset(u.period, v.period)
    if e0 is None:
        return None
    if n == 2 and p % 2 == 0 and len(v.period) == p and (
        v == prepend((head(v),), u) or u == prepend((head(u),), v)
    ):
        # a.u and u share their period; an even period rules out a parity match
        return None
    for k in range(pu + n * p):
        if k < pu:
            rest = u.prefix[k:]
            l = pv - len(rest)
            if l >= 0 and v.prefix[l:] == rest and v.period == u.period and (k - l) % n == 0:
                return EquivWitness(k, l)
            continue
        e = (e0 + k - pu) % p
        for j in range(n):
            l = pv + e + j * p
            if (l - k) % n == 0:
                return EquivWitness(k, l)
    return None
