"""Computable countable linear orders.

Orders are described by immutable descriptor values (``Finite(3)``,
``Lex(Zeta(), Finite(2))``, ...) and turned into evaluable :class:`Order`
objects by :func:`construct`.  Points are plain Python values:

=============================  ==========================================
order                          element
=============================  ==========================================
Finite, Omega, OmegaStar, Zeta ``int``
Eta                            ``Fraction``
Dyadic                         ``str`` over ``"LR"`` (``""`` allowed)
Lex(X, Y)                      ``(x, y)``; longer products nest to the right
Sum(X, Y)                      ``Tag("L", x)`` / ``Tag("R", y)``
Rev(X)                         same points as X
Shuffle(k; ...)                ``RepPoint(word, fiber_element)``
SqLimit(X, n)                  ``Stage(i, nested n-ary tuple of depth i)``
=============================  ==========================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional, Tuple

from .errors import InvalidDescriptor, InvalidElement, NoWitness

__all__ = [
    "Cmp", "Finite", "Omega", "OmegaStar", "Zeta", "Eta", "Dyadic", "Sum", "Lex",
    "Rev", "Shuffle", "SqLimit", "Tag", "RepPoint", "Stage", "OrderMeta", "Order",
    "construct", "compare", "endpoints_and_meta", "witness", "color_of",
    "pair", "unpair", "calkin_wilf", "calkin_wilf_index", "dyadic_value",
]


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _cmp(a, b) -> Cmp:
    return Cmp.LT if a < b else Cmp.GT if a > b else Cmp.EQ


Color = Tuple[int, int]  # (residue, modulus)


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Finite:
    n: int

    def __post_init__(self):
        if not _is_int(self.n) or self.n < 1:
            raise InvalidDescriptor(f"Finite needs a positive count, got {self.n!r}")


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class OmegaStar:
    pass


@dataclass(frozen=True)
class Zeta:
    pass


@dataclass(frozen=True)
class Eta:
    pass


@dataclass(frozen=True)
class Dyadic:
    pass


@dataclass(frozen=True)
class Sum:
    left: Any
    right: Any


@dataclass(frozen=True, init=False)
class Lex:
    factors: tuple

    def __init__(self, *factors):
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        if len(factors) < 2:
            raise InvalidDescriptor("Lex needs at least two factors")
        object.__setattr__(self, "factors", tuple(factors))


@dataclass(frozen=True)
class Rev:
    inner: Any


@dataclass(frozen=True, init=False)
class Shuffle:
    """Dense replacement of a k-colored copy of the rationals.

    ``parts[c]`` replaces every point of color ``c``; ``None`` marks an empty
    part (those points become gaps).
    """

    k: int
    parts: tuple

    def __init__(self, k, *parts):
        if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
            parts = tuple(parts[0])
        if not _is_int(k) or k < 1:
            raise InvalidDescriptor(f"Shuffle needs k >= 1, got {k!r}")
        if len(parts) != k:
            raise InvalidDescriptor(f"Shuffle({k}) needs exactly {k} parts, got {len(parts)}")
        if all(p is None for p in parts):
            raise InvalidDescriptor("Shuffle needs at least one nonempty part")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class SqLimit:
    base: Any
    n: int

    def __post_init__(self):
        if not _is_int(self.n) or self.n < 2:
            raise InvalidDescriptor(f"SqLimit power must be >= 2, got {self.n!r}")


DESCRIPTOR_TYPES = (Finite, Omega, OmegaStar, Zeta, Eta, Dyadic, Sum, Lex, Rev, Shuffle, SqLimit)


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class Tag:
    side: str
    value: Any


@dataclass(frozen=True)
class RepPoint:
    base: str
    fiber: Any


@dataclass(frozen=True)
class Stage:
    i: int
    t: Any


@dataclass(frozen=True)
class OrderMeta:
    has_min: bool
    has_max: bool
    is_dense: bool
    is_countable: bool = True

    @property
    def coinitiality_kind(self) -> str:
        return "1" if self.has_min else "omega"

    @property
    def cofinality_kind(self) -> str:
        return "1" if self.has_max else "omega"

    def as_dict(self) -> dict:
        return {
            "has_min": self.has_min,
            "has_max": self.has_max,
            "is_dense": self.is_dense,
            "is_countable": self.is_countable,
            "coinitiality_kind": self.coinitiality_kind,
            "cofinality_kind": self.cofinality_kind,
        }


# ---------------------------------------------------------------------------
# small numeric helpers


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def pair(i: int, j: int) -> int:
    """Cantor pairing; inverse of :func:`unpair`."""
    return (i + j) * (i + j + 1) // 2 + j


def unpair(k: int) -> tuple[int, int]:
    w = (math.isqrt(8 * k + 1) - 1) // 2
    j = k - w * (w + 1) // 2
    return w - j, j


def _fusc(n: int) -> int:
    # Stern's diatomic sequence, read off the binary expansion of n.
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def calkin_wilf(i: int) -> Fraction:
    """The i-th (0-based) term of the Calkin-Wilf enumeration of positive rationals."""
    return Fraction(_fusc(i + 1), _fusc(i + 2))


def calkin_wilf_index(q: Fraction) -> int:
    """Inverse of :func:`calkin_wilf`."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"{q} is not a positive rational")
    a, b = q.numerator, q.denominator
    bits = []  # tree path read upwards; a/(a+b) is a left child, (a+b)/b a right one
    while a != b:
        if a < b:
            bits.append(0)
            b -= a
        else:
            bits.append(1)
            a -= b
    node = 1
    for bit in reversed(bits):
        node = 2 * node + bit
    return node - 1


def dyadic_value(w: str) -> Fraction:
    """Position of a Dyadic word as a dyadic rational in (0, 1)."""
    m = 0
    for c in w:
        m = 2 * m + (c == "R")
    return Fraction(2 * m + 1, 2 ** (len(w) + 1))


_DYADIC_KEY = str.maketrans("LR", "02")


def _dyadic_key(w: str) -> str:
    # L < end-of-word < R
    return w.translate(_DYADIC_KEY) + "1"


# ---------------------------------------------------------------------------
# orders


class Order:
    """A computable linear order.  Subclasses fill in the primitive operations."""

    descriptor: Any
    size: Optional[int] = None  # None means infinite
    min: Any = None
    max: Any = None
    has_min: bool = False
    has_max: bool = False
    is_dense: bool = False

    @property
    def meta(self) -> OrderMeta:
        return OrderMeta(self.has_min, self.has_max, self.is_dense)

    def check(self, x):
        """Return the normalized form of ``x`` or raise InvalidElement."""
        raise NotImplementedError

    def contains(self, x) -> bool:
        try:
            self.check(x)
        except InvalidElement:
            return False
        return True

    def compare(self, x, y) -> Cmp:
        raise NotImplementedError

    def lt(self, x, y) -> bool:
        return self.compare(x, y) < 0

    def le(self, x, y) -> bool:
        return self.compare(x, y) <= 0

    def nth(self, k: int):
        raise NotImplementedError

    def index_of(self, x) -> int:
        """Some k with nth(k) == x."""
        raise NotImplementedError

    def between(self, x, y, color: Optional[Color] = None):
        raise NoWitness(f"{self!r} has no witness strictly between {x!r} and {y!r}")

    def above(self, x, color: Optional[Color] = None):
        raise NoWitness(f"{self!r} has nothing above {x!r}")

    def below(self, x, color: Optional[Color] = None):
        raise NoWitness(f"{self!r} has nothing below {x!r}")

    def color_of(self, x, k: Optional[int] = None) -> int:
        raise TypeError(f"{self!r} carries no coloring")

    def pick(self, color: Optional[Color] = None):
        """Some element of the given color (the least-index one in enumeration order)."""
        if color is None:
            return self.min if self.has_min else self.nth(0)
        residue, modulus = color
        for k in range(4096):
            x = self.nth(k)
            if self.color_of(x, modulus) == residue % modulus:
                return x
        raise NoWitness(f"{self!r} has no element of color {color}")

    def __eq__(self, other):
        return isinstance(other, Order) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return f"<order {self.descriptor!r}>"


class _IntOrder(Order):
    """Integers between optional bounds lo..hi (inclusive)."""

    def __init__(self, descriptor, lo, hi):
        self.descriptor = descriptor
        self.lo, self.hi = lo, hi
        self.has_min = lo is not None
        self.has_max = hi is not None
        self.min, self.max = lo, hi
        self.size = hi - lo + 1 if lo is not None and hi is not None else None
        self.is_dense = self.size == 1

    def check(self, x):
        if not _is_int(x):
            raise InvalidElement(f"{x!r} is not an integer point of {self.descriptor!r}")
        if (self.lo is not None and x < self.lo) or (self.hi is not None and x > self.hi):
            raise InvalidElement(f"{x!r} is out of range for {self.descriptor!r}")
        return x

    def compare(self, x, y):
        return _cmp(x, y)

    def between(self, x, y, color=None):
        if x + 1 < y:
            return x + 1
        return super().between(x, y)

    def above(self, x, color=None):
        if self.hi is None or x < self.hi:
            return x + 1
        return super().above(x)

    def below(self, x, color=None):
        if self.lo is None or x > self.lo:
            return x - 1
        return super().below(x)


class FiniteOrder(_IntOrder):
    def __init__(self, d: Finite):
        super().__init__(d, 0, d.n - 1)

    def nth(self, k):
        return k % self.size

    def index_of(self, x):
        return self.check(x)


class OmegaOrder(_IntOrder):
    def __init__(self, d):
        super().__init__(d, 0, None)

    def nth(self, k):
        return k

    def index_of(self, x):
        return self.check(x)


class OmegaStarOrder(_IntOrder):
    def __init__(self, d):
        super().__init__(d, None, 0)

    def nth(self, k):
        return -k

    def index_of(self, x):
        return -self.check(x)


class ZetaOrder(_IntOrder):
    def __init__(self, d):
        super().__init__(d, None, None)

    def nth(self, k):
        # 0, 1, -1, 2, -2, ...
        return (k + 1) // 2 if k % 2 else -(k // 2)

    def index_of(self, x):
        x = self.check(x)
        return 2 * x - 1 if x > 0 else -2 * x


class EtaOrder(Order):
    is_dense = True

    def __init__(self, d):
        self.descriptor = d

    def check(self, x):
        if _is_int(x):
            return Fraction(x)
        if isinstance(x, Fraction):
            return x
        raise InvalidElement(f"{x!r} is not a rational")

    def compare(self, x, y):
        return _cmp(x, y)

    def nth(self, k):
        if k == 0:
            return Fraction(0)
        if k % 2:
            return calkin_wilf((k - 1) // 2)
        return -calkin_wilf((k - 2) // 2)

    def index_of(self, x):
        x = self.check(x)
        if x == 0:
            return 0
        c = calkin_wilf_index(abs(x))
        return 2 * c + 1 if x > 0 else 2 * c + 2

    def between(self, x, y, color=None):
        if x < y:
            return (x + y) / 2
        return super().between(x, y)

    def above(self, x, color=None):
        return x + 1

    def below(self, x, color=None):
        return x - 1


class DyadicOrder(Order):
    """Finite words over {L, R} compared by first difference with L < end < R."""

    is_dense = True

    def __init__(self, d):
        self.descriptor = d

    def check(self, x):
        if not isinstance(x, str) or x.strip("LR"):
            raise InvalidElement(f"{x!r} is not a word over L/R")
        return x

    def compare(self, x, y):
        return _cmp(_dyadic_key(x), _dyadic_key(y))

    def nth(self, k):
        return bin(k + 1)[3:].translate(str.maketrans("01", "LR"))

    def index_of(self, x):
        return int("1" + self.check(x).translate(str.maketrans("LR", "01")), 2) - 1

    def color_of(self, x, k=None):
        if k is None:
            raise TypeError("Dyadic coloring needs a modulus k")
        return len(x) % k

    def between(self, x, y, color=None):
        if self.compare(x, y) >= 0:
            return super().between(x, y)
        return _dyadic_witness(dyadic_value(x), dyadic_value(y), color)

    def above(self, x, color=None):
        return _dyadic_witness(dyadic_value(x), Fraction(1), color)

    def below(self, x, color=None):
        return _dyadic_witness(Fraction(0), dyadic_value(x), color)


def _word_of(m: int, length: int) -> str:
    if length == 0:
        return ""
    return format(m, f"0{length}b").translate(str.maketrans("01", "LR"))


def _first_word_of_length(lo: Fraction, hi: Fraction, length: int) -> Optional[str]:
    # words of this length sit at the odd multiples of 1 / 2^(length+1)
    den = 2 ** (length + 1)
    num = math.floor(lo * den) + 1
    if num % 2 == 0:
        num += 1
    if Fraction(num, den) < hi and num < den:
        return _word_of((num - 1) // 2, length)
    return None


def _dyadic_witness(lo: Fraction, hi: Fraction, color: Optional[Color]) -> str:
    """Shortest word strictly inside (lo, hi), lexicographically first among ties.

    With a length-residue constraint the shortest word is padded with "R"s; if
    the padding leaves the interval, fall back to the shortest word whose length
    already has the right residue.
    """
    length = 0
    while True:
        z = _first_word_of_length(lo, hi, length)
        if z is not None:
            break
        length += 1
    if color is None:
        return z
    residue, modulus = color
    padded = z + "R" * ((residue - len(z)) % modulus)
    if lo < dyadic_value(padded) < hi:
        return padded
    length = len(z)
    while True:
        if length % modulus == residue % modulus:
            w = _first_word_of_length(lo, hi, length)
            if w is not None:
                return w
        length += 1


class SumOrder(Order):
    def __init__(self, d: Sum):
        self.descriptor = d
        self.left = construct(d.left)
        self.right = construct(d.right)
        L, R = self.left, self.right
        self.size = L.size + R.size if L.size is not None and R.size is not None else None
        self.has_min, self.has_max = L.has_min, R.has_max
        self.min = Tag("L", L.min) if L.has_min else None
        self.max = Tag("R", R.max) if R.has_max else None
        self.is_dense = L.is_dense and R.is_dense and not (L.has_max and R.has_min)

    def _side(self, side):
        return self.left if side == "L" else self.right

    def check(self, x):
        if not isinstance(x, Tag) or x.side not in ("L", "R"):
            raise InvalidElement(f"{x!r} is not a tagged point of {self.descriptor!r}")
        return Tag(x.side, self._side(x.side).check(x.value))

    def compare(self, x, y):
        if x.side != y.side:
            return Cmp.LT if x.side == "L" else Cmp.GT
        return self._side(x.side).compare(x.value, y.value)

    def nth(self, k):
        side = "L" if k % 2 == 0 else "R"
        return Tag(side, self._side(side).nth(k // 2))

    def index_of(self, x):
        x = self.check(x)
        return 2 * self._side(x.side).index_of(x.value) + (x.side == "R")

    def between(self, x, y, color=None):
        c = self.compare(x, y)
        if c >= 0:
            return super().between(x, y)
        if x.side == y.side:
            return Tag(x.side, self._side(x.side).between(x.value, y.value, color))
        try:
            return Tag("L", self.left.above(x.value, color))
        except NoWitness:
            return Tag("R", self.right.below(y.value, color))

    def above(self, x, color=None):
        if x.side == "R":
            return Tag("R", self.right.above(x.value, color))
        try:
            return Tag("L", self.left.above(x.value, color))
        except NoWitness:
            return Tag("R", self.right.pick(color))

    def below(self, x, color=None):
        if x.side == "L":
            return Tag("L", self.left.below(x.value, color))
        try:
            return Tag("R", self.right.below(x.value, color))
        except NoWitness:
            return Tag("L", self.left.pick(color))

    def color_of(self, x, k=None):
        return self._side(x.side).color_of(x.value, k)


class LexOrder(Order):
    """Lexicographic product; more than two factors nest to the right."""

    def __init__(self, d: Lex):
        self.descriptor = d
        self.first = construct(d.factors[0])
        rest = d.factors[1:]
        self.rest = construct(rest[0] if len(rest) == 1 else Lex(*rest))
        X, Y = self.first, self.rest
        self.size = X.size * Y.size if X.size is not None and Y.size is not None else None
        self.has_min = X.has_min and Y.has_min
        self.has_max = X.has_max and Y.has_max
        self.min = (X.min, Y.min) if self.has_min else None
        self.max = (X.max, Y.max) if self.has_max else None
        # (x, max Y) and (x', min Y) are adjacent exactly when x, x' are
        self.is_dense = Y.is_dense and (X.is_dense or X.size == 1 or not Y.has_max or not Y.has_min)

    def check(self, x):
        if not isinstance(x, tuple) or len(x) != 2:
            raise InvalidElement(f"{x!r} is not a pair point of {self.descriptor!r}")
        return (self.first.check(x[0]), self.rest.check(x[1]))

    def compare(self, x, y):
        c = self.first.compare(x[0], y[0])
        if c:
            return c
        return self.rest.compare(x[1], y[1])

    def nth(self, k):
        i, j = unpair(k)
        return (self.first.nth(i), self.rest.nth(j))

    def index_of(self, x):
        return pair(self.first.index_of(x[0]), self.rest.index_of(x[1]))

    def between(self, x, y, color=None):
        c = self.first.compare(x[0], y[0])
        if c == 0:
            return (x[0], self.rest.between(x[1], y[1], color))
        if c > 0:
            return super().between(x, y)
        try:
            return (x[0], self.rest.above(x[1], color))
        except NoWitness:
            pass
        try:
            return (y[0], self.rest.below(y[1], color))
        except NoWitness:
            pass
        return (self.first.between(x[0], y[0]), self.rest.pick(color))

    def above(self, x, color=None):
        try:
            return (x[0], self.rest.above(x[1], color))
        except NoWitness:
            return (self.first.above(x[0]), self.rest.pick(color))

    def below(self, x, color=None):
        try:
            return (x[0], self.rest.below(x[1], color))
        except NoWitness:
            return (self.first.below(x[0]), self.rest.pick(color))

    def color_of(self, x, k=None):
        return self.rest.color_of(x[1], k)


class RevOrder(Order):
    def __init__(self, d: Rev):
        self.descriptor = d
        self.inner = I = construct(d.inner)
        self.size = I.size
        self.has_min, self.has_max = I.has_max, I.has_min
        self.min, self.max = I.max, I.min
        self.is_dense = I.is_dense

    def check(self, x):
        return self.inner.check(x)

    def compare(self, x, y):
        return Cmp(-self.inner.compare(x, y))

    def nth(self, k):
        return self.inner.nth(k)

    def index_of(self, x):
        return self.inner.index_of(x)

    def between(self, x, y, color=None):
        return self.inner.between(y, x, color)

    def above(self, x, color=None):
        return self.inner.below(x, color)

    def below(self, x, color=None):
        return self.inner.above(x, color)

    def color_of(self, x, k=None):
        return self.inner.color_of(x, k)

    def pick(self, color=None):
        return self.inner.pick(color)


class ShuffleOrder(Order):
    is_dense = False

    def __init__(self, d: Shuffle):
        self.descriptor = d
        self.k = d.k
        self.base = construct(Dyadic())
        self.parts = tuple(None if p is None else construct(p) for p in d.parts)
        self.is_dense = all(p.is_dense for p in self.parts if p is not None)
        self.nonempty = tuple(c for c, p in enumerate(self.parts) if p is not None)

    def _part(self, word):
        return self.parts[len(word) % self.k]

    def check(self, x):
        if not isinstance(x, RepPoint):
            raise InvalidElement(f"{x!r} is not a shuffle point")
        w = self.base.check(x.base)
        part = self._part(w)
        if part is None:
            raise InvalidElement(f"color {len(w) % self.k} of {w!r} is an empty part")
        return RepPoint(w, part.check(x.fiber))

    def compare(self, x, y):
        c = self.base.compare(x.base, y.base)
        if c:
            return c
        return self._part(x.base).compare(x.fiber, y.fiber)

    def nth(self, k):
        i, j = unpair(k)
        w = self.base.nth(i)
        while self._part(w) is None:
            w += "R"
        return RepPoint(w, self._part(w).nth(j))

    def index_of(self, x):
        x = self.check(x)
        # words of nonempty colour are never padded by nth
        return pair(self.base.index_of(x.base), self._part(x.base).index_of(x.fiber))

    def color_of(self, x, k=None):
        return len(x.base) % self.k

    def _color(self, color):
        if color is None:
            return self.nonempty[0]
        residue, modulus = color
        if modulus != self.k or self.parts[residue % self.k] is None:
            raise NoWitness(f"no points of color {color} in {self.descriptor!r}")
        return residue % self.k

    def _point(self, word):
        return RepPoint(word, self._part(word).pick())

    def between(self, x, y, color=None):
        c = self.base.compare(x.base, y.base)
        if c == 0 and (color is None or self.color_of(x) == color[0] % self.k):
            return RepPoint(x.base, self._part(x.base).between(x.fiber, y.fiber))
        if c >= 0:
            return super().between(x, y)
        col = self._color(color)
        return self._point(self.base.between(x.base, y.base, (col, self.k)))

    def above(self, x, color=None):
        return self._point(self.base.above(x.base, (self._color(color), self.k)))

    def below(self, x, color=None):
        return self._point(self.base.below(x.base, (self._color(color), self.k)))


class SqLimitOrder(Order):
    """Direct limit of X, X^n, X^(n^2), ... along the diagonal embeddings."""

    is_dense = True

    def __init__(self, d: SqLimit):
        self.descriptor = d
        self.base = B = construct(d.base)
        self.n = d.n
        self.has_min, self.has_max = B.has_min, B.has_max
        self.min = Stage(0, B.min) if B.has_min else None
        self.max = Stage(0, B.max) if B.has_max else None
        self.size = 1 if B.size == 1 else None

    # leaves are the flattened X_0 coordinates of a stage tuple
    def leaves(self, x: Stage) -> tuple:
        return _flatten(x.t, x.i, self.n)

    def make(self, i: int, leaves) -> Stage:
        """Canonical stage element from a stage index and its n**i leaves."""
        n = self.n
        leaves = tuple(leaves)
        while i > 0 and all(leaves[j] == leaves[j - j % n] for j in range(len(leaves))):
            leaves = leaves[::n]
            i -= 1
        return Stage(i, _nest(leaves, i, n))

    def lift(self, x: Stage, j: int) -> tuple:
        """Leaves of x embedded at stage j >= x.i."""
        rep = self.n ** (j - x.i)
        return tuple(leaf for leaf in self.leaves(x) for _ in range(rep))

    def check(self, x):
        if not isinstance(x, Stage) or not _is_int(x.i) or x.i < 0:
            raise InvalidElement(f"{x!r} is not a stage point")
        try:
            leaves = _flatten(x.t, x.i, self.n)
        except (TypeError, ValueError):
            raise InvalidElement(f"{x!r} is not a full {self.n}-ary tuple of depth {x.i}") from None
        leaves = tuple(self.base.check(leaf) for leaf in leaves)
        canon = self.make(x.i, leaves)
        if canon.i != x.i:
            raise InvalidElement(f"{x!r} is not canonical (collapses to stage {canon.i})")
        return canon

    def compare(self, x, y):
        j = max(x.i, y.i)
        for a, b in zip(self.lift(x, j), self.lift(y, j)):
            c = self.base.compare(a, b)
            if c:
                return c
        return Cmp.EQ

    def nth(self, k):
        B, n = self.base, self.n
        if B.size is not None:
            # stage by stage; stage i holds size**(n**i) tuples
            i = 0
            while k >= B.size ** (n ** i):
                k -= B.size ** (n ** i)
                i += 1
            digits = []
            for _ in range(n ** i):
                k, r = divmod(k, B.size)
                digits.append(B.nth(r))
            return self.make(i, reversed(digits))
        a, j = unpair(k)
        i = (a + 1).bit_length() - 1
        return self.make(i, [B.nth(c) for c in _untree(j, n ** i)])

    def index_of(self, x):
        B, x = self.base, self.check(x)
        leaves = self.leaves(x)
        if B.size is not None:
            k = sum(B.size ** (self.n ** i) for i in range(x.i))
            m = 0
            for leaf in leaves:
                m = m * B.size + B.index_of(leaf)
            return k + m
        return pair(2 ** x.i - 1, _tree([B.index_of(leaf) for leaf in leaves]))

    def between(self, x, y, color=None):
        if self.compare(x, y) >= 0:
            return super().between(x, y)
        n, j = self.n, max(x.i, y.i)
        lx, ly = self.lift(x, j), self.lift(y, j)
        p = next(q for q in range(len(lx)) if lx[q] != ly[q])
        leaves = [leaf for leaf in lx for _ in range(n)]
        leaves[n * p + 1] = ly[p]
        return self.make(j + 1, leaves)

    def above(self, x, color=None):
        if self.has_max:
            return self.between(x, self.max)
        return Stage(0, self.base.above(self.leaves(x)[0]))

    def below(self, x, color=None):
        if self.has_min:
            return self.between(self.min, x)
        return Stage(0, self.base.below(self.leaves(x)[0]))


# balanced pairing keeps codes linear in the number of leaves
def _tree(coords) -> int:
    if len(coords) == 1:
        return coords[0]
    h = len(coords) // 2
    return pair(_tree(coords[:h]), _tree(coords[h:]))


def _untree(k: int, m: int) -> list:
    if m == 1:
        return [k]
    a, b = unpair(k)
    return _untree(a, m // 2) + _untree(b, m - m // 2)


def _flatten(t, i, n) -> tuple:
    if i == 0:
        return (t,)
    if not isinstance(t, tuple) or len(t) != n:
        raise ValueError("bad stage tuple")
    return tuple(leaf for child in t for leaf in _flatten(child, i - 1, n))


def _nest(leaves, i, n):
    if i == 0:
        return leaves[0]
    step = len(leaves) // n
    return tuple(_nest(leaves[c * step:(c + 1) * step], i - 1, n) for c in range(n))


_CONSTRUCTORS = {
    Finite: FiniteOrder,
    Omega: OmegaOrder,
    OmegaStar: OmegaStarOrder,
    Zeta: ZetaOrder,
    Eta: EtaOrder,
    Dyadic: DyadicOrder,
    Sum: SumOrder,
    Lex: LexOrder,
    Rev: RevOrder,
    Shuffle: ShuffleOrder,
    SqLimit: SqLimitOrder,
}


@lru_cache(maxsize=None)
def _construct(d) -> Order:
    return _CONSTRUCTORS[type(d)](d)


def construct(d) -> Order:
    if isinstance(d, Order):
        return d
    if type(d) not in _CONSTRUCTORS:
        raise InvalidDescriptor(f"{d!r} is not an order descriptor")
    return _construct(d)


# ---------------------------------------------------------------------------
# checked module-level API


def compare(order, x, y) -> Cmp:
    O = construct(order)
    return O.compare(O.check(x), O.check(y))


def endpoints_and_meta(order):
    """``(meta, min_or_None, max_or_None)`` for an order."""
    O = construct(order)
    return O.meta, O.min, O.max


def witness(order, kind: str, x, y=None, color: Optional[Color] = None):
    """Deterministic witness: ``kind`` is "between", "below" or "above"."""
    O = construct(order)
    x = O.check(x)
    if kind == "between":
        y = O.check(y)
        if O.compare(x, y) >= 0:
            raise NoWitness(f"between needs {x!r} < {y!r}")
        z = O.between(x, y, color)
    elif kind == "above":
        z = O.above(x, color)
    elif kind == "below":
        z = O.below(x, color)
    else:
        raise ValueError(f"unknown witness kind {kind!r}")
    return z


def color_of(order, x, k: Optional[int] = None) -> int:
    O = construct(order)
    return O.color_of(O.check(x), k)
