"""Executable isomorphisms between described orders.

Covers flattening, replacement orders over A^omega given by class
assignments, lifting along an n-revolving automorphism, back-and-forth
(plain and colored), Schroeder-Bernstein chain chasing, square limits and the
left/right digit decompositions.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .automorph import PiecewiseAuto, verify_automorphism
from .epseq import EpSeq, compare_ep, prepend, shift, tail_equiv_n
from .errors import (
    ColorMismatch, FuelExhausted, InvalidElement, MissingEndpoints, NoWitness,
    UnverifiedAutomorphism, WitnessFailure,
)
from .orders import (
    Cmp, Dyadic, Lex, Order, RepPoint, SqLimit, Stage, construct,
)

__all__ = [
    "fl_n_apply", "fl_iso", "ClassAssignment", "RepPointX", "check_rep_point", "rep_compare", "IsoMap",
    "flatten_rep_iso", "pra_lift", "PartialIso", "back_and_forth", "lift_replacement_iso",
    "shuffle_absorb_iso", "Embedding", "sb_bijection", "endpoints_square_iso",
    "sql_power_iso", "power_compare", "span_witness", "address", "right_decompose",
    "rebuild_from_digits", "zeta_binary_iso", "sample_rep_points",
]


@dataclass
class IsoMap:
    forward: Callable
    inverse: Callable
    provenance: str = ""
    extra: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.forward(x)


# ---------------------------------------------------------------------------
# flattening


def fl_n_apply(A, n: int, tup=None, u: Optional[EpSeq] = None, direction: str = "forward"):
    """forward: (a_1..a_n, u) -> a_1..a_n u.  inverse: u -> (u|n, sigma^n u)."""
    if direction == "forward":
        tup = tuple(tup)
        if len(tup) != n:
            raise InvalidElement(f"expected {n} letters, got {len(tup)}")
        return prepend(tup, u, check=True)
    if direction == "inverse":
        return u.take(n), shift(u, n)
    raise ValueError(f"unknown direction {direction!r}")


def fl_iso(A, n: int = 1) -> IsoMap:
    """A^n x A^omega -> A^omega on pairs (letters, u)."""
    return IsoMap(
        lambda p: fl_n_apply(A, n, p[0], p[1]),
        lambda u: fl_n_apply(A, n, u=u, direction="inverse"),
        f"fl{n}",
    )


# ---------------------------------------------------------------------------
# replacements over A^omega


class ClassAssignment:
    """Finitely many n-tail classes with their fiber orders, plus a default.

    A fiber (or the default) of ``None`` is the empty order: those addresses are gaps.
    """

    def __init__(self, base, modulus: int, entries: Sequence, default=None):
        self.order = construct(base)
        self.modulus = modulus
        self.entries = [(rep, fib) for rep, fib in entries]
        self.default = default
        for i, (u, _) in enumerate(self.entries):
            if u.order != self.order:
                raise InvalidElement(f"representative {u!r} is not over {self.order.descriptor!r}")
            for v, _ in self.entries[:i]:
                if tail_equiv_n(u, v, modulus) is not None:
                    raise InvalidElement(f"representatives {v!r} and {u!r} share a class")

    def fiber_of(self, u: EpSeq):
        for rep, fib in self.entries:
            if tail_equiv_n(u, rep, self.modulus) is not None:
                return fib
        return self.default

    def fiber_order(self, u: EpSeq) -> Optional[Order]:
        fib = self.fiber_of(u)
        return None if fib is None else construct(fib)

    def shifted_fiber_of(self, w: EpSeq):
        """Fiber of w in the assignment w -> I[sigma w] that presents A x X."""
        return self.fiber_of(shift(w, 1))


@dataclass(frozen=True)
class RepPointX:
    address: EpSeq
    fiber_elem: Any


def check_rep_point(CA: ClassAssignment, p: RepPointX) -> RepPointX:
    fib = CA.fiber_order(p.address)
    if fib is None:
        raise InvalidElement(f"address {p.address!r} lies in an empty class")
    return RepPointX(p.address, fib.check(p.fiber_elem))


def rep_compare(CA: ClassAssignment, p: RepPointX, q: RepPointX) -> Cmp:
    c = compare_ep(p.address, q.address)
    if c:
        return c
    fib = CA.fiber_order(p.address)
    if fib is None:
        raise InvalidElement(f"address {p.address!r} lies in an empty class")
    return fib.compare(p.fiber_elem, q.fiber_elem)


def flatten_rep_iso(CA: ClassAssignment) -> IsoMap:
    """A^n X -> X for X = A^omega(I[u]_n); points of A^n X are (letters, RepPointX)."""
    n = CA.modulus

    def forward(p):
        letters, x = p
        return RepPointX(prepend(tuple(letters), x.address, check=True), x.fiber_elem)

    def inverse(x):
        return (x.address.take(n), RepPointX(shift(x.address, n), x.fiber_elem))

    return IsoMap(forward, inverse, f"flatten-rep(n={n})")


def pra_lift(CA: ClassAssignment, F: PiecewiseAuto, samples: int = 200, depth: int = 16,
             seed: int = 0) -> IsoMap:
    """X -> A X for X = A^omega(I[u]_n), given an n-revolving automorphism F.

    (u, i) goes to (F(u)_0, (sigma F(u), i)).  Since F(u) is n-tail equivalent
    to a.u, sigma F(u) is n-tail equivalent to u, so i stays in its fiber.
    """
    if F.modulus != CA.modulus:
        raise UnverifiedAutomorphism(f"automorphism modulus {F.modulus} != assignment modulus {CA.modulus}")
    if F.order != CA.order:
        raise UnverifiedAutomorphism("automorphism and assignment have different bases")
    report = verify_automorphism(F, samples, depth, seed)
    if not report.passed:
        raise UnverifiedAutomorphism(f"automorphism failed verification: {report.to_json()}")

    def forward(x: RepPointX):
        w = F.apply(x.address)
        return (w.take(1)[0], RepPointX(shift(w, 1), x.fiber_elem))

    def inverse(p):
        a, x = p
        return RepPointX(F.invert(prepend((a,), x.address)), x.fiber_elem)

    def flat(x: RepPointX):
        # the same map read as (F(u), i) with i in the fiber I[sigma F(u)]
        return RepPointX(F.apply(x.address), x.fiber_elem)

    return IsoMap(forward, inverse, f"pra-lift(n={CA.modulus})", {"report": report, "flat": flat})


def sample_rep_points(CA: ClassAssignment, count: int, rng: random.Random,
                      max_prefix: int = 5, pool: int = 8) -> list:
    """Random points of a replacement, built from the nonempty representatives."""
    A = CA.order
    reps = [rep for rep, fib in CA.entries if fib is not None]
    if not reps:
        raise InvalidElement("sampling needs a nonempty representative")
    out = []
    while len(out) < count:
        rep = shift(rng.choice(reps), rng.randrange(4))
        prefix = tuple(A.nth(rng.randrange(pool)) for _ in range(rng.randint(0, max_prefix)))
        u = prepend(prefix, rep)
        fib = CA.fiber_order(u)
        if fib is None:
            continue
        k = rng.randrange(fib.size) if fib.size is not None else rng.randrange(pool)
        out.append(RepPointX(u, fib.nth(k)))
    return out


# ---------------------------------------------------------------------------
# back-and-forth


class PartialIso:
    """A finite order isomorphism grown one point at a time."""

    def __init__(self, X: Order, Y: Order, colors: Optional[int] = None):
        self.X, self.Y = construct(X), construct(Y)
        self.colors = colors
        self.xs: list = []
        self.ys: list = []
        self.fwd: dict = {}
        self.bwd: dict = {}
        self.steps = 0

    def __len__(self):
        return len(self.xs)

    @property
    def pairs(self) -> list:
        return list(zip(self.xs, self.ys))

    def forward(self, x):
        return self.fwd.get(x)

    def inverse(self, y):
        return self.bwd.get(y)

    def _color(self, O: Order, z):
        return None if self.colors is None else (O.color_of(z, self.colors), self.colors)

    @staticmethod
    def _slot(O: Order, items: list, z) -> int:
        lo, hi = 0, len(items)
        while lo < hi:
            mid = (lo + hi) // 2
            if O.compare(items[mid], z) < 0:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def _partner(self, dst_items, dst: Order, pos: int, color):
        try:
            if pos > 0 and pos < len(dst_items):
                return dst.between(dst_items[pos - 1], dst_items[pos], color)
            if pos > 0:
                return dst.above(dst_items[pos - 1], color)
            if pos < len(dst_items):
                return dst.below(dst_items[pos], color)
            return dst.pick(color)
        except NoWitness as exc:
            raise WitnessFailure(f"no partner available at step {self.steps}: {exc}") from None

    def extend_left(self, x):
        """Match x (a point of X) if it is not matched yet."""
        if x in self.fwd:
            return self.fwd[x]
        pos = self._slot(self.X, self.xs, x)
        y = self._partner(self.ys, self.Y, pos, self._color(self.X, x))
        self._insert(pos, x, y)
        return y

    def extend_right(self, y):
        if y in self.bwd:
            return self.bwd[y]
        pos = self._slot(self.Y, self.ys, y)
        x = self._partner(self.xs, self.X, pos, self._color(self.Y, y))
        self._insert(pos, x, y)
        return x

    def _insert(self, pos, x, y):
        self.xs.insert(pos, x)
        self.ys.insert(pos, y)
        self.fwd[x] = y
        self.bwd[y] = x

    def step(self):
        t = self.steps
        if t % 2 == 0:
            self.extend_left(self.X.nth(t // 2))
        else:
            self.extend_right(self.Y.nth(t // 2))
        self.steps += 1

    def violations(self) -> list:
        """Adjacent pairs that break order or color agreement (empty when sound)."""
        bad = []
        for i in range(len(self.xs) - 1):
            if self.X.compare(self.xs[i], self.xs[i + 1]) >= 0 or self.Y.compare(self.ys[i], self.ys[i + 1]) >= 0:
                bad.append(("order", self.xs[i], self.xs[i + 1]))
        if self.colors is not None:
            for x, y in self.pairs:
                if self._color(self.X, x) != self._color(self.Y, y):
                    bad.append(("color", x, y))
        return bad


def back_and_forth(X, Y, colors: Optional[int] = None, steps: int = 200) -> PartialIso:
    """Run ``steps`` alternating extension steps (X.nth(0), Y.nth(0), X.nth(1), ...).

    Endpoints must occur on the same sides of X and Y; they are matched first,
    after which every later point lands strictly inside or beyond them.
    """
    P = PartialIso(X, Y, colors)
    for end in ("min", "max"):
        hx, hy = getattr(P.X, "has_" + end), getattr(P.Y, "has_" + end)
        if hx != hy:
            raise WitnessFailure(f"endpoint mismatch: only one of {P.X.descriptor!r}, {P.Y.descriptor!r} has a {end}")
        if hx:
            x, y = getattr(P.X, end), getattr(P.Y, end)
            if P._color(P.X, x) != P._color(P.Y, y):
                raise WitnessFailure(f"the {end}s {x!r} and {y!r} have different colors")
            P._insert(len(P.xs) if end == "max" else 0, x, y)
    for _ in range(steps):
        P.step()
    return P


def lift_replacement_iso(base_iso, fibers: Sequence, k: int) -> IsoMap:
    """Lift a color-preserving base map to replacements whose fibers are keyed by color.

    Points of a replacement are (base_point, fiber_element).  The lift is
    partial when the base map is (unmatched points map to None).
    """
    X, Y = base_iso.X, base_iso.Y

    def check(src: Order, dst: Order, b, c):
        if c is None:
            return None
        if src.color_of(b, k) != dst.color_of(c, k):
            raise ColorMismatch(f"{b!r} and {c!r} have different colors")
        return c

    def forward(p):
        b, i = p
        c = check(X, Y, b, base_iso.forward(b))
        return None if c is None else (c, i)

    def inverse(q):
        c, i = q
        b = check(Y, X, c, base_iso.inverse(c))
        return None if b is None else (b, i)

    return IsoMap(forward, inverse, "lift-replacement", {"fibers": tuple(fibers)})


def shuffle_absorb_iso(L, X, steps: int = 300):
    """L x X -> X for a shuffle X, through a colored back-and-forth of the bases.

    Points of L x X are (l, RepPoint(w, i)); the base of L x X is L x Dyadic
    colored by word length.  Returns (iso, partial base iso).
    """
    Xo = construct(X)
    d = Xo.descriptor
    k = d.k
    base_iso = back_and_forth(Lex(construct(L).descriptor, Dyadic()), Dyadic(), colors=k, steps=steps)
    lifted = lift_replacement_iso(base_iso, d.parts, k)

    def forward(p):
        l, x = p
        q = lifted.forward(((l, x.base), x.fiber))
        return None if q is None else RepPoint(q[0], q[1])

    def inverse(x):
        q = lifted.inverse((x.base, x.fiber))
        return None if q is None else (q[0][0], RepPoint(q[0][1], q[1]))

    return IsoMap(forward, inverse, "shuffle-absorb"), base_iso


# ---------------------------------------------------------------------------
# Schroeder-Bernstein


@dataclass
class Embedding:
    apply: Callable
    preimage: Callable  # returns None outside the image


class _SB:
    def __init__(self, f: Embedding, g: Embedding, fuel: int):
        self.f, self.g, self.fuel = f, g, fuel

    def classify(self, x) -> str:
        """Chase x <- g <- f <- ... backwards: "X-stopper", "Y-stopper" or "cyclic"."""
        seen = {x}
        for _ in range(self.fuel):
            y = self.g.preimage(x)
            if y is None:
                return "X-stopper"
            x = self.f.preimage(y)
            if x is None:
                return "Y-stopper"
            if x in seen:
                return "cyclic"
            seen.add(x)
        raise FuelExhausted(f"chain from {x!r} undetermined after {self.fuel} steps")

    def classify_right(self, y) -> str:
        seen = {y}
        for _ in range(self.fuel):
            x = self.f.preimage(y)
            if x is None:
                return "Y-stopper"
            y = self.g.preimage(x)
            if y is None:
                return "X-stopper"
            if y in seen:
                return "cyclic"
            seen.add(y)
        raise FuelExhausted(f"chain from {y!r} undetermined after {self.fuel} steps")

    def forward(self, x):
        if self.classify(x) == "Y-stopper":
            return self.g.preimage(x)
        return self.f.apply(x)

    def inverse(self, y):
        if self.classify_right(y) == "Y-stopper":
            return self.g.apply(y)
        return self.f.preimage(y)


def sb_bijection(X, Y, f: Embedding, g: Embedding, fuel: int = 1000) -> IsoMap:
    """Bijection X -> Y from f: X -> initial segment of Y and g: Y -> final segment of X."""
    sb = _SB(f, g, fuel)
    return IsoMap(sb.forward, sb.inverse, "schroeder-bernstein", {"classify": sb.classify})


def power_compare(X: Order, p: tuple, q: tuple) -> Cmp:
    for a, b in zip(p, q):
        c = X.compare(a, b)
        if c:
            return c
    return Cmp.EQ


def endpoints_square_iso(X, n: int, h: IsoMap, fuel: int = 1000) -> IsoMap:
    """X^2 -> X for X with both endpoints, from an isomorphism h: X^n -> X.

    X^2 has the initial segment {min} x X = X^n, and X^n has the final segment
    {max}^(n-2) x X^2; Schroeder-Bernstein glues these into X^n = X^2.
    """
    X = construct(X)
    if not (X.has_min and X.has_max):
        raise MissingEndpoints(f"{X.descriptor!r} needs both endpoints")
    if n < 2:
        raise ValueError("n must be >= 2")
    lo, hi = X.min, X.max
    top = (hi,) * (n - 2)
    f = Embedding(
        lambda v: (lo, h.forward(v)),
        lambda p: h.inverse(p[1]) if p[0] == lo else None,
    )
    g = Embedding(
        lambda p: top + tuple(p),
        lambda v: tuple(v[n - 2:]) if tuple(v[:n - 2]) == top else None,
    )
    H = sb_bijection(("power", n), ("power", 2), f, g, fuel)

    def forward(p):
        return h.forward(H.inverse(tuple(p)))

    def inverse(x):
        return H.forward(h.inverse(x))

    return IsoMap(forward, inverse, f"endpoints-square(n={n})", {"sb": H})


# ---------------------------------------------------------------------------
# square limits


def sql_power_iso(X) -> IsoMap:
    """X -> X^n for X = SqLimit(base, n), splitting the top level of a stage tuple."""
    O = construct(X)
    if not isinstance(O.descriptor, SqLimit):
        raise InvalidElement(f"{O.descriptor!r} is not a square limit")
    n = O.n

    def forward(x: Stage):
        i = x.i
        leaves = O.leaves(x) if i > 0 else O.lift(x, 1)
        i = max(i, 1)
        size = len(leaves) // n
        return tuple(O.make(i - 1, leaves[c * size:(c + 1) * size]) for c in range(n))

    def inverse(parts):
        parts = tuple(parts)
        if len(parts) != n:
            raise InvalidElement(f"expected {n} components")
        j = max(p.i for p in parts)
        return O.make(j + 1, [leaf for p in parts for leaf in O.lift(p, j)])

    return IsoMap(forward, inverse, f"sqlimit-power(n={n})")


def span_witness(X, x: Stage) -> tuple:
    """Base points a, b with diag(a) <= x <= diag(b)."""
    O = construct(X)
    leaves = O.leaves(x)
    a = b = leaves[0]
    for leaf in leaves[1:]:
        if O.base.compare(leaf, a) < 0:
            a = leaf
        if O.base.compare(leaf, b) > 0:
            b = leaf
    return a, b


# ---------------------------------------------------------------------------
# digit decompositions


def address(X, iso_AX: IsoMap, x, depth: int) -> tuple:
    """First ``depth`` letters of the A^omega address of x under iso_AX: A x X -> X."""
    out = []
    for _ in range(depth):
        a, x = iso_AX.inverse(x)
        out.append(a[0] if isinstance(a, tuple) and len(a) == 1 else a)
    return tuple(out)


def right_decompose(X, iso_XA: IsoMap, x, depth: int):
    """Peel ``depth`` right digits with iso_XA: X -> X x A; returns (digits, x_depth)."""
    digits = []
    for _ in range(depth):
        x, a = iso_XA.forward(x)
        digits.append(a)
    return tuple(digits), x


def rebuild_from_digits(X, iso_XA: IsoMap, anchor, digits: Sequence):
    y = anchor
    for a in reversed(tuple(digits)):
        y = iso_XA.inverse((y, a))
    return y


def zeta_binary_iso() -> IsoMap:
    """Z -> Z x 2, z -> (floor(z/2), z mod 2)."""

    def inverse(p):
        z, b = p
        if b not in (0, 1):
            raise InvalidElement(f"{b!r} is not a binary digit")
        return 2 * z + b

    return IsoMap(lambda z: divmod(z, 2), inverse, "zeta-binary")
