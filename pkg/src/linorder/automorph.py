"""Standard maps and piecewise automorphisms of A^omega.

The standard map on an interval [r^, s^] shifts by |r| below r.s^ and
prepends s above it.  Covers of A by Z-, omega- and omega*-intervals glue
standard maps (plus a sigma-conjugated copy near each omega left endpoint)
into automorphisms of the whole of A^omega that move every point u into the
n-tail class of a.u.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .epseq import (
    EpSeq, _canon, compare_ep, const, head, prepend, shift, tail_equiv_n,
)
from .errors import BadCover, InvalidElement, NoEndpoints, NotLocated, OutOfInterval
from .orders import (
    Dyadic, Eta, Lex, Omega, OmegaStar, Order, Rev, Sum, Tag, Zeta, construct,
)

__all__ = [
    "StdInterval", "standard_map_apply", "standard_map_invert", "StdPiece", "ConjPiece",
    "FixPiece", "IdentityPiece", "Cover", "default_cover", "PiecewiseAuto", "build_pra",
    "build_nra", "piecewise_apply", "verify_automorphism", "Report", "rebase",
    "random_epseq", "sample_epseqs", "identity_auto", "swapped_standard_auto",
]

Z, OMEGA, OMEGA_STAR, TWO = "Z", "omega", "omega*", "2"


def rebase(u: EpSeq, order: Order) -> EpSeq:
    """Same entries, read over another order with the same points (e.g. a reversal)."""
    return EpSeq(order, u.prefix, u.period)


# ---------------------------------------------------------------------------
# standard maps


class StdInterval:
    """The interval [r^, s^] of A^omega together with its two break points."""

    def __init__(self, base, r, s):
        self.order = construct(base)
        self.r = tuple(self.order.check(x) for x in r)
        self.s = tuple(self.order.check(x) for x in s)
        if not self.r or not self.s:
            raise InvalidElement("standard interval words must be nonempty")
        self.rbar = _canon(self.order, (), self.r)
        self.sbar = _canon(self.order, (), self.s)
        if compare_ep(self.rbar, self.sbar) >= 0:
            raise InvalidElement(f"need r^ < s^, got r={self.r!r}, s={self.s!r}")
        # the two break points (rs)^ and (sr)^
        self.rs = _canon(self.order, (), self.r + self.s)
        self.sr = _canon(self.order, (), self.s + self.r)

    def contains(self, u: EpSeq) -> bool:
        return compare_ep(self.rbar, u) <= 0 <= compare_ep(self.sbar, u)

    def __repr__(self):
        return f"StdInterval(r={self.r!r}, s={self.s!r})"


def _require(iv: StdInterval, u: EpSeq):
    if not iv.contains(u):
        raise OutOfInterval(f"{u!r} is outside [{iv.rbar!r}, {iv.sbar!r}]")


def standard_map_apply(iv: StdInterval, u: EpSeq) -> EpSeq:
    _require(iv, u)
    if compare_ep(u, iv.rs) <= 0:
        return shift(u, len(iv.r))
    return prepend(iv.s, u)


def standard_map_invert(iv: StdInterval, u: EpSeq) -> EpSeq:
    _require(iv, u)
    if compare_ep(u, iv.sr) <= 0:
        return prepend(iv.r, u)
    return shift(u, len(iv.s))


# ---------------------------------------------------------------------------
# pieces


class StdPiece:
    kind = "std"

    def __init__(self, iv: StdInterval, swapped: bool = False):
        self.iv = iv
        self.swapped = swapped  # fault injection: exchange the two branches

    def contains(self, u):
        return self.iv.contains(u)

    def apply(self, u):
        if not self.swapped:
            return standard_map_apply(self.iv, u)
        _require(self.iv, u)
        if compare_ep(u, self.iv.rs) <= 0:
            return prepend(self.iv.s, u)
        return shift(u, len(self.iv.r))

    def invert(self, u):
        if not self.swapped:
            return standard_map_invert(self.iv, u)
        _require(self.iv, u)
        if compare_ep(u, self.iv.sr) <= 0:
            return shift(u, len(self.iv.s))
        return prepend(self.iv.r, u)

    def describe(self):
        return {"piece": "std", "r": list(self.iv.r), "s": list(self.iv.s)}


class ConjPiece:
    """x.f(sigma u) on [x.0^, x^] where f is the standard map on [0^, x^]."""

    kind = "conj"

    def __init__(self, x, inner: StdInterval):
        self.x = x
        self.inner = inner
        self.lo = prepend((x,), inner.rbar)
        self.hi = inner.sbar

    def contains(self, u):
        return compare_ep(self.lo, u) <= 0 <= compare_ep(self.hi, u)

    def _check(self, u):
        if not self.contains(u):
            raise OutOfInterval(f"{u!r} is outside [{self.lo!r}, {self.hi!r}]")

    def apply(self, u):
        self._check(u)
        return prepend((self.x,), standard_map_apply(self.inner, shift(u, 1)))

    def invert(self, u):
        self._check(u)
        return prepend((self.x,), standard_map_invert(self.inner, shift(u, 1)))

    def describe(self):
        return {"piece": "conj", "x": self.x, "r": list(self.inner.r), "s": list(self.inner.s)}


class FixPiece:
    kind = "fix"

    def __init__(self, point: EpSeq):
        self.point = point

    def contains(self, u):
        return u == self.point

    def apply(self, u):
        if u != self.point:
            raise OutOfInterval(f"{u!r} is not the fixed point {self.point!r}")
        return u

    invert = apply

    def describe(self):
        return {"piece": "fix", "point": repr(self.point)}


class IdentityPiece:
    kind = "identity"

    def contains(self, u):
        return True

    def apply(self, u):
        return u

    invert = apply

    def describe(self):
        return {"piece": "identity"}


class TransportedPiece:
    """A piece built over a reorder of the same point set (used for reversals)."""

    def __init__(self, piece, inner_order: Order, outer_order: Order):
        self.piece = piece
        self.inner_order = inner_order
        self.outer_order = outer_order
        self.kind = piece.kind

    def contains(self, u):
        return self.piece.contains(rebase(u, self.inner_order))

    def apply(self, u):
        return rebase(self.piece.apply(rebase(u, self.inner_order)), self.outer_order)

    def invert(self, u):
        return rebase(self.piece.invert(rebase(u, self.inner_order)), self.outer_order)

    def describe(self):
        return {"piece": "transported", "inner": self.piece.describe()}


# ---------------------------------------------------------------------------
# covers


@dataclass
class Cover:
    """Disjoint intervals of A, each with a strictly increasing spanning sequence.

    ``locate(a)`` returns ``(id, k)`` with ``span(id, k) <= a < span(id, k + 1)``
    (for an omega* interval, index 0 is its right endpoint and ``a == span(id, 0)``
    is located at 0).  omega intervals use k >= 0, omega* intervals k <= 0.
    """

    order: Order
    kinds: frozenset
    span: Callable[[Any, int], Any]
    locate: Callable[[Any], tuple]
    kind_of: Callable[[Any], str]
    name: str = "cover"


def _dyadic_locate(w: str):
    if not w:
        return 0, 0
    c = w[0]
    j = len(w) - len(w.lstrip(c))
    if c == "R":
        return 0, (j if j == len(w) else j - 1)
    return 0, -j


def default_cover(A) -> Cover:
    """Canned covers for the constructors that admit one."""
    A = construct(A)
    d = A.descriptor
    if A.has_min and A.has_max:
        raise BadCover(f"{d!r} has both endpoints; use the both_endpoints strategy")
    one = lambda kind: (lambda i: kind)  # noqa: E731
    if isinstance(d, Omega):
        return Cover(A, frozenset({OMEGA}), lambda i, k: k, lambda a: (0, a), one(OMEGA), "omega")
    if isinstance(d, OmegaStar):
        return Cover(A, frozenset({OMEGA_STAR}), lambda i, k: k, lambda a: (0, a), one(OMEGA_STAR), "omegastar")
    if isinstance(d, Zeta):
        return Cover(A, frozenset({Z}), lambda i, k: k, lambda a: (0, a), one(Z), "zeta")
    if isinstance(d, Eta):
        return Cover(A, frozenset({Z}), lambda i, k: Fraction(k), lambda a: (0, a.numerator // a.denominator), one(Z), "eta-integers")
    if isinstance(d, Dyadic):
        span = lambda i, k: "R" * k if k >= 0 else "L" * -k  # noqa: E731
        return Cover(A, frozenset({Z}), span, _dyadic_locate, one(Z), "dyadic-spine")
    if isinstance(d, Sum):
        cl, cr = default_cover(d.left), default_cover(d.right)
        sides = {"L": cl, "R": cr}

        def span(i, k):
            return Tag(i[0], sides[i[0]].span(i[1], k))

        def locate(a):
            cid, k = sides[a.side].locate(a.value)
            return (a.side, cid), k

        return Cover(A, cl.kinds | cr.kinds, span, locate,
                     lambda i: sides[i[0]].kind_of(i[1]), f"sum({cl.name},{cr.name})")
    if isinstance(d, Lex) and len(d.factors) == 2:
        cy = default_cover(d.factors[1])
        return Cover(
            A, cy.kinds,
            lambda i, k: (i[0], cy.span(i[1], k)),
            lambda a: ((a[0], cy.locate(a[1])[0]), cy.locate(a[1])[1]),
            lambda i: cy.kind_of(i[1]),
            f"lex(*,{cy.name})",
        )
    if isinstance(d, Rev):
        return reverse_cover(default_cover(d.inner), A)
    raise BadCover(f"no canned cover for {d!r}")


_SWAP = {Z: Z, OMEGA: OMEGA_STAR, OMEGA_STAR: OMEGA, TWO: TWO}


def reverse_cover(c: Cover, rev_order: Order) -> Cover:
    """The same intervals read in the reversed order."""

    def locate(a):
        i, k = c.locate(a)
        return (i, -k) if a == c.span(i, k) else (i, -(k + 1))

    return Cover(
        rev_order,
        frozenset(_SWAP[k] for k in c.kinds),
        lambda i, k: c.span(i, -k),
        locate,
        lambda i: _SWAP[c.kind_of(i)],
        f"rev({c.name})",
    )


# ---------------------------------------------------------------------------
# piecewise automorphisms


class PiecewiseAuto:
    """An automorphism of A^omega given by a lazy piece finder.

    ``finder(u)`` returns the candidate pieces whose closed guard may contain u;
    boundary points may return several, which must agree.
    """

    def __init__(self, base, modulus: int, finder, name: str = "auto"):
        self.order = construct(base)
        self.modulus = modulus
        self.finder = finder
        self.name = name

    def pieces_for(self, u: EpSeq) -> list:
        return [p for p in self.finder(u) if p.contains(u)]

    def apply(self, u):
        return piecewise_apply(self, u, "forward")

    def invert(self, u):
        return piecewise_apply(self, u, "inverse")

    __call__ = apply

    def __repr__(self):
        return f"PiecewiseAuto({self.name}, n={self.modulus})"


def piecewise_apply(F: PiecewiseAuto, u: EpSeq, direction: str = "forward") -> EpSeq:
    if u.order != F.order:
        u = rebase(u, F.order) if u.order.descriptor == F.order.descriptor else u
    pieces = F.pieces_for(u)
    if not pieces:
        raise NotLocated(f"no piece of {F!r} contains {u!r}")
    if direction == "forward":
        outs = [p.apply(u) for p in pieces]
    elif direction == "inverse":
        outs = [p.invert(u) for p in pieces]
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if any(o != outs[0] for o in outs[1:]):
        raise NotLocated(f"pieces disagree at {u!r}: {outs!r}")
    return outs[0]


def _both_endpoints(A: Order, n: int) -> PiecewiseAuto:
    if A.min == A.max:
        piece = FixPiece(const(A, A.min))
        return PiecewiseAuto(A, n, lambda u: [piece], "both-endpoints(point)")
    piece = StdPiece(StdInterval(A, (A.min,) * (n - 1), (A.max,)))
    return PiecewiseAuto(A, n, lambda u: [piece], "both-endpoints")


def _cover_finder(A: Order, n: int, cover: Cover, swapped: bool = False):
    low = (A.min,) * (n - 1) if A.has_min else None
    cache: dict = {}

    def std(i, k):
        key = ("std", i, k)
        if key not in cache:
            iv = StdInterval(A, (cover.span(i, k),) * (n - 1), (cover.span(i, k + 1),))
            cache[key] = StdPiece(iv, swapped)
        return cache[key]

    def conj(x):
        key = ("conj", x)
        if key not in cache:
            if x == A.min:
                cache[key] = FixPiece(const(A, x))
            else:
                cache[key] = ConjPiece(x, StdInterval(A, low, (x,)))
        return cache[key]

    def has_prev(i, k):
        return cover.kind_of(i) == Z or k > 0

    def finder(u):
        a = head(u)
        i, k = cover.locate(a)
        x = cover.span(i, k)
        if a != x:
            return [std(i, k)]
        c = compare_ep(u, const(A, x))
        if c > 0:
            return [std(i, k)]
        below = std(i, k - 1) if has_prev(i, k) else conj(x)
        if c < 0:
            return [below]
        return [std(i, k), below]

    return finder


def _check_cover(A: Order, cover: Cover):
    if cover.order != A:
        raise BadCover(f"cover is for {cover.order!r}, not {A!r}")
    kinds = set(cover.kinds)
    if kinds <= {Z}:
        if A.has_min or A.has_max:
            # a Z-cover forces A to be endpoint-free
            raise BadCover("Z-cover of an order with an endpoint")
        return 1
    if kinds <= {Z, OMEGA}:
        if not A.has_min:
            raise NoEndpoints("a cover with omega intervals needs a minimum")
        return 2
    if kinds <= {Z, OMEGA_STAR}:
        if not A.has_max:
            raise NoEndpoints("a cover with omega* intervals needs a maximum")
        return 3
    raise BadCover(f"unsupported mix of interval kinds {sorted(kinds)}")


def build_nra(A, n: int, strategy="auto", swapped: bool = False) -> PiecewiseAuto:
    """An n-revolving automorphism of A^omega.

    ``strategy`` is "both_endpoints", "cover" / "auto" (canned cover, or both
    endpoints when A has them), or an explicit :class:`Cover`.
    """
    A = construct(A)
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if strategy == "both_endpoints" or (strategy == "auto" and A.has_min and A.has_max):
        if not (A.has_min and A.has_max):
            raise NoEndpoints(f"{A.descriptor!r} lacks an endpoint")
        F = _both_endpoints(A, n)
        if swapped:
            (piece,) = F.finder(None)
            if isinstance(piece, StdPiece):
                bad = StdPiece(piece.iv, swapped=True)
                F = PiecewiseAuto(A, n, lambda u: [bad], "both-endpoints(swapped)")
        return F
    cover = default_cover(A) if strategy in ("auto", "cover") else strategy
    if not isinstance(cover, Cover):
        raise BadCover(f"unknown strategy {strategy!r}")
    case = _check_cover(A, cover)
    if case in (1, 2):
        return PiecewiseAuto(A, n, _cover_finder(A, n, cover, swapped), f"cover-case{case}({cover.name})")
    # case 3: build case 2 over the reversed order; (A*)^omega is (A^omega)* on the
    # same points, so an automorphism of one is an automorphism of the other
    R = construct(Rev(A.descriptor))
    inner = _cover_finder(R, n, reverse_cover(cover, R), swapped)

    def finder(u):
        return [TransportedPiece(p, R, A) for p in inner(rebase(u, R))]

    return PiecewiseAuto(A, n, finder, f"cover-case3({cover.name})")


def build_pra(A, strategy="auto", swapped: bool = False) -> PiecewiseAuto:
    """A parity-reversing automorphism: the n = 2 case of :func:`build_nra`."""
    return build_nra(A, 2, strategy, swapped)


def identity_auto(A, n: int = 2) -> PiecewiseAuto:
    piece = IdentityPiece()
    return PiecewiseAuto(A, n, lambda u: [piece], "identity")


def swapped_standard_auto(A, n: int = 2) -> PiecewiseAuto:
    return build_nra(A, n, "both_endpoints", swapped=True)


# ---------------------------------------------------------------------------
# sampling and verification


def random_epseq(A: Order, rng: random.Random, max_prefix: int = 6, max_period: int = 4,
                 pool: int = 12) -> EpSeq:
    """A random eventually periodic sequence over the first ``pool`` enumerated points."""
    A = construct(A)
    small = rng.random() < 0.5
    width = min(pool, 3) if small else pool

    def letter():
        return A.nth(rng.randrange(width))

    prefix = tuple(letter() for _ in range(rng.randint(0, max_prefix)))
    period = tuple(letter() for _ in range(rng.randint(1, max_period)))
    return _canon(A, prefix, period)


def sample_epseqs(A, count: int, rng: random.Random, depth: int = 8, pool: int = 12) -> list:
    """Random samples mixed with boundary-heavy shapes x^, x.y^, x.y.z^."""
    A = construct(A)
    out = []
    for t in range(count):
        shape = t % 4
        if shape == 0:
            out.append(const(A, A.nth(rng.randrange(pool))))
        elif shape == 1:
            xs = [A.nth(rng.randrange(pool)) for _ in range(rng.randint(2, 3))]
            out.append(_canon(A, tuple(xs[:-1]), (xs[-1],)))
        else:
            out.append(random_epseq(A, rng, max_prefix=min(depth, 8), pool=pool))
    return out


@dataclass
class Report:
    samples: int
    depth: int
    seed: int
    modulus: int
    order_violations: list = field(default_factory=list)
    parity_violations: list = field(default_factory=list)
    roundtrip_failures: list = field(default_factory=list)
    fixed_points: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.order_violations or self.parity_violations or self.roundtrip_failures)

    @property
    def violations(self) -> int:
        return len(self.order_violations) + len(self.parity_violations) + len(self.roundtrip_failures)

    def as_dict(self) -> dict:
        return {
            "samples": self.samples,
            "depth": self.depth,
            "seed": self.seed,
            "modulus": self.modulus,
            "passed": self.passed,
            "order_violations": self.order_violations,
            "parity_violations": self.parity_violations,
            "roundtrip_failures": self.roundtrip_failures,
            "fixed_points": self.fixed_points,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, default=str)


def _fmt(u) -> str:
    from .parse import format_seq
    return format_seq(u)


def _fmt_el(A, a) -> str:
    from .parse import format_element
    return format_element(A, a)


def verify_automorphism(F: PiecewiseAuto, samples: int = 200, depth: int = 16, seed: int = 0,
                        letters: int = 3, limit: int = 5) -> Report:
    """Sampled check of order preservation, the revolving law and invertibility.

    ``depth`` bounds the prefix length of sampled sequences.  Each sample u is
    checked against a.u for ``letters`` sampled letters a.  At most ``limit``
    counterexamples of each kind are kept.
    """
    rng = random.Random(seed)
    A, n = F.order, F.modulus
    rep = Report(samples, depth, seed, n)
    us = sample_epseqs(A, samples, rng, depth)
    vs = sample_epseqs(A, samples, rng, depth)
    rng.shuffle(vs)
    letter_pool = [A.nth(rng.randrange(12)) for _ in range(letters)]
    images = {}

    def image(u):
        if u not in images:
            try:
                images[u] = F.apply(u)
            except Exception as exc:  # noqa: BLE001 - recorded as data
                images[u] = exc
        return images[u]

    def keep(lst, item):
        if len(lst) < limit and item not in lst:
            lst.append(item)

    for u, v in zip(us, vs):
        fu, fv = image(u), image(v)
        for w, fw in ((u, fu), (v, fv)):
            if isinstance(fw, Exception):
                keep(rep.roundtrip_failures, {"u": _fmt(w), "error": f"{type(fw).__name__}: {fw}"})
        if isinstance(fu, Exception) or isinstance(fv, Exception):
            continue
        if compare_ep(u, v) != compare_ep(fu, fv):
            keep(rep.order_violations, {"u": _fmt(u), "v": _fmt(v), "fu": _fmt(fu), "fv": _fmt(fv)})
        try:
            back = F.invert(fu)
            ok = back == u and F.apply(F.invert(u)) == u
        except Exception:  # noqa: BLE001
            ok = False
        if not ok:
            keep(rep.roundtrip_failures, {"u": _fmt(u)})
        if fu == u and len(rep.fixed_points) < limit and _fmt(u) not in rep.fixed_points:
            rep.fixed_points.append(_fmt(u))
        for a in letter_pool:
            if tail_equiv_n(fu, prepend((a,), u), n) is None:
                keep(rep.parity_violations, {"u": _fmt(u), "a": _fmt_el(A, a), "fu": _fmt(fu)})
                break
    return rep
