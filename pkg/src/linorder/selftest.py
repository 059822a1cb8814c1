"""Property suites and the ten acceptance criteria, as deterministic checks.

Every suite returns a :class:`SuiteResult`; reports contain no timings so that
two runs with the same seed produce byte-identical JSON.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Optional

from . import oracles
from .automorph import (
    StdInterval, StdPiece, build_nra, build_pra, random_epseq, sample_epseqs,
    verify_automorphism,
)
from .epseq import (
    canonicalize, compare_ep, const, eventual_period, prepend, shift, tail_equiv_n,
)
from .errors import NoWitness
from .isobuild import (
    ClassAssignment, Embedding, IsoMap, address, check_rep_point, endpoints_square_iso,
    fl_iso, flatten_rep_iso, power_compare, pra_lift, rebuild_from_digits, rep_compare,
    right_decompose, sample_rep_points, sb_bijection, shuffle_absorb_iso, span_witness,
    sql_power_iso, zeta_binary_iso,
)
from .orders import (
    Dyadic, Eta, Finite, Lex, Omega, OmegaStar, RepPoint, Rev, Shuffle, SqLimit, Sum, Zeta,
    construct,
)
from .parse import format_order, format_seq, parse_order_expr

BUDGETS = {"small": 0.2, "full": 1.0}


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    counterexample: Optional[str] = None

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "counterexample": self.counterexample,
        }


class _Tally:
    def __init__(self, name):
        self.name = name
        self.checks = 0
        self.failure: Optional[str] = None

    def check(self, ok: bool, what: Callable[[], str] | str = ""):
        self.checks += 1
        if not ok and self.failure is None:
            self.failure = what() if callable(what) else what
        return ok

    def result(self) -> SuiteResult:
        return SuiteResult(self.name, self.failure is None, self.checks, self.failure)


def _n(count: int, scale: float) -> int:
    return max(1, round(count * scale))


def _raw(rng, A, max_prefix=6, max_period=6):
    letters = [A.nth(i) for i in range(A.size)]
    prefix = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_prefix)))
    period = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_period)))
    return prefix, period


def _seq_cmp(A, u, v, depth=64):
    return oracles.termwise_compare(A.compare, oracles.terms(u, depth), oracles.terms(v, depth))


# ---------------------------------------------------------------------------
# acceptance criteria


def criterion_1(seed=1, scale=1.0) -> SuiteResult:
    """canonical forms and comparison against depth-64 termwise oracles."""
    t = _Tally("1 epseq foundations")
    rng = random.Random(seed * 1000 + 1)
    for base in (Finite(2), Finite(3)):
        A = construct(base)
        seqs = []
        for _ in range(_n(1000, scale)):
            prefix, period = _raw(rng, A)
            u = canonicalize(base, prefix, period)
            raw = type("Raw", (), {"prefix": prefix, "period": period})
            t.check(oracles.terms(u, 64) == oracles.terms(raw, 64), lambda: f"canonicalize changed {prefix}|{period}")
            t.check(oracles.is_primitive(u.period) and (not u.prefix or u.prefix[-1] != u.period[-1]),
                    lambda: f"not canonical: {format_seq(u)}")
            # an unrolled, doubled presentation must reach the same normal form
            alt = canonicalize(base, prefix + period, period * 2)
            t.check(alt == u, lambda: f"normal form not unique for {prefix}|{period}")
            seqs.append(u)
        for u, v in zip(seqs, reversed(seqs)):
            c = compare_ep(u, v)
            t.check(int(c) == _seq_cmp(A, u, v), lambda: f"compare_ep {format_seq(u)} vs {format_seq(v)}")
            t.check(compare_ep(v, u) == -c, lambda: f"antisymmetry {format_seq(u)} {format_seq(v)}")
            t.check((c == 0) == (u == v), lambda: f"EQ iff identical {format_seq(u)} {format_seq(v)}")
        for _ in range(_n(300, scale)):
            x, y, z = rng.sample(seqs, 3)
            if compare_ep(x, y) <= 0 and compare_ep(y, z) <= 0:
                t.check(compare_ep(x, z) <= 0, lambda: f"transitivity {format_seq(x)} {format_seq(y)} {format_seq(z)}")
    return t.result()


def criterion_2(seed=1, scale=1.0) -> SuiteResult:
    """odd-period law and agreement with exhaustive shift search."""
    t = _Tally("2 odd-period law")
    rng = random.Random(seed * 1000 + 2)
    for base in (Finite(2), Finite(3)):
        A = construct(base)
        for _ in range(_n(500, scale)):
            u = canonicalize(base, *_raw(rng, A, 5, 5))
            a = A.nth(rng.randrange(A.size))
            au = prepend((a,), u)
            law = tail_equiv_n(au, u, 2) is not None
            t.check(law == (eventual_period(u) % 2 == 1), lambda: f"odd-period law at {format_seq(u)}")
            t.check(law == (oracles.exhaustive_tail_equiv(au, u, 2) is not None),
                    lambda: f"exhaustive search disagrees at {format_seq(u)}")
            # unrelated and related partners for n = 1, 2, 3
            n = rng.randint(1, 3)
            if rng.random() < 0.5:
                w = tuple(A.nth(rng.randrange(A.size)) for _ in range(rng.randint(0, 4)))
                v = prepend(w, shift(u, rng.randrange(5)))
            else:
                v = canonicalize(base, *_raw(rng, A, 5, 5))
            wit = tail_equiv_n(u, v, n)
            ref = oracles.exhaustive_tail_equiv(u, v, n)
            t.check((wit is None) == (ref is None), lambda: f"~{n} decision {format_seq(u)} {format_seq(v)}")
            if wit is not None:
                k, l = wit
                t.check((k - l) % n == 0 and oracles.terms(u, 64, k) == oracles.terms(v, 64, l),
                        lambda: f"bad witness {wit} for {format_seq(u)} {format_seq(v)}")
    return t.result()


def criterion_3(seed=1, scale=1.0, corrupt: bool = False) -> SuiteResult:
    """standard map on [0^, 1^] over 2."""
    t = _Tally("3 standard-map laws")
    rng = random.Random(seed * 1000 + 3)
    A = construct(Finite(2))
    piece = StdPiece(StdInterval(A, (0,), (1,)), swapped=corrupt)
    f, finv = piece.apply, piece.invert
    zero, one = const(A, 0), const(A, 1)
    samples = [zero, one] + [random_epseq(A, rng, 8, 5, 2) for _ in range(_n(500, scale))]
    partners = samples[1:] + samples[:1]
    # order first, so a broken map reports a concrete pair
    for u, v in zip(samples, partners):
        fu, fv = f(u), f(v)
        t.check(_seq_cmp(A, u, v) == _seq_cmp(A, fu, fv),
                lambda: f"order not preserved: u={format_seq(u)} v={format_seq(v)} f(u)={format_seq(fu)} f(v)={format_seq(fv)}")
    for u in samples:
        fu = f(u)
        t.check(finv(fu) == u and f(finv(u)) == u, lambda: f"round trip fails at {format_seq(u)}")
        for a in (0, 1):
            t.check(oracles.exhaustive_tail_equiv(fu, prepend((a,), u), 2) is not None,
                    lambda: f"f(u) not ~2 {a}u at u={format_seq(u)}")
        t.check((fu == u) == (u in (zero, one)), lambda: f"unexpected fixed-point status at {format_seq(u)}")
    return t.result()


PRA_ORDERS = (Zeta(), Eta(), Omega(), Sum(Omega(), Omega()), Rev(Sum(Omega(), Omega())))


def _verify_suite(t: _Tally, F, samples, depth, seed):
    rep = verify_automorphism(F, samples, depth, seed)
    t.check(rep.passed, lambda: f"{F!r}: {rep.to_json()}")
    # independent spot check of the revolving law with the brute-force oracle
    rng = random.Random(seed)
    for u in sample_epseqs(F.order, max(1, samples // 10), rng, depth):
        a = F.order.nth(rng.randrange(6))
        fu = F.apply(u)
        t.check(oracles.exhaustive_tail_equiv(fu, prepend((a,), u), F.modulus, scale=1) is not None,
                lambda: f"{F!r}: oracle rejects f({format_seq(u)}) ~{F.modulus} a.u")
    return rep


def criterion_4(seed=1, scale=1.0) -> SuiteResult:
    """cover-based parity-reversing automorphisms in all three cases."""
    t = _Tally("4 cover-based p.r.a.")
    for i, d in enumerate(PRA_ORDERS):
        _verify_suite(t, build_pra(d), _n(500, scale), 32, seed * 1000 + 40 + i)
    return t.result()


def criterion_5(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("5 n-revolving (n=3)")
    for i, d in enumerate((Finite(2), Zeta())):
        _verify_suite(t, build_nra(d, 3), _n(500, scale), 32, seed * 1000 + 50 + i)
    return t.result()


def example_assignment() -> ClassAssignment:
    Z = Zeta()
    return ClassAssignment(
        Z, 2,
        [(canonicalize(Z, (), (0, 1)), Finite(2)), (canonicalize(Z, (), (1, 0)), Finite(3))],
        None,
    )


def criterion_6(seed=1, scale=1.0) -> SuiteResult:
    """A^2 X -> X flattening and the X -> A X lift for a two-class assignment."""
    t = _Tally("6 cube-to-square pipeline")
    rng = random.Random(seed * 1000 + 6)
    CA = example_assignment()
    A = CA.order
    count = _n(500, scale)
    pts = sample_rep_points(CA, count + 1, rng)
    fl = flatten_rep_iso(CA)
    lift = pra_lift(CA, build_pra(A), samples=count, depth=32, seed=seed)

    def ax_cmp(p, q):
        c = A.compare(p[0], q[0])
        return c if c else rep_compare(CA, p[1], q[1])

    def a2x_cmp(p, q):
        c = oracles.termwise_compare(A.compare, p[0], q[0])
        return c if c else rep_compare(CA, p[1], q[1])

    for x, y in zip(pts, pts[1:]):
        c = rep_compare(CA, x, y)
        # X -> A X
        fx, fy = lift.forward(x), lift.forward(y)
        check_rep_point(CA, fx[1])
        t.check(ax_cmp(fx, fy) == c, lambda: f"lift breaks order at {format_seq(x.address)}, {format_seq(y.address)}")
        t.check(lift.inverse(fx) == x, lambda: f"lift round trip at {format_seq(x.address)}")
        # A^2 X -> X, starting from the preimage pair
        px, py = fl.inverse(x), fl.inverse(y)
        check_rep_point(CA, px[1])
        t.check(a2x_cmp(px, py) == c, lambda: f"flattening breaks order at {format_seq(x.address)}")
        t.check(fl.forward(px) == x, lambda: f"flattening round trip at {format_seq(x.address)}")
        letters = (A.nth(rng.randrange(7)), A.nth(rng.randrange(7)))
        q = fl.forward((letters, x))
        check_rep_point(CA, q)
        t.check(CA.fiber_of(q.address) == CA.fiber_of(x.address), lambda: "prepending two letters changed the class")
    return t.result()


def criterion_7(seed=1, scale=1.0) -> SuiteResult:
    """5 x Shuffle(2; 1, 2) absorbs into the shuffle via a colored back-and-forth."""
    t = _Tally("7 shuffle invariance")
    L, X = Finite(5), Shuffle(2, Finite(1), Finite(2))
    iso, base = shuffle_absorb_iso(L, X, steps=_n(300, scale))
    bad = base.violations()
    t.check(not bad, lambda: f"back-and-forth violation {bad[0]!r}")
    t.check(len(base) >= _n(300, scale) // 2, "too few matched pairs")
    LX, Xo = construct(Lex(L, X)), construct(X)
    rng = random.Random(seed * 1000 + 7)
    points = []
    for b, _ in base.pairs:
        part = Xo.parts[len(b[1]) % 2]
        for i in range(part.size):
            points.append((b[0], RepPoint(b[1], i)))
    for _ in range(_n(50, scale)):
        p, q = rng.sample(points, 2)
        fp, fq = iso.forward(p), iso.forward(q)
        Xo.check(fp)
        t.check(LX.compare(p, q) == Xo.compare(fp, fq), lambda: f"lift breaks order at {p!r}, {q!r}")
        t.check(iso.inverse(fp) == p, lambda: f"lift round trip at {p!r}")
    return t.result()


def sb_scenario(name: str, fuel: int = 1000):
    """Built-in Schroeder-Bernstein scenarios over omega."""
    Om = construct(Omega())
    ident = Embedding(lambda k: k, lambda k: k)
    if name == "omega-shift3":
        g = Embedding(lambda k: k + 3, lambda k: k - 3 if k >= 3 else None)
    elif name == "omega-identity":
        g = ident
    elif name == "fin4-identity":
        F4 = construct(Finite(4))
        return F4, sb_bijection(F4, F4, ident, ident, fuel)
    else:
        raise KeyError(name)
    return Om, sb_bijection(Om, Om, ident, g, fuel)


def criterion_8(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("8 Schroeder-Bernstein")
    N = 200
    _, h = sb_scenario("omega-shift3")
    for k in range(N):
        t.check(h.forward(k) == k and h.inverse(k) == k, lambda: f"shift3 scenario moves {k}")
    _, h = sb_scenario("omega-identity")
    for k in range(N):
        t.check(h.extra["classify"](k) == "cyclic", lambda: f"chain from {k} not cyclic")
        t.check(h.forward(k) == k, lambda: f"identity scenario moves {k}")
    return t.result()


def criterion_9(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("9 square limits")
    rng = random.Random(seed * 1000 + 9)
    X = construct(SqLimit(Finite(2), 2))
    I = sql_power_iso(X)
    xs = [X.nth(rng.randrange(400)) for _ in range(_n(200, scale))]
    ys = xs[1:] + xs[:1]
    for x, y in zip(xs, ys):
        px, py = I.forward(x), I.forward(y)
        t.check(power_compare(X, px, py) == X.compare(x, y), lambda: f"power iso breaks order at {x}, {y}")
        t.check(I.inverse(px) == x and all(X.check(c) == c for c in px), lambda: f"power iso round trip at {x}")
        a, b = span_witness(X, x)
        lo, hi = X.make(0, [a]), X.make(0, [b])
        t.check(X.compare(lo, x) <= 0 <= X.compare(hi, x), lambda: f"{x} not spanned")
    for _ in range(_n(100, scale)):
        # surjectivity: a random pair of components comes from some point
        comps = (X.nth(rng.randrange(200)), X.nth(rng.randrange(200)))
        t.check(I.forward(I.inverse(comps)) == comps, lambda: f"power iso misses {comps}")
    X3 = construct(SqLimit(Finite(2), 3))
    I3 = sql_power_iso(X3)
    E = endpoints_square_iso(X3, 3, IsoMap(I3.inverse, I3.forward, "sqlimit-power-inverse"))
    pairs = [(X3.nth(rng.randrange(300)), X3.nth(rng.randrange(300))) for _ in range(_n(200, scale))]
    images = [E.forward(p) for p in pairs]
    for p, q, fp, fq in zip(pairs, pairs[1:] + pairs[:1], images, images[1:] + images[:1]):
        t.check(power_compare(X3, p, q) == X3.compare(fp, fq), lambda: f"X^2 -> X breaks order at {p}, {q}")
        t.check(E.inverse(fp) == p, lambda: f"X^2 -> X round trip at {p}")
    return t.result()


def criterion_10(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("10 decompositions")
    rng = random.Random(seed * 1000 + 10)
    A = construct(Finite(2))
    fl = fl_iso(A)
    for _ in range(_n(200, scale)):
        u = random_epseq(A, rng, 8, 5, 2)
        t.check(address(None, fl, u, 8) == oracles.terms(u, 8), lambda: f"address of {format_seq(u)}")
    zb = zeta_binary_iso()
    for _ in range(_n(300, scale)):
        x = rng.randint(-10_000, 10_000)
        d = rng.randint(0, 8)
        digits, anchor = right_decompose(Zeta(), zb, x, d)
        t.check(rebuild_from_digits(Zeta(), zb, anchor, digits) == x, lambda: f"rebuild {x} at depth {d}")
        t.check(right_decompose(Zeta(), zb, rebuild_from_digits(Zeta(), zb, anchor, digits), d) == (digits, anchor),
                lambda: f"decompose after rebuild {x}")
        t.check(anchor == x >> d and digits == tuple((x >> i) & 1 for i in range(d)), lambda: f"digits of {x}")
    t.check(right_decompose(Zeta(), zb, 5, 5) == ((1, 0, 1, 0, 0), 0), "digits of 5")
    return t.result()


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


# ---------------------------------------------------------------------------
# module property suites


CATALOG = (
    Finite(3), Omega(), OmegaStar(), Zeta(), Eta(), Dyadic(), Sum(Omega(), Zeta()),
    Lex(Zeta(), Finite(2)), Lex(Finite(2), Eta()), Rev(Omega()), Rev(Rev(Eta())),
    Shuffle(2, Finite(1), Finite(2)), Shuffle(3, Eta(), None, Finite(1)),
    SqLimit(Finite(2), 2), SqLimit(Zeta(), 2), Lex(Finite(2), Omega(), Finite(3)),
)


def suite_order_core(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("order-core properties")
    rng = random.Random(seed * 1000 + 101)
    for d in CATALOG:
        O = construct(d)
        pts = [O.check(O.nth(rng.randrange(300))) for _ in range(_n(120, scale))]
        for x, y, z in zip(pts, pts[1:], pts[2:]):
            cxy, cyx = O.compare(x, y), O.compare(y, x)
            t.check(cxy == -cyx and (cxy == 0) == (x == y), lambda: f"{format_order(d)} trichotomy {x!r} {y!r}")
            if cxy <= 0 and O.compare(y, z) <= 0:
                t.check(O.compare(x, z) <= 0, lambda: f"{format_order(d)} transitivity")
            lo, hi = (x, y) if cxy < 0 else (y, x)
            if cxy:
                try:
                    w = O.between(lo, hi)
                    t.check(O.compare(lo, w) < 0 < O.compare(hi, w), lambda: f"{format_order(d)} between {lo!r} {hi!r}")
                except NoWitness:
                    t.check(not O.is_dense, lambda: f"{format_order(d)} is dense but no witness in ({lo!r}, {hi!r})")
            if not O.has_max:
                w = O.above(x)
                t.check(O.compare(x, w) < 0, lambda: f"{format_order(d)} above {x!r}")
            if not O.has_min:
                w = O.below(x)
                t.check(O.compare(w, x) < 0, lambda: f"{format_order(d)} below {x!r}")
        if O.has_min:
            t.check(all(O.compare(O.min, p) <= 0 for p in pts), lambda: f"{format_order(d)} min")
        if O.has_max:
            t.check(all(O.compare(O.max, p) >= 0 for p in pts), lambda: f"{format_order(d)} max")
    D = construct(Dyadic())
    for _ in range(_n(200, scale)):
        u, v = sorted({D.nth(rng.randrange(200)) for _ in range(2)} | {"L", "R"},
                      key=lambda w: oracles.dyadic_key(w))[:2]
        k = rng.randint(1, 4)
        c = rng.randrange(k)
        w = D.between(u, v, (c, k))
        t.check(D.compare(u, w) < 0 < D.compare(v, w) and len(w) % k == c,
                lambda: f"colored witness ({u!r}, {v!r}) mod {k} = {c}")
    return t.result()


def suite_epseq_laws(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("epseq laws")
    rng = random.Random(seed * 1000 + 102)
    A = construct(Finite(2))
    for _ in range(_n(200, scale)):
        u = canonicalize(A, *_raw(rng, A, 5, 4))
        a = rng.randrange(2)
        t.check(shift(prepend((a,), u), 1) == u, lambda: f"shift(prepend) at {format_seq(u)}")
        k = rng.randrange(9)
        t.check(prepend(u.take(k), shift(u, k)) == u, lambda: f"prepend(take, shift) at {format_seq(u)}")
        n = rng.randint(1, 3)
        t.check(tail_equiv_n(u, shift(u, n), n) is not None, lambda: f"u ~{n} sigma^{n} u at {format_seq(u)}")
        v = prepend(tuple(rng.randrange(2) for _ in range(rng.randrange(4))), shift(u, rng.randrange(4)))
        w = prepend(tuple(rng.randrange(2) for _ in range(rng.randrange(4))), shift(u, rng.randrange(4)))
        if tail_equiv_n(u, v, 2) is not None:
            t.check(tail_equiv_n(u, v, 1) is not None, "refinement")
            t.check(tail_equiv_n(v, u, 2) is not None, "symmetry")
            if tail_equiv_n(v, w, 2) is not None:
                t.check(tail_equiv_n(u, w, 2) is not None, "transitivity")
        # class split: v ~ u gives v ~2 u or v ~2 0u
        t.check(tail_equiv_n(v, u, 2) is not None or tail_equiv_n(v, prepend((0,), u), 2) is not None,
                lambda: f"class split at {format_seq(u)}, {format_seq(v)}")
    return t.result()


PARSER_CORPUS = (
    "fin(1)", "fin(7)", "omega", "omegastar", "zeta", "eta", "dyadic",
    "sum(omega, omega)", "lex(zeta, fin(2))", "lex(fin(2), eta, omega)", "rev(rev(zeta))",
    "shuffle(2; fin(1), fin(2))", "shuffle(3; eta, empty, fin(1))", "sqlimit(fin(2), 3)",
    "sum(rev(omega), lex(eta, sqlimit(zeta, 2)))",
)


def _random_descriptor(rng, depth=0):
    atoms = [Omega(), OmegaStar(), Zeta(), Eta(), Dyadic(), Finite(rng.randint(1, 5))]
    if depth >= 2 or rng.random() < 0.4:
        return rng.choice(atoms)
    kind = rng.randrange(5)
    sub = lambda: _random_descriptor(rng, depth + 1)  # noqa: E731
    if kind == 0:
        return Sum(sub(), sub())
    if kind == 1:
        return Lex(*[sub() for _ in range(rng.randint(2, 3))])
    if kind == 2:
        return Rev(sub())
    if kind == 3:
        k = rng.randint(1, 3)
        parts = [sub() for _ in range(k)]
        if k > 1 and rng.random() < 0.3:
            parts[0] = None
        return Shuffle(k, *parts)
    return SqLimit(sub(), rng.randint(2, 3))


def suite_parser(seed=1, scale=1.0) -> SuiteResult:
    t = _Tally("parser round trip")
    rng = random.Random(seed * 1000 + 103)
    for text in PARSER_CORPUS:
        d = parse_order_expr(text)
        t.check(parse_order_expr(format_order(d)) == d, lambda: f"round trip {text!r}")
        t.check(format_order(parse_order_expr(text.replace(" ", ""))) == format_order(d), lambda: f"normalize {text!r}")
    for _ in range(_n(100, scale)):
        d = _random_descriptor(rng)
        t.check(parse_order_expr(format_order(d)) == d, lambda: f"round trip {format_order(d)!r}")
    return t.result()


SUITES = {
    "order-core": suite_order_core,
    "epseq-laws": suite_epseq_laws,
    "parser": suite_parser,
}


def run_selftest(seed: int = 1, budget: str = "small", corrupt_stdmap: bool = False,
                 only: Optional[list] = None) -> dict:
    scale = BUDGETS[budget]
    results = []
    for name, fn in SUITES.items():
        if only is None or name in only:
            results.append(fn(seed, scale))
    for i, fn in CRITERIA.items():
        if only is None or str(i) in only:
            r = fn(seed, scale, corrupt=True) if (i == 3 and corrupt_stdmap) else fn(seed, scale)
            results.append(r)
    return {
        "schema": 1,
        "seed": seed,
        "budget": budget,
        "passed": all(r.passed for r in results),
        "suites": [r.as_dict() for r in results],
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
