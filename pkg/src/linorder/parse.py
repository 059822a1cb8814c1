"""Text syntax for order expressions, points and sequence literals.

Order expressions::

    fin(N) | omega | omegastar | zeta | eta | dyadic | sum(e, e) | lex(e, e, ...)
    | rev(e) | shuffle(k; e|empty, ...) | sqlimit(e, n)

Points are read according to the order they belong to: integers, ``p/q``,
words over L/R (``e`` is the empty word), tuples ``(x, y)`` for products,
``L:x`` / ``R:x`` for sums, ``(word ; fiber)`` for shuffles and
``stage<i>:(...)`` for square limits.  A sequence literal is
``prefix|period`` with comma separated points, e.g. ``0,1|1,0`` or ``|0``.
"""
from __future__ import annotations

from fractions import Fraction

from .epseq import EpSeq, canonicalize
from .errors import ExprSyntaxError, InvalidDescriptor, InvalidElement
from .orders import (
    Dyadic, Eta, Finite, Lex, Omega, OmegaStar, RepPoint, Rev, Shuffle, SqLimit, Stage, Sum,
    Tag, Zeta, construct,
)

__all__ = [
    "parse_order_expr", "format_order", "parse_point", "format_element", "parse_seq",
    "format_seq", "parse_word",
]

_ATOMS = {
    "omega": Omega, "omegastar": OmegaStar, "zeta": Zeta, "eta": Eta, "dyadic": Dyadic,
}
_KEYWORDS = ("fin", "sum", "lex", "rev", "shuffle", "sqlimit", *_ATOMS)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, *expected):
        raise ExprSyntaxError(self.text, self.pos, expected)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, tok: str) -> bool:
        self.ws()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def expect(self, tok: str):
        if not self.accept(tok):
            self.error(repr(tok))

    def ident(self) -> str:
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def integer(self, what="integer") -> int:
        self.ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error(what)
        return int(self.text[start:self.pos])

    def end(self):
        self.ws()
        if self.pos != len(self.text):
            self.error("end of input")


# ---------------------------------------------------------------------------
# order expressions


def parse_order_expr(text: str):
    r = _Reader(text)
    d = _expr(r)
    r.end()
    return d


def _expr(r: _Reader):
    start = r.pos
    name = r.ident()
    if name in _ATOMS:
        return _ATOMS[name]()
    try:
        if name == "fin":
            r.expect("(")
            n = r.integer("positive integer")
            r.expect(")")
            return Finite(n)
        if name == "rev":
            r.expect("(")
            e = _expr(r)
            r.expect(")")
            return Rev(e)
        if name == "sum":
            r.expect("(")
            a = _expr(r)
            r.expect(",")
            b = _expr(r)
            r.expect(")")
            return Sum(a, b)
        if name == "lex":
            r.expect("(")
            factors = [_expr(r)]
            while r.accept(","):
                factors.append(_expr(r))
            if len(factors) < 2:
                r.error("','")
            r.expect(")")
            return Lex(*factors)
        if name == "shuffle":
            r.expect("(")
            k = r.integer("positive integer")
            r.expect(";")
            parts = [_part(r)]
            while r.accept(","):
                parts.append(_part(r))
            r.expect(")")
            return Shuffle(k, *parts)
        if name == "sqlimit":
            r.expect("(")
            e = _expr(r)
            r.expect(",")
            n = r.integer("integer >= 2")
            r.expect(")")
            return SqLimit(e, n)
    except InvalidDescriptor as exc:
        raise ExprSyntaxError(text=r.text, position=start, expected=(str(exc),)) from None
    r.pos = start
    r.error(*_KEYWORDS)


def _part(r: _Reader):
    save = r.pos
    if r.ident() == "empty":
        return None
    r.pos = save
    return _expr(r)


def format_order(d) -> str:
    if isinstance(d, Finite):
        return f"fin({d.n})"
    for name, cls in _ATOMS.items():
        if type(d) is cls:
            return name
    if isinstance(d, Sum):
        return f"sum({format_order(d.left)}, {format_order(d.right)})"
    if isinstance(d, Lex):
        return "lex(" + ", ".join(format_order(f) for f in d.factors) + ")"
    if isinstance(d, Rev):
        return f"rev({format_order(d.inner)})"
    if isinstance(d, Shuffle):
        parts = ", ".join("empty" if p is None else format_order(p) for p in d.parts)
        return f"shuffle({d.k}; {parts})"
    if isinstance(d, SqLimit):
        return f"sqlimit({format_order(d.base)}, {d.n})"
    raise InvalidDescriptor(f"{d!r} is not an order descriptor")


# ---------------------------------------------------------------------------
# points


def parse_point(order, text: str):
    """Read a point of ``order`` and validate it."""
    O = construct(order)
    r = _Reader(text)
    x = _point(r, O.descriptor)
    r.end()
    return O.check(x)


def parse_word(r: _Reader) -> str:
    r.ws()
    start = r.pos
    while r.pos < len(r.text) and r.text[r.pos] in "LRe":
        r.pos += 1
    w = r.text[start:r.pos]
    if w == "e":
        return ""
    if not w or "e" in w:
        r.pos = start
        r.error("word over L/R", "'e'")
    return w


def _point(r: _Reader, d):
    if isinstance(d, (Finite, Omega, OmegaStar, Zeta)):
        return r.integer()
    if isinstance(d, Eta):
        start = r.pos
        p = r.integer("rational")
        if r.accept("/"):
            q = r.integer("denominator")
            if q <= 0:
                r.pos = start
                r.error("positive denominator")
            if Fraction(p, q).denominator != q:
                raise InvalidElement(f"{p}/{q} is not in lowest terms")
            return Fraction(p, q)
        return Fraction(p)
    if isinstance(d, Dyadic):
        return parse_word(r)
    if isinstance(d, Rev):
        return _point(r, d.inner)
    if isinstance(d, Sum):
        r.ws()
        for side, sub in (("L", d.left), ("R", d.right)):
            if r.accept(side + ":"):
                return Tag(side, _point(r, sub))
        r.error("'L:'", "'R:'")
    if isinstance(d, Lex):
        r.expect("(")
        x = _lex_items(r, d.factors)
        r.expect(")")
        return x
    if isinstance(d, Shuffle):
        r.expect("(")
        w = parse_word(r)
        r.expect(";")
        part = d.parts[len(w) % d.k]
        if part is None:
            raise InvalidElement(f"color {len(w) % d.k} of {w or 'e'} is an empty part")
        fiber = _point(r, part)
        r.expect(")")
        return RepPoint(w, fiber)
    if isinstance(d, SqLimit):
        r.expect("stage")
        i = r.integer("stage index")
        if i < 0:
            r.error("stage index >= 0")
        r.expect(":")
        return Stage(i, _stage_tuple(r, d, i))
    raise InvalidDescriptor(f"{d!r} is not an order descriptor")


def _lex_items(r: _Reader, factors):
    first = _point(r, factors[0])
    r.expect(",")
    if len(factors) == 2:
        return (first, _point(r, factors[1]))
    # flat (x, y, z) or right-nested (x, (y, z))
    if r.peek() == "(" and not _starts_point_with_paren(factors[1]):
        save = r.pos
        try:
            r.expect("(")
            rest = _lex_items(r, factors[1:])
            r.expect(")")
            return (first, rest)
        except ExprSyntaxError:
            r.pos = save
    return (first, _lex_items(r, factors[1:]))


def _starts_point_with_paren(d) -> bool:
    while isinstance(d, Rev):
        d = d.inner
    return isinstance(d, (Lex, Shuffle))


def _stage_tuple(r: _Reader, d: SqLimit, i: int):
    if i == 0:
        return _point(r, d.base)
    r.expect("(")
    items = [_stage_tuple(r, d, i - 1)]
    for _ in range(d.n - 1):
        r.expect(",")
        items.append(_stage_tuple(r, d, i - 1))
    r.expect(")")
    return tuple(items)


def format_element(order, x) -> str:
    d = construct(order).descriptor
    return _fmt(d, x)


def _fmt(d, x) -> str:
    if isinstance(d, Rev):
        return _fmt(d.inner, x)
    if isinstance(d, (Finite, Omega, OmegaStar, Zeta)):
        return str(x)
    if isinstance(d, Eta):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(d, Dyadic):
        return x or "e"
    if isinstance(d, Sum):
        return f"{x.side}:{_fmt(d.left if x.side == 'L' else d.right, x.value)}"
    if isinstance(d, Lex):
        items, factors = [], d.factors
        while len(factors) > 2:
            items.append(_fmt(factors[0], x[0]))
            x, factors = x[1], factors[1:]
        items += [_fmt(factors[0], x[0]), _fmt(factors[1], x[1])]
        return "(" + ",".join(items) + ")"
    if isinstance(d, Shuffle):
        return f"({x.base or 'e'};{_fmt(d.parts[len(x.base) % d.k], x.fiber)})"
    if isinstance(d, SqLimit):
        return f"stage{x.i}:{_fmt_stage(d, x.t, x.i)}"
    return repr(x)


def _fmt_stage(d: SqLimit, t, i) -> str:
    if i == 0:
        return _fmt(d.base, t)
    return "(" + ",".join(_fmt_stage(d, c, i - 1) for c in t) + ")"


# ---------------------------------------------------------------------------
# sequences


def parse_seq(order, text: str) -> EpSeq:
    O = construct(order)
    r = _Reader(text)
    prefix = _point_list(r, O.descriptor, "|")
    r.expect("|")
    period = _point_list(r, O.descriptor, "")
    if not period:
        r.error("at least one period entry")
    r.end()
    return canonicalize(O, prefix, period)


def _point_list(r: _Reader, d, stop: str) -> list:
    out = []
    nxt = r.peek()
    if nxt == "" or (stop and nxt == stop):
        return out
    out.append(_point(r, d))
    while r.accept(","):
        out.append(_point(r, d))
    return out


def format_seq(u: EpSeq) -> str:
    d = u.order.descriptor
    return ",".join(_fmt(d, x) for x in u.prefix) + "|" + ",".join(_fmt(d, x) for x in u.period)
