import hypothesis.strategies as st
import pytest
from hypothesis import given

from conftest import ep_seqs, raw_seqs
from linorder import oracles
from linorder.epseq import (
    EquivWitness, canonicalize, compare_ep, entry, eventual_period, prepend, shift, tail_equiv_n,
)
from linorder.errors import BaseMismatch, InvalidElement
from linorder.orders import Cmp, Finite, Zeta

F2, F3 = Finite(2), Finite(3)


def seq(prefix, period, base=F2):
    return canonicalize(base, tuple(prefix), tuple(period))


def test_canonicalize_examples():
    # oracle: the raw 0|10 and 01-repeated agree termwise
    raw = type("R", (), {"prefix": (0,), "period": (1, 0)})
    assert oracles.terms(raw, 16) == (0, 1) * 8
    u = seq([0], [1, 0])
    assert (u.prefix, u.period) == ((), (0, 1))
    assert not oracles.is_primitive((0, 1, 0, 1))
    u = seq([], [0, 1, 0, 1])
    assert (u.prefix, u.period) == ((), (0, 1))
    u = seq([], [0])
    assert (u.prefix, u.period) == ((), (0,))


def test_canonicalize_rejects_bad_entries():
    with pytest.raises(InvalidElement):
        seq([2], [0])
    with pytest.raises(InvalidElement):
        seq([0], [])


def test_entry_examples():
    u = seq([0], [1, 0])
    assert entry(u, 0) == 0 and entry(u, 3) == 1
    assert entry(seq([], [0, 1, 1]), 5) == 1


def test_compare_examples():
    assert compare_ep(seq([], [0]), seq([0], [1])) == Cmp.LT
    assert oracles.termwise_compare(lambda a, b: (a > b) - (a < b), (0, 1, 0, 1), (0, 1, 1, 1)) < 0
    assert compare_ep(seq([], [0, 1]), seq([0], [1])) == Cmp.LT
    assert compare_ep(seq([0], [1, 0]), seq([], [0, 1])) == Cmp.EQ


def test_shift_examples():
    assert shift(seq([0], [1, 0]), 1) == seq([], [1, 0])
    assert shift(seq([], [0, 1]), 2) == seq([], [0, 1])
    assert shift(seq([0, 0], [1]), 3) == seq([], [1])


def test_prepend_examples():
    assert prepend((1,), seq([], [0])) == seq([1], [0])
    u = prepend((0,), seq([], [0, 1]))
    assert (u.prefix, u.period) == ((0,), (0, 1))
    raw = type("R", (), {"prefix": (0,), "period": (0, 1)})
    assert oracles.terms(u, 12) == oracles.terms(raw, 12)
    assert prepend((0, 1), seq([], [0, 1])) == seq([], [0, 1])


def test_eventual_period_examples():
    assert eventual_period(seq([], [0, 1, 0, 1])) == 2
    assert eventual_period(seq([1], [0])) == 1
    assert eventual_period(seq([], [0, 1, 1])) == 3


def test_tail_equiv_examples():
    u, v = seq([], [0, 1]), seq([], [1, 0])
    assert tail_equiv_n(u, v, 1) == EquivWitness(0, 1)
    assert oracles.exhaustive_tail_equiv(u, v, 2) is None
    assert tail_equiv_n(u, v, 2) is None
    u = seq([], [0, 1, 1])
    v = prepend((0,), u)
    assert oracles.terms(v, 30, 4) == oracles.terms(u, 30)
    assert tail_equiv_n(u, v, 2) == EquivWitness(0, 4)


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        tail_equiv_n(seq([], [0]), seq([], [0], F3))
    with pytest.raises(BaseMismatch):
        compare_ep(seq([], [0]), seq([], [0], Zeta()))


@given(raw_seqs(range(3), 8, 6))
def test_canonical_form_preserves_terms(r):
    u = canonicalize(F3, r.prefix, r.period)
    assert oracles.terms(u, 64) == oracles.terms(r, 64)
    assert oracles.is_primitive(u.period)
    assert not u.prefix or u.prefix[-1] != u.period[-1]


@given(raw_seqs(range(3)), raw_seqs(range(3)))
def test_equal_iff_same_terms(r, s):
    u, v = canonicalize(F3, r.prefix, r.period), canonicalize(F3, s.prefix, s.period)
    assert (u == v) == (oracles.terms(r, 64) == oracles.terms(s, 64))


@given(ep_seqs(F3, range(3)), ep_seqs(F3, range(3)))
def test_compare_matches_termwise_oracle(u, v):
    cmp = lambda a, b: (a > b) - (a < b)  # noqa: E731
    assert int(compare_ep(u, v)) == oracles.termwise_compare(cmp, oracles.terms(u, 64), oracles.terms(v, 64))
    assert compare_ep(v, u) == -compare_ep(u, v)


@given(ep_seqs(F3, range(3)), ep_seqs(F3, range(3)), ep_seqs(F3, range(3)))
def test_compare_transitive(u, v, w):
    u, v, w = sorted([u, v, w], key=lambda s: oracles.terms(s, 64))
    assert compare_ep(u, v) <= 0 and compare_ep(v, w) <= 0 and compare_ep(u, w) <= 0


@given(ep_seqs(F3, range(3)), st.integers(0, 2), st.integers(0, 8))
def test_shift_prepend_laws(u, a, k):
    assert shift(prepend((a,), u), 1) == u
    assert prepend(u.take(k), shift(u, k)) == u


@given(ep_seqs(F2, range(2)), st.data())
def test_tail_equiv_witnesses_match_exhaustive_search(u, data):
    n = data.draw(st.integers(1, 4))
    w = tuple(data.draw(st.lists(st.integers(0, 1), max_size=4)))
    if data.draw(st.booleans()):
        v = prepend(w, shift(u, data.draw(st.integers(0, 6))))
    else:
        v = data.draw(ep_seqs(F2, range(2)))
    wit = tail_equiv_n(u, v, n)
    ref = oracles.exhaustive_tail_equiv(u, v, n)
    assert (wit is None) == (ref is None)
    if wit is not None:
        k, l = wit
        assert (k - l) % n == 0
        assert oracles.terms(u, 64, k) == oracles.terms(v, 64, l)


@given(ep_seqs(F2, range(2)), st.integers(1, 4))
def test_refinement_and_shift_invariance(u, n):
    assert tail_equiv_n(u, u, n) == EquivWitness(0, 0)
    assert tail_equiv_n(u, shift(u, n), n) is not None
    v = prepend((1,) * n, u)
    assert tail_equiv_n(u, v, n) is not None
    assert tail_equiv_n(u, v, 1) is not None


@given(ep_seqs(F2, range(2)), ep_seqs(F2, range(2)), ep_seqs(F2, range(2)), st.integers(1, 3))
def test_tail_equiv_is_an_equivalence(u, v, w, n):
    # build related members of one class so transitivity is exercised
    v = prepend(v.take(2), shift(u, 3))
    w = prepend(w.take(1), shift(v, 1))
    uv, vw, uw = tail_equiv_n(u, v, n), tail_equiv_n(v, w, n), tail_equiv_n(u, w, n)
    assert (uv is None) == (tail_equiv_n(v, u, n) is None)
    if uv is not None and vw is not None:
        assert uw is not None


@given(ep_seqs(F2, range(2)))
def test_class_splits_into_two_parity_classes(u):
    au = prepend((0,), u)
    for k in range(4):
        for w in [(), (0,), (1,), (0, 1)]:
            v = prepend(w, shift(u, k))
            assert tail_equiv_n(v, u, 1) is not None
            assert tail_equiv_n(v, u, 2) is not None or tail_equiv_n(v, au, 2) is not None


@pytest.mark.parametrize("base", [F2, F3])
@given(data=st.data())
def test_odd_period_law(base, data):
    u = data.draw(ep_seqs(base, range(base.n)))
    a = data.draw(st.integers(0, base.n - 1))
    au = prepend((a,), u)
    law = tail_equiv_n(au, u, 2) is not None
    assert law == (eventual_period(u) % 2 == 1)
    assert law == (oracles.exhaustive_tail_equiv(au, u, 2) is not None)
