import random
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from linorder import oracles
from linorder.errors import InvalidDescriptor, InvalidElement, NoWitness
from linorder.orders import (
    Cmp, Dyadic, Eta, Finite, Lex, Omega, RepPoint, Rev, Shuffle, SqLimit, Stage, Sum,
    Tag, Zeta, calkin_wilf, calkin_wilf_index, color_of, compare, construct, endpoints_and_meta, pair, unpair, witness,
)
from linorder.selftest import CATALOG


def test_construct_examples():
    m = construct(Finite(3)).meta
    assert m.has_min and m.has_max and not m.is_dense
    assert not construct(Shuffle(2, Finite(1), Finite(2))).is_dense
    m = construct(Lex(Zeta(), Finite(2))).meta
    assert not (m.has_min or m.has_max or m.is_dense)


def test_lex_zeta_two_not_dense_by_probing():
    # (z, 1) and (z + 1, 0) are adjacent
    O = construct(Lex(Zeta(), Finite(2)))
    with pytest.raises(NoWitness):
        O.between((3, 1), (4, 0))


@pytest.mark.parametrize("bad", [
    lambda: Finite(0), lambda: Lex(Zeta()), lambda: Shuffle(2, Eta()),
    lambda: Shuffle(2, None, None), lambda: SqLimit(Eta(), 1), lambda: construct("zeta"),
])
def test_invalid_descriptors(bad):
    with pytest.raises(InvalidDescriptor):
        bad()


def test_compare_examples():
    assert compare(Finite(3), 0, 2) == Cmp.LT
    assert compare(Lex(Zeta(), Finite(2)), (-1, 1), (0, 0)) == Cmp.LT
    # oracle: dyadic positions
    assert oracles.dyadic_key("L") < oracles.dyadic_key("LR")
    assert compare(Dyadic(), "L", "LR") == Cmp.LT


def test_compare_validates():
    with pytest.raises(InvalidElement):
        compare(Finite(2), 0, 5)
    with pytest.raises(InvalidElement):
        compare(Dyadic(), "LX", "L")
    with pytest.raises(InvalidElement):
        construct(Shuffle(2, None, Eta())).check(RepPoint("", Fraction(0)))


def test_enumerate_examples():
    assert construct(Omega()).nth(7) == 7
    E = construct(Eta())
    assert [E.nth(k) for k in range(5)] == [0, 1, -1, Fraction(1, 2), Fraction(-1, 2)]
    # diagonal pairing: 5 -> (0, 2), and Eta.nth(2) = -1
    i, j = unpair(5)
    assert (i, j) == (0, 2) and pair(i, j) == 5
    assert construct(Lex(Finite(2), Eta())).nth(5) == (0, -1)


def test_calkin_wilf_prefix():
    assert [calkin_wilf(i) for i in range(7)] == [
        1, Fraction(1, 2), 2, Fraction(1, 3), Fraction(3, 2), Fraction(2, 3), 3,
    ]


@given(st.integers(0, 10**6))
def test_pairing_roundtrip(k):
    assert pair(*unpair(k)) == k


def test_eta_enumeration_is_injective():
    E = construct(Eta())
    seen = {E.nth(k) for k in range(2000)}
    assert len(seen) == 2000


def test_endpoints_examples():
    m, lo, hi = endpoints_and_meta(Omega())
    assert m.has_min and lo == 0 and not m.has_max and hi is None
    m, lo, hi = endpoints_and_meta(Lex(Finite(2), Omega()))
    assert m.has_min and lo == (0, 0) and not m.has_max
    m, lo, hi = endpoints_and_meta(Rev(Omega()))
    assert not m.has_min and m.has_max and hi == 0
    assert m.coinitiality_kind == "omega" and m.cofinality_kind == "1"


def test_witness_examples():
    assert witness(Eta(), "between", 0, 1) == Fraction(1, 2)
    assert witness(Zeta(), "above", 5) == 6
    assert witness(Lex(Finite(2), Eta()), "between", (0, 0), (1, 0)) == (0, 1)
    with pytest.raises(NoWitness):
        witness(Zeta(), "between", 1, 2)
    with pytest.raises(NoWitness):
        witness(Omega(), "below", 0)
    with pytest.raises(NoWitness):
        witness(Eta(), "between", 1, 0)


def test_color_examples():
    assert color_of(Dyadic(), "LR", 3) == 2
    assert color_of(Dyadic(), "", 2) == 0
    # both residues occur among short words strictly between L and R
    lo, hi = oracles.dyadic_key("L"), oracles.dyadic_key("R")
    D = construct(Dyadic())
    words = [D.nth(k) for k in range(2 ** 7 - 1)]
    inside = [w for w in words if lo < oracles.dyadic_key(w) < hi]
    assert {len(w) % 2 for w in inside} == {0, 1}
    with pytest.raises(TypeError):
        color_of(Zeta(), 3)


@pytest.mark.parametrize("d", CATALOG, ids=repr)
@given(data=st.data())
def test_compare_is_a_total_order(d, data):
    O = construct(d)
    x, y, z = (O.nth(data.draw(st.integers(0, 400))) for _ in range(3))
    assert O.compare(x, y) == -O.compare(y, x)
    assert (O.compare(x, y) == 0) == (x == y)
    if O.compare(x, y) <= 0 and O.compare(y, z) <= 0:
        assert O.compare(x, z) <= 0


@pytest.mark.parametrize("d", CATALOG, ids=repr)
@given(data=st.data())
def test_witness_postconditions(d, data):
    O = construct(d)
    x, y = (O.nth(data.draw(st.integers(0, 400))) for _ in range(2))
    if O.compare(x, y) > 0:
        x, y = y, x
    if O.compare(x, y) < 0:
        try:
            z = O.between(x, y)
            assert O.compare(x, z) < 0 < O.compare(y, z)
        except NoWitness:
            assert not O.is_dense
    if not O.has_max:
        assert O.compare(x, O.above(x)) < 0
    if not O.has_min:
        assert O.compare(O.below(x), x) < 0


def _witness_sample(O, seed=0, calls=50, pool=200):
    rng = random.Random(seed)
    made = []
    for _ in range(calls):
        x, y = O.nth(rng.randrange(pool)), O.nth(rng.randrange(pool))
        if O.compare(x, y) > 0:
            x, y = y, x
        try:
            made.append(O.between(x, y))
        except NoWitness:
            pass
    return made


@pytest.mark.parametrize("d", CATALOG, ids=repr)
def test_enumeration_reaches_witnesses(d):
    O = construct(d)
    for z in _witness_sample(O):
        assert O.nth(O.index_of(z)) == z


# midpoints of early rationals sit deep in the Calkin-Wilf tree, and stage
# witnesses live one stage up, so these need far more than 10^4 indices
_DEEP = {Eta(), Lex(Finite(2), Eta()), Rev(Rev(Eta())), SqLimit(Finite(2), 2), SqLimit(Zeta(), 2)}


@pytest.mark.parametrize("d", [
    pytest.param(d, marks=pytest.mark.xfail(strict=True, reason="fixed schemes put witnesses past 10^4"))
    if d in _DEEP else d
    for d in CATALOG
], ids=repr)
def test_enumeration_reaches_witnesses_within_desk_bound(d):
    O = construct(d)
    seen = {O.nth(k) for k in range(10_000)}
    assert all(z in seen for z in _witness_sample(O))


def test_calkin_wilf_index_inverts():
    for i in range(3000):
        assert calkin_wilf_index(calkin_wilf(i)) == i
    # 19/20 is the left child of 19/1, which is 18 right steps below the root
    assert calkin_wilf_index(Fraction(19, 20)) == 2 ** 20 - 3


def test_lex_density_rule_matches_probing():
    # dense second factor with both endpoints inherits the first factor's gaps
    for d, dense in [
        (Lex(Eta(), Eta()), True),
        (Lex(Zeta(), Eta()), True),
        (Lex(Finite(1), Dyadic()), True),
        (Lex(Zeta(), Finite(1)), False),
    ]:
        assert construct(d).is_dense == dense


def test_sum_and_shuffle_witnesses_cross_sides():
    S = construct(Sum(Omega(), Zeta()))
    assert S.compare(Tag("L", 10**6), Tag("R", -(10**6))) < 0
    assert S.between(Tag("L", 3), Tag("R", 0)) == Tag("L", 4)
    Sh = construct(Shuffle(3, Eta(), None, Finite(1)))
    z = Sh.between(RepPoint("", Fraction(0)), RepPoint("R", 0))
    assert Sh.compare(RepPoint("", Fraction(0)), z) < 0 < Sh.compare(RepPoint("R", 0), z)
    assert len(z.base) % 3 != 1


@given(st.integers(1, 3), st.integers(0, 5), st.data())
def test_dyadic_colored_witness(k, c, data):
    D = construct(Dyadic())
    u, v = (D.nth(data.draw(st.integers(0, 300))) for _ in range(2))
    if u == v:
        return
    if D.compare(u, v) > 0:
        u, v = v, u
    w = D.between(u, v, (c, k))
    assert oracles.dyadic_key(u) < oracles.dyadic_key(w) < oracles.dyadic_key(v)
    assert len(w) % k == c % k


def test_dyadic_colored_witness_falls_back_when_padding_overshoots():
    # shortest word between L and RL is the empty word; padding with R overshoots RL
    w = construct(Dyadic()).between("L", "RL", (1, 3))
    assert w == "LRLL"


def test_rev_involution():
    O, R = construct(Zeta()), construct(Rev(Rev(Zeta())))
    for x in range(-5, 5):
        for y in range(-5, 5):
            assert O.compare(x, y) == R.compare(x, y)
    assert construct(Rev(Zeta())).compare(1, 2) == Cmp.GT


def test_sqlimit_canonical_forms():
    X = construct(SqLimit(Finite(2), 2))
    with pytest.raises(InvalidElement):
        X.check(Stage(1, (0, 0)))
    assert X.check(Stage(1, (0, 1))) == Stage(1, (0, 1))
    for k in range(300):
        x = X.nth(k)
        lifted = X.make(x.i + 1, X.lift(x, x.i + 1))
        assert lifted == x
    m = X.meta
    assert m.has_min and m.has_max and m.is_dense
    assert X.compare(Stage(0, 0), Stage(1, (0, 1))) < 0
    assert X.compare(Stage(1, (0, 1)), Stage(0, 1)) < 0
