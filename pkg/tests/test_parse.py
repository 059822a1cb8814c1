from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from linorder.epseq import canonicalize
from linorder.errors import ExprSyntaxError, InvalidElement
from linorder.orders import (
    Dyadic, Eta, Finite, Lex, Omega, OmegaStar, RepPoint, Rev, Shuffle, SqLimit, Stage, Sum, Tag, Zeta,
    construct,
)
from linorder.parse import (
    format_element, format_order, format_seq, parse_order_expr, parse_point, parse_seq,
)
from linorder.selftest import CATALOG, PARSER_CORPUS


def test_order_expr_examples():
    assert parse_order_expr("lex(zeta, fin(2))") == Lex(Zeta(), Finite(2))
    assert parse_order_expr("shuffle(2; fin(1), fin(2))") == Shuffle(2, Finite(1), Finite(2))
    assert parse_order_expr("  sum( omega ,rev(eta) ) ") == Sum(Omega(), Rev(Eta()))
    assert parse_order_expr("shuffle(3; eta, empty, fin(1))") == Shuffle(3, Eta(), None, Finite(1))
    assert parse_order_expr("sqlimit(fin(2), 3)") == SqLimit(Finite(2), 3)


@pytest.mark.parametrize("text,pos", [
    ("lex(fin(2))", 10), ("fin(0)", 0), ("zeta(", 4), ("sqlimit(eta, 1)", 0), ("omg", 0),
    ("shuffle(2; eta)", 0), ("sum(zeta)", 8), ("eta eta", 4),
])
def test_order_expr_errors_report_position(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse_order_expr(text)
    assert info.value.position == pos
    assert info.value.expected


def test_error_message_points_at_the_failure():
    with pytest.raises(ExprSyntaxError) as info:
        parse_order_expr("lex(fin(2))")
    assert "^)" in str(info.value)


@pytest.mark.parametrize("text", PARSER_CORPUS)
def test_corpus_round_trip(text):
    d = parse_order_expr(text)
    assert parse_order_expr(format_order(d)) == d
    assert format_order(parse_order_expr(text.replace(" ", ""))) == format_order(d)


atoms = st.sampled_from([Omega(), OmegaStar(), Zeta(), Eta(), Dyadic()]) | st.builds(Finite, st.integers(1, 9))


def _extend(sub):
    return (
        st.builds(Sum, sub, sub)
        | st.lists(sub, min_size=2, max_size=3).map(lambda fs: Lex(*fs))
        | st.builds(Rev, sub)
        | st.builds(SqLimit, sub, st.integers(2, 3))
        | st.lists(sub | st.none(), min_size=1, max_size=3)
        .filter(lambda ps: any(p is not None for p in ps))
        .map(lambda ps: Shuffle(len(ps), *ps))
    )


descriptors = st.recursive(atoms, _extend, max_leaves=6)


@given(descriptors)
def test_descriptor_round_trip(d):
    assert parse_order_expr(format_order(d)) == d


def test_point_examples():
    assert parse_point(Eta(), "1/2") == Fraction(1, 2)
    assert parse_point(Lex(Zeta(), Finite(2)), "(-1,1)") == (-1, 1)
    with pytest.raises(InvalidElement):
        parse_point(Finite(2), "5")
    assert parse_point(Dyadic(), "e") == ""
    assert parse_point(Sum(Omega(), Zeta()), "R:-3") == Tag("R", -3)
    assert parse_point(Shuffle(2, Finite(1), Finite(2)), "(LRL; 1)") == RepPoint("LRL", 1)
    assert parse_point(SqLimit(Finite(2), 2), "stage1:(0,1)") == Stage(1, (0, 1))
    # three factors accept flat and nested forms
    L3 = Lex(Finite(2), Omega(), Finite(3))
    assert parse_point(L3, "(1, 4, 2)") == parse_point(L3, "(1,(4,2))") == (1, (4, 2))


def test_point_errors():
    with pytest.raises(InvalidElement):
        parse_point(Eta(), "2/4")
    with pytest.raises(ExprSyntaxError):
        parse_point(Eta(), "1/0")
    with pytest.raises(InvalidElement):
        parse_point(SqLimit(Finite(2), 2), "stage1:(1,1)")
    with pytest.raises(InvalidElement):
        parse_point(Shuffle(2, None, Finite(1)), "(e; 0)")
    with pytest.raises(ExprSyntaxError):
        parse_point(Dyadic(), "LXR")


@pytest.mark.parametrize("d", CATALOG, ids=repr)
def test_elements_round_trip(d):
    O = construct(d)
    for k in range(200):
        x = O.nth(k)
        assert parse_point(d, format_element(d, x)) == x


def test_seq_literals():
    assert parse_seq(Finite(2), "0,1|1,0") == canonicalize(Finite(2), (0, 1), (1, 0))
    assert parse_seq(Finite(2), "|0") == canonicalize(Finite(2), (), (0,))
    assert format_seq(parse_seq(Finite(2), "0|1,0")) == "|0,1"
    assert format_seq(parse_seq(Zeta(), "0,-5|0")) == "0,-5|0"
    with pytest.raises(ExprSyntaxError):
        parse_seq(Finite(2), "0,1|")
    with pytest.raises(ExprSyntaxError):
        parse_seq(Finite(2), "0,1")


@given(st.lists(st.integers(-9, 9), max_size=5), st.lists(st.integers(-9, 9), min_size=1, max_size=4))
def test_seq_round_trip(prefix, period):
    u = canonicalize(Zeta(), prefix, period)
    assert parse_seq(Zeta(), format_seq(u)) == u
