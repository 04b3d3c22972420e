from fractions import Fraction as F

import pytest
from hypothesis import given, settings

import oracles
from measure_engine.errors import PreconditionError
from measure_engine.interval import (
    EMPTY,
    EMPTY_UNION,
    UNIT,
    UNIT_UNION,
    Interval,
    IntervalUnion,
    iu_complement,
    iu_intersect,
    iu_subtract,
    iu_symdiff,
    iu_union,
    iv_intersect,
    iv_subtract_expansion,
    length,
    parse_interval_union,
    rat,
    semiring_axioms,
    union_normalize,
)
from oracles import interval_unions, intervals


def iv(a, b):
    return Interval(F(a), F(b))


def test_rat_refuses_floats_and_decimals():
    assert rat("3/6") == F(1, 2)
    assert rat(2) == 2
    for bad in (0.5, "0.5", "1e3", "", "x"):
        with pytest.raises(PreconditionError):
            rat(bad)


def test_empty_interval_canonicalises():
    assert Interval(F(1, 3), F(1, 3)) == EMPTY == Interval(0, 0)
    with pytest.raises(PreconditionError):
        Interval(F(1, 2), F(1, 4))
    with pytest.raises(PreconditionError):
        Interval(0, 2)


def test_iv_intersect_examples():
    assert iv_intersect(iv(0, F(1, 2)), iv(F(1, 4), F(3, 4))) == iv(F(1, 4), F(1, 2))
    assert iv_intersect(iv(0, F(1, 2)), EMPTY) == EMPTY
    a = iv(F(1, 3), F(2, 3))
    assert iv_intersect(a, a) == a
    assert iv_intersect(iv(0, F(1, 2)), iv(F(1, 2), 1)) == EMPTY


def test_iv_subtract_expansion_examples():
    e = iv_subtract_expansion(UNIT, iv(F(1, 3), F(2, 3)))
    assert e.pieces == (iv(F(1, 3), F(2, 3)), iv(0, F(1, 3)), iv(F(2, 3), 1))
    assert iv_subtract_expansion(UNIT, UNIT).pieces == (UNIT,)
    assert iv_subtract_expansion(UNIT, iv(0, F(1, 2))).pieces == (iv(0, F(1, 2)), iv(F(1, 2), 1))
    with pytest.raises(PreconditionError):
        iv_subtract_expansion(iv(0, F(1, 2)), iv(F(1, 4), F(3, 4)))


def test_union_normalize_examples():
    assert union_normalize([iv(0, F(1, 4)), iv(F(1, 4), F(1, 2))]).intervals == (iv(0, F(1, 2)),)
    assert union_normalize([iv(F(1, 2), F(3, 4)), iv(0, F(1, 4))]).intervals == (iv(0, F(1, 4)), iv(F(1, 2), F(3, 4)))
    assert union_normalize([iv(0, F(1, 2)), iv(F(1, 4), F(3, 4))]).intervals == (iv(0, F(3, 4)),)


def test_length_examples():
    assert length(UNIT_UNION) == 1
    assert length(IntervalUnion.of((0, F(1, 3)), (F(1, 2), 1))) == F(5, 6)
    assert length(EMPTY_UNION) == 0


def test_parse_and_str_round_trip():
    u = parse_interval_union("[0,1/4)+[1/2,1)")
    assert str(u) == "[0,1/4)+[1/2,1)"
    assert parse_interval_union(str(u)) == u
    assert parse_interval_union("{}") == EMPTY_UNION
    with pytest.raises(PreconditionError):
        parse_interval_union("[0,1/2]")


@settings(max_examples=2500)
@given(intervals(), intervals(), intervals())
def test_semiring_axioms_on_random_triples(a, b, c):
    a, b, c = Interval(*a), Interval(*b), Interval(*c)
    for x, y in ((a, b), (b, c), (a, c)):
        assert semiring_axioms(x, y) == []
    abc = iv_intersect(iv_intersect(a, b), c)
    assert abc == iv_intersect(a, iv_intersect(b, c))


@given(interval_unions(), interval_unions())
def test_boolean_ops_against_sweep(a, b):
    ops = [
        (iu_intersect, lambda x, y: x and y),
        (iu_union, lambda x, y: x or y),
        (iu_subtract, lambda x, y: x and not y),
        (iu_symdiff, lambda x, y: x != y),
    ]
    probes = oracles.probe_points(a, b)
    for op, pred in ops:
        out = op(a, b)
        for x in probes:
            assert (x in out) == pred(x in a, x in b)
        assert out.length == oracles.sweep_length(pred, a, b)
    comp = iu_complement(a)
    assert all((x in comp) != (x in a) for x in probes)
    assert a & b == iu_intersect(a, b) and a | b == iu_union(a, b) and ~a == comp


@given(interval_unions(), interval_unions())
def test_length_identities(a, b):
    assert (a ^ b).length == a.length + b.length - 2 * (a & b).length
    assert (a | b).length <= a.length + b.length
    if a <= b:
        assert a.length <= b.length
    assert (a & b) <= a


@given(interval_unions())
def test_canonical_form(a):
    pieces = a.intervals
    assert all(not p.empty for p in pieces)
    assert all(p.hi < q.lo for p, q in zip(pieces, pieces[1:]))
    assert IntervalUnion(reversed(pieces)) == a


def test_immutable():
    with pytest.raises(AttributeError):
        UNIT_UNION.intervals = ()
