import random

import pytest
from hypothesis import given, strategies as st

import oracles
from measure_engine.errors import EmptySystemError, NotASemiringError, PreconditionError
from measure_engine.sampling import random_semiring
from measure_engine.set_system import (
    Carrier,
    Kind,
    SetSystem,
    atoms,
    check_expansion,
    classify,
    common_refinement,
    complete_expansion,
    disjointify,
    find_expansion,
    all_expansions,
    generate_algebra,
    generate_ring,
    generate_ring_from_semiring,
    intersect_systems,
    is_ring,
    is_semiring,
    key,
    subtract_expansion,
    MinimalityError,
)


def m(c, *pts):
    return c.mask(pts)


# --- classify ---------------------------------------------------------------


def test_classify_minimal_semiring():
    c = Carrier((1, 2))
    assert classify(SetSystem.from_sets(c, [[]])).kind is Kind.SIGMA_ALGEBRA


def test_classify_empty_only_is_at_least_semiring():
    c = Carrier((1, 2))
    assert is_semiring(SetSystem.from_sets(c, [[]]))


def test_classify_power_set():
    assert classify(SetSystem.power_set(Carrier((1, 2)))).kind is Kind.SIGMA_ALGEBRA


def test_classify_example_semiring_is_in_fact_an_algebra(example_semiring):
    result = classify(example_semiring)
    assert result.kind is Kind.SIGMA_ALGEBRA
    assert oracles.is_ring(example_semiring.members)


def test_classify_none_with_expansion_witness(c3):
    system = SetSystem.from_sets(c3, [[], [1], [1, 2, 3]])
    result = classify(system)
    assert result.kind is Kind.NONE
    assert result.witness.axiom == "finite expansion"
    assert result.witness.sets == (m(c3, 1, 2, 3), m(c3, 1))


def test_classify_semiring_not_ring(c3):
    system = SetSystem.from_sets(c3, [[], [1], [2], [3]])
    result = classify(system)
    assert result.kind is Kind.SEMIRING
    assert result.witness.axiom == "symmetric difference"


def test_classify_requested_met_has_no_witness(c3):
    system = SetSystem.from_sets(c3, [[], [1], [2], [3]])
    assert classify(system, Kind.SEMIRING).witness is None
    assert classify(system, Kind.RING).witness is not None


def test_classify_empty_system_rejected(c3):
    with pytest.raises(EmptySystemError, match="empty system"):
        classify(SetSystem(c3, frozenset()))


def test_unit_is_largest_member_not_carrier():
    c = Carrier((1, 2, 3))
    system = SetSystem.from_sets(c, [[], [1], [2], [1, 2]])
    assert classify(system).kind is Kind.SIGMA_ALGEBRA  # unit {1,2} ⊂ carrier is still a unit
    system = SetSystem.from_sets(c, [[], [1], [2], [1, 2], [3]])
    assert classify(system).kind is Kind.SEMIRING


@given(st.integers(0, 2**16 - 1))
def test_classify_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    c = Carrier((1, 2, 3))
    members = {0} | {s for s in range(1, 8) if rng.random() < 0.4}
    system = SetSystem(c, frozenset(members))
    assert is_semiring(system) == oracles.is_semiring(members)
    assert is_ring(system) == oracles.is_ring(members)


# --- expansions -------------------------------------------------------------


def test_subtract_expansion_only_expansion(example_semiring, c3):
    e = subtract_expansion(example_semiring, m(c3, 1, 2, 3), m(c3, 1))
    assert e.pieces == (m(c3, 1), m(c3, 2, 3))
    assert e.prefix_len == 1


def test_subtract_expansion_whole_equals_part(example_semiring, c3):
    assert subtract_expansion(example_semiring, m(c3, 1), m(c3, 1)).pieces == (m(c3, 1),)


def test_subtract_expansion_tie_break():
    c = Carrier((1, 2))
    e = subtract_expansion(SetSystem.power_set(c), c.mask([1, 2]), c.mask([1]))
    assert e.pieces == (c.mask([1]), c.mask([2]))


def test_subtract_expansion_errors(c3):
    system = SetSystem.from_sets(c3, [[], [1], [2], [1, 2, 3]])
    with pytest.raises(PreconditionError):
        subtract_expansion(system, m(c3, 1), m(c3, 2))
    with pytest.raises(NotASemiringError) as info:
        subtract_expansion(system, m(c3, 1, 2, 3), m(c3, 1))
    assert info.value.pair == (m(c3, 1, 2, 3), m(c3, 1))


def test_complete_expansion_examples(c3):
    ps = SetSystem.power_set(c3)
    full = c3.full
    assert complete_expansion(ps, full, [m(c3, 1)]).pieces == (m(c3, 1), m(c3, 2), m(c3, 3))
    assert complete_expansion(ps, full, [full]).pieces == (full,)
    e = complete_expansion(ps, full, [m(c3, 1), m(c3, 2)])
    assert e.pieces == (m(c3, 1), m(c3, 2), m(c3, 3)) and e.prefix_len == 2


def test_complete_expansion_rejects_overlap(c3):
    with pytest.raises(PreconditionError):
        complete_expansion(SetSystem.power_set(c3), c3.full, [m(c3, 1, 2), m(c3, 2, 3)])


def test_common_refinement_examples(c3):
    ps = SetSystem.power_set(c3)
    r = common_refinement(ps, [m(c3, 1, 2), m(c3, 2, 3)])
    assert r.pieces == (m(c3, 1), m(c3, 2), m(c3, 3))
    assert r.membership == (frozenset({0, 1}), frozenset({1, 2}))
    r = common_refinement(ps, [m(c3, 1, 3)])
    assert r.pieces == (m(c3, 1, 3),) and r.membership == (frozenset({0}),)
    r = common_refinement(ps, [m(c3, 1), m(c3, 2)])
    assert r.pieces == (m(c3, 1), m(c3, 2))
    assert r.membership == (frozenset({0}), frozenset({1}))


def test_common_refinement_rejects_non_members(example_semiring, c3):
    with pytest.raises(PreconditionError):
        common_refinement(example_semiring, [m(c3, 2)])


def test_find_expansion_reverse_gives_other_choice():
    c = Carrier((1, 2))
    ps = SetSystem.power_set(c)
    assert find_expansion(ps, c.full) == (c.mask([1]), c.mask([2]))
    assert find_expansion(ps, c.full, reverse=True) == (c.full,)


@given(st.integers(0, 2**20))
def test_all_expansions_match_subfamily_enumeration(seed):
    rng = random.Random(seed)
    system = random_semiring(rng, 5, max_members=16)
    for target in system.ordered:
        mine = {frozenset(e) for e in all_expansions(system, target)}
        ref = {frozenset(e) for e in oracles.expansions(system.members, target)}
        assert mine == ref


def _semiring_cases():
    rng = random.Random(7)
    return [random_semiring(rng, 6) for _ in range(40)]


@pytest.mark.parametrize("system", _semiring_cases())
def test_lemma_postconditions_exhaustive(system):
    for whole in system.ordered:
        inside = [p for p in system.nonempty if p & ~whole == 0]
        for part in inside:
            e = subtract_expansion(system, whole, part)
            assert e.pieces[0] == part and check_expansion(e)
            assert all(p in system for p in e.pieces)
        for given in oracles.subfamilies(inside[:6]):
            if oracles.disjoint_union(given) is None:
                continue
            given = sorted(given, key=key)
            e = complete_expansion(system, whole, given)
            assert list(e.pieces[: e.prefix_len]) == given
            assert check_expansion(e) and all(p in system for p in e.pieces)
    sets = list(system.ordered)
    r = common_refinement(system, sets)
    assert oracles.disjoint_union(r.pieces) is not None
    assert all(p in system for p in r.pieces)
    for idx, s in enumerate(sets):
        union = 0
        for i in r.membership[idx]:
            union |= r.pieces[i]
        assert union == s


# --- generated rings --------------------------------------------------------


def test_generate_ring_from_semiring_examples(example_semiring, c3):
    assert generate_ring_from_semiring(example_semiring).ring.members == example_semiring.members
    c = Carrier((1, 2))
    g = generate_ring_from_semiring(SetSystem.from_sets(c, [[], [1], [2]]))
    assert g.ring.members == SetSystem.power_set(c).members
    assert g.witnesses[c.full].pieces == (c.mask([1]), c.mask([2]))
    ps = SetSystem.power_set(c3)
    assert generate_ring_from_semiring(ps).ring.members == ps.members


def test_generate_ring_from_semiring_rejects_non_semiring(c3):
    with pytest.raises(NotASemiringError):
        generate_ring_from_semiring(SetSystem.from_sets(c3, [[], [1], [1, 2, 3]]))


def test_generate_ring_examples(c3):
    r = generate_ring(SetSystem.from_sets(c3, [[1], [2]]))
    assert r.members == {0, m(c3, 1), m(c3, 2), m(c3, 1, 2)}
    r = generate_ring(SetSystem.from_sets(c3, [[1, 2], [2, 3]]))
    assert r.members == SetSystem.power_set(c3).members
    ring = SetSystem.from_sets(c3, [[], [1], [2, 3], [1, 2, 3]])
    assert generate_ring(ring).members == ring.members


def test_generate_ring_empty_input(c3):
    with pytest.raises(EmptySystemError):
        generate_ring(SetSystem(c3, frozenset()))


def test_generate_ring_minimality_against_candidates(c3):
    system = SetSystem.from_sets(c3, [[1], [2]])
    generate_ring(system, [SetSystem.power_set(c3)])
    bogus = SetSystem.from_sets(c3, [[], [1], [2]])  # not a ring, ignored
    generate_ring(system, [bogus])


def test_minimality_error_is_precondition_error():
    assert issubclass(MinimalityError, PreconditionError)


@given(st.integers(0, 2**20))
def test_generate_ring_properties(seed):
    rng = random.Random(seed)
    c = Carrier(tuple(range(1, 6)))
    a = SetSystem(c, frozenset(rng.randrange(32) for _ in range(rng.randint(1, 4))))
    b = a.with_members(a.members | {rng.randrange(32)})
    ra, rb = generate_ring(a), generate_ring(b)
    assert is_ring(ra) and oracles.is_ring(ra.members)
    assert generate_ring(ra).members == ra.members
    assert ra.members <= rb.members
    assert ra.members == oracles.ring_closure(a.members)


@given(st.integers(0, 2**20))
def test_two_ring_algorithms_agree(seed):
    system = random_semiring(random.Random(seed), 6)
    assert generate_ring_from_semiring(system).ring.members == generate_ring(system).members


@given(st.integers(0, 2**20))
def test_intersection_of_rings_is_ring(seed):
    rng = random.Random(seed)
    c = Carrier(tuple(range(1, 5)))
    r1 = generate_ring(SetSystem(c, frozenset(rng.randrange(16) for _ in range(3))))
    r2 = generate_ring(SetSystem(c, frozenset(rng.randrange(16) for _ in range(3))))
    assert is_ring(intersect_systems(r1, r2))


def test_generate_algebra_examples():
    c = Carrier((1, 2))
    assert generate_algebra(SetSystem.from_sets(c, [[1]])).members == {0, c.mask([1])}
    assert generate_algebra(SetSystem.from_sets(c, [[1], [2]])).members == SetSystem.power_set(c).members
    ps = SetSystem.power_set(c)
    assert generate_algebra(ps).members == ps.members


@given(st.integers(0, 2**20))
def test_generate_algebra_has_unit(seed):
    rng = random.Random(seed)
    c = Carrier(tuple(range(1, 5)))
    system = SetSystem(c, frozenset(rng.randrange(1, 16) for _ in range(rng.randint(1, 3))))
    alg = generate_algebra(system)
    assert alg.unit == system.union
    assert all(a & alg.unit == a for a in alg.members)
    assert classify(alg).kind >= Kind.ALGEBRA


# --- disjointify and atoms --------------------------------------------------


def test_disjointify_examples(c3):
    assert disjointify([m(c3, 1, 2), m(c3, 2, 3)]) == [m(c3, 1, 2), m(c3, 3)]
    assert disjointify([m(c3, 1), m(c3, 2)]) == [m(c3, 1), m(c3, 2)]
    assert disjointify([c3.full, c3.full]) == [c3.full, 0]


@given(st.lists(st.integers(0, 255), max_size=8))
def test_disjointify_properties(sets):
    out = disjointify(sets)
    union_in = union_out = 0
    for a, b in zip(sets, out):
        assert b & ~a == 0
        assert b & union_out == 0
        union_in |= a
        union_out |= b
    assert union_in == union_out


def test_atoms_group_points_by_membership(example_semiring, c3):
    assert atoms(example_semiring) == (m(c3, 1), m(c3, 2, 3))


def test_carrier_limits():
    with pytest.raises(PreconditionError):
        Carrier(tuple(range(17)))
    with pytest.raises(PreconditionError):
        Carrier((1, 1))


def test_format(example_semiring):
    assert example_semiring.format() == "{{}, {1}, {2,3}, {1,2,3}}"
