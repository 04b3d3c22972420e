import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from measure_engine.convergence import (
    FiniteMap,
    beppo_levi,
    dominated_convergence,
    dyadic_indicator,
    egorov,
    eventually_constant,
    fubini_simple,
    fubini_uniform_limit,
    fubini_values,
    geometric,
    identity_map,
    limit_measurability,
    measurability_closure_checks,
    measurable_by_levels,
    measurable_by_preimages,
    staircase,
    verify_tail_bound,
)
from measure_engine.errors import PreconditionError
from measure_engine.integral import SCALARS, SimpleMap, integrate
from measure_engine.interval import IntervalUnion
from measure_engine.measure import MeasureTable
from measure_engine.omega import GROUPS, get_group
from measure_engine.product import product_measure
from measure_engine.sampling import random_measure, random_semiring, random_simple_map, random_space
from measure_engine.set_system import Carrier, SetSystem


@pytest.mark.parametrize("delta,offset", [(F(1, 4), 3), (F(1, 8), 4), (F(1, 64), 7)])
def test_egorov_dyadic_schedule(delta, offset):
    seq = dyadic_indicator("decreasing")
    res = egorov(seq, delta, depth=6)
    # μ(E ∖ E^m_n) = 2^-n < δ/2^m forces n = m + log2(1/δ) + 1
    assert res.schedule == {m: m + offset for m in range(1, 7)}
    assert res.e_delta == IntervalUnion.of((F(1, 2 ** (1 + offset)), 1))
    assert res.report.passed
    assert all(rate == 0 for rate in res.uniform_rate.values())


def test_egorov_small_depth_example():
    res = egorov(dyadic_indicator("decreasing"), F(1, 8), depth=3)
    assert res.schedule == {1: 5, 2: 6, 3: 7}
    assert str(res.e_delta) == "[1/32,1)"


def test_egorov_increasing_family():
    res = egorov(dyadic_indicator("increasing"), F(1, 4), depth=4)
    assert res.report.passed
    assert res.e_delta == IntervalUnion.of((F(1, 16), 1))


def test_egorov_rejects_bad_parameters():
    seq = dyadic_indicator("decreasing")
    with pytest.raises(PreconditionError):
        egorov(seq, 0, depth=3)
    with pytest.raises(PreconditionError):
        egorov(seq, F(1, 4), depth=0)
    with pytest.raises(PreconditionError):
        egorov(seq, F(1, 2**20), depth=2, max_index=8)


def test_egorov_eventually_constant(three_atoms):
    f = SimpleMap.from_points(three_atoms, SCALARS, {1: F(2), 2: F(-3)})
    h = SimpleMap.from_points(three_atoms, SCALARS, {1: F(1), 2: F(1)})
    seq = eventually_constant(f, h, switch=1)
    res = egorov(seq, F(1, 4), depth=5)
    assert set(res.schedule.values()) == {1}
    assert res.e_delta == three_atoms.unit
    late = eventually_constant(f, h, switch=4)
    res = egorov(late, F(1, 4), depth=3)
    assert res.schedule == {1: 4, 2: 4, 3: 4}
    assert verify_tail_bound(late, 8).passed


def _egorov_oracle(weights, rates, delta, depth):
    """Schedule by direct evaluation of μ{x : r_x^n ≥ 1/m}."""
    out = {}
    for m in range(1, depth + 1):
        n = 1
        while sum(w for p, w in weights.items() if rates[p] ** n >= F(1, m)) >= delta / 2**m:
            n += 1
        out[m] = n
    return out


@given(st.integers(0, 10_000))
def test_egorov_geometric_against_oracle(seed):
    rng = random.Random(seed)
    space = random_space(rng, max_points=4)
    points = space.carrier.points
    rates = {p: F(rng.randint(0, 3), 4) for p in points}
    weights = {p: space.mu(1 << i) for i, p in enumerate(points)}
    seq = geometric(space, rates)
    delta = F(1, rng.choice((2, 4, 8)))
    res = egorov(seq, delta, depth=4)
    assert res.schedule == _egorov_oracle(weights, rates, delta, 4)
    assert res.report.passed
    assert verify_tail_bound(seq, 6).passed


def test_dominated_convergence_dyadic():
    seq = dyadic_indicator("decreasing")
    g = SimpleMap.constant(seq.space, SCALARS, F(1))
    res = dominated_convergence(seq, g, horizon=10, tol=F(1, 1000))
    assert res.report.passed
    assert res.residuals[10] == res.certificate == F(1, 1024)
    assert all(res.residuals[n] == F(1, 2**n) for n in range(1, 11))
    assert not dominated_convergence(seq, g, horizon=5, tol=F(1, 1000)).report.passed


def test_dominated_convergence_needs_domination():
    seq = dyadic_indicator("decreasing")
    g = SimpleMap.constant(seq.space, SCALARS, F(1, 2))
    res = dominated_convergence(seq, g, horizon=3, tol=1)
    assert not res.report.passed
    assert res.report.failures[0].name == "‖f_n‖ ≤ g"


def test_beppo_levi_dyadic():
    seq = dyadic_indicator("increasing")
    res = beppo_levi(seq, bound=1, horizon=20, tol=F(1, 10**6))
    assert res.report.passed
    assert all(res.integrals[n] == 1 - F(1, 2**n) for n in range(1, 21))
    assert not beppo_levi(dyadic_indicator("decreasing"), bound=1, horizon=3, tol=1).report.passed


def test_staircase(three_atoms):
    seq = staircase(three_atoms, {1: F(2), 2: F(3), 3: F(1)}, {1: 2, 2: 3, 3: 1})
    assert integrate(seq.limit).value == F(1) + F(1) + F(1, 6)
    res = beppo_levi(seq, bound=F(13, 6), horizon=3, tol=0)
    assert res.report.passed
    assert res.residuals[3] == 0
    assert verify_tail_bound(seq, 5).passed
    with pytest.raises(PreconditionError):
        staircase(three_atoms, {1: -1}, {})


def test_bad_tail_bound_detected(three_atoms):
    from dataclasses import replace

    seq = geometric(three_atoms, {1: F(1, 2), 2: F(1, 3)})
    zero = SimpleMap.constant(three_atoms, SCALARS, F(0))
    assert not verify_tail_bound(replace(seq, tail_bound=lambda n: zero), 3).passed


@pytest.fixture
def ab_cd():
    def table(points, weights):
        system = SetSystem.power_set(Carrier(tuple(points)))
        return MeasureTable.from_weights(system, dict(zip(points, weights)))

    return product_measure(table("ab", [F(1, 4), F(3, 4)]), table("cd", [F(1, 2), F(1, 2)]))


def test_fubini_matrix_over_rectangles(ab_cd):
    space = ab_cd.ring_space()
    g = get_group("ratmat2")
    values = {
        ("a", "c"): (F(1), F(2), F(0), F(1)),
        ("a", "d"): (F(0), F(1), F(1), F(0)),
        ("b", "c"): (F(-1), F(0), F(0), F(3)),
    }
    f = SimpleMap.from_points(space, g, values)
    c = space.carrier
    for b in (c.full, c.mask([("a", "c"), ("a", "d")]), c.mask([("a", "c"), ("b", "c")])):
        assert fubini_simple(ab_cd, f, b).passed
    vals = fubini_values(ab_cd, f)
    # weights a:c = a:d = 1/8, b:c = 3/8
    assert vals.direct == (F(-1, 4), F(3, 8), F(1, 8), F(5, 4))


@given(st.integers(0, 10_000))
def test_fubini_random_maps(seed):
    rng = random.Random(seed)
    m1 = random_measure(rng, random_semiring(rng, max_points=3))
    m2 = random_measure(rng, random_semiring(rng, max_points=3))
    prod = product_measure(m1, m2)
    if prod.ring.unit is None:
        return
    space = prod.ring_space()
    g = GROUPS[rng.choice(sorted(GROUPS))]
    f = random_simple_map(rng, space, g)
    b = rng.choice(space.members())
    assert fubini_simple(prod, f, b).passed


def test_fubini_uniform_limit(ab_cd):
    space = ab_cd.ring_space()
    pts = space.carrier.points
    # f(x) = Σ_k 2^-k v_x truncated at K; sup residual 2^-K · max|v|
    v = dict(zip(pts, (F(1), F(-2), F(3), F(0))))
    truncs = [SimpleMap.from_points(space, SCALARS, {p: v[p] * (1 - F(1, 2**k)) for p in pts}) for k in range(1, 6)]
    residuals = [3 * F(1, 2**k) for k in range(1, 6)]
    assert fubini_uniform_limit(ab_cd, truncs, residuals).passed
    assert not fubini_uniform_limit(ab_cd, truncs, [0] * 5).passed


def test_finite_map_preimages():
    c = Carrier((1, 2, 3))
    dom = SetSystem.from_sets(c, [[], [1, 2], [3], [1, 2, 3]])
    cod = SetSystem.from_sets(Carrier(("x", "y")), [[], ["x"], ["y"], ["x", "y"]])
    good = FiniteMap(dom, cod, (0, 0, 1))
    bad = FiniteMap(dom, cod, (0, 1, 1))
    assert good.is_measurable() and not bad.is_measurable()
    assert good.preimage(0b01) == c.mask([1, 2])
    assert identity_map(dom).is_measurable()
    assert good.then(identity_map(cod)).image == good.image


def test_measurability_closure(example_table):
    from measure_engine.lebesgue import PremeasureSpace, lebesgue_extension

    space = lebesgue_extension(PremeasureSpace(example_table))
    measurable = {1: F(1), 2: F(5), 3: F(5)}
    wild = {1: F(0), 2: F(1), 3: F(0)}
    assert measurable_by_levels(space, measurable) and measurable_by_preimages(space, measurable)
    assert not measurable_by_levels(space, wild) and not measurable_by_preimages(space, wild)
    report = measurability_closure_checks(space, [measurable, wild, {1: F(-2), 2: F(1), 3: F(1)}])
    assert report.passed


@given(st.integers(0, 10_000))
def test_level_and_preimage_criteria_agree(seed):
    rng = random.Random(seed)
    space = random_space(rng, max_points=4)
    values = {p: F(rng.randint(0, 2)) for p in space.carrier.points}
    assert measurable_by_levels(space, values) == measurable_by_preimages(space, values)


def test_limit_measurability():
    assert limit_measurability(dyadic_indicator("decreasing"), 8).passed
