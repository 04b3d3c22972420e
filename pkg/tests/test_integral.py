import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from measure_engine.errors import NotMeasurableError, PreconditionError
from measure_engine.integral import (
    SCALARS,
    SimpleMap,
    add,
    ae_equal_integral,
    boundedness,
    canonicalize,
    chebyshev,
    check_additivity,
    check_norm_bound,
    check_omega_bound,
    check_scalar_morphism,
    combine,
    continuity_modulus,
    integrate,
    level_set,
    norm_map,
    sigma_additivity,
    support,
    sup_norm,
    zero_integral_null,
)
from measure_engine.interval import INTERVAL_SPACE, IntervalUnion
from measure_engine.omega import GROUPS, get_group
from measure_engine.sampling import random_measurable, random_simple_map, random_space


@pytest.fixture
def f(three_atoms):
    return SimpleMap.from_points(three_atoms, SCALARS, {1: F(2), 2: F(-3), 3: F(0)})


def test_integral_example(f):
    r = integrate(f)
    assert r.value == 0
    assert r.norm_integral == 2
    assert check_norm_bound(f).passed


def test_integral_over_subset(f, three_atoms):
    y = three_atoms.carrier.mask([1, 3])
    assert integrate(f, y).value == 1
    with pytest.raises(PreconditionError):
        integrate(f, 1 << 5)


def test_additivity_example(f, three_atoms):
    g = SimpleMap.constant(three_atoms, SCALARS, F(1))
    assert integrate(add(f, g)).value == 1
    assert check_additivity(f, g).passed


def test_chebyshev_example(f):
    report = chebyshev(f, 2)
    assert report.passed
    assert report.checks[0].values == {"c": "2", "lhs": "5/6", "rhs": "1"}
    with pytest.raises(PreconditionError):
        chebyshev(f, 0)


def test_modulus_example_is_vacuous(f):
    m = continuity_modulus(f, F(1, 10))
    assert m.delta == F(1, 60)
    assert m.vacuous
    assert m.report.verdict == "flagged"


def test_modulus_on_interval_is_not_vacuous():
    step = SimpleMap(INTERVAL_SPACE, SCALARS, ((IntervalUnion.of((0, F(1, 2))), F(4)), (IntervalUnion.of((F(1, 2), 1)), F(-1))))
    m = continuity_modulus(step, F(1, 10))
    assert m.delta == F(1, 80)
    assert not m.vacuous and m.report.verdict == "pass"


def test_non_measurable_piece_refused(example_table):
    from measure_engine.lebesgue import PremeasureSpace, lebesgue_extension

    space = lebesgue_extension(PremeasureSpace(example_table))
    c = space.carrier
    with pytest.raises(NotMeasurableError):
        SimpleMap(space, SCALARS, ((c.mask([2]), F(1)), (c.mask([1, 3]), F(0))))
    g = SimpleMap.constant(space, SCALARS, F(1))
    with pytest.raises(NotMeasurableError):
        integrate(g, c.mask([2]))


def test_piece_validation(three_atoms):
    c = three_atoms.carrier
    with pytest.raises(PreconditionError):
        SimpleMap(three_atoms, SCALARS, ((c.mask([1, 2]), F(1)), (c.mask([2, 3]), F(2))))
    with pytest.raises(PreconditionError):
        SimpleMap(three_atoms, SCALARS, ((c.mask([1, 2]), F(1)),))


def test_canonicalize_merges_equal_values(three_atoms):
    c = three_atoms.carrier
    g = SimpleMap(three_atoms, SCALARS, ((c.mask([3]), F(1)), (0, F(7)), (c.mask([1]), F(1)), (c.mask([2]), F(0))))
    h = canonicalize(g)
    assert h.pieces == ((c.mask([2]), F(0)), (c.mask([1, 3]), F(1)))
    assert integrate(h) == integrate(g)


def test_level_sets_and_norms(f, three_atoms):
    c = three_atoms.carrier
    assert support(f) == c.mask([1, 2])
    assert level_set(f, lambda v: v < 0) == c.mask([2])
    assert sup_norm(f) == 3
    assert integrate(norm_map(f)).value == 2
    assert f.value_at(2) == -3
    assert f.format() == "{1} -> 2; {2} -> -3; {3} -> 0"


def test_zero_integral_and_ae_equality():
    from measure_engine.measure import MeasurableSpace, MeasureTable
    from measure_engine.set_system import Carrier, SetSystem

    system = SetSystem.power_set(Carrier((1, 2, 3)))
    space = MeasurableSpace(system, MeasureTable.from_weights(system, {1: F(1), 2: F(1), 3: F(0)}))
    on_null = SimpleMap.from_points(space, SCALARS, {3: F(5)})
    assert integrate(on_null).norm_integral == 0
    assert zero_integral_null(on_null).passed
    zero = SimpleMap.constant(space, SCALARS, F(0))
    report = ae_equal_integral(on_null, zero)
    assert report.passed and report.checks[0].name == "f = g a.e. ⇒ ∫f = ∫g"
    other = SimpleMap.from_points(space, SCALARS, {1: F(5)})
    assert ae_equal_integral(other, zero).checks[0].values == {"mu": "1"}
    assert zero_integral_null(other).checks[0].name == "∫‖f‖ > 0 ⇒ μ(support) > 0"


def test_sigma_additivity_validation(f, three_atoms):
    c = three_atoms.carrier
    assert sigma_additivity(f, [c.mask([1]), c.mask([2, 3])]).passed
    with pytest.raises(PreconditionError):
        sigma_additivity(f, [c.mask([1])])
    with pytest.raises(PreconditionError):
        sigma_additivity(f, [c.mask([1, 2]), c.mask([2, 3])])


def test_scalar_morphism_side_checked(f):
    with pytest.raises(PreconditionError):
        check_scalar_morphism(F(2), f, side="middle")


def test_matrix_morphism_both_sides(three_atoms):
    g = get_group("ratmat2")
    a = (F(1), F(2), F(0), F(-1))
    m = SimpleMap.from_points(three_atoms, g, {1: (F(1), F(0), F(3), F(1)), 2: (F(0), F(1, 2), F(1), F(0))})
    assert check_scalar_morphism(a, m, "left").passed
    assert check_scalar_morphism(a, m, "right").passed


def _setting(seed, name):
    rng = random.Random(seed)
    space = INTERVAL_SPACE if rng.random() < 0.3 else random_space(rng, max_points=5)
    return rng, space, GROUPS[name]


@pytest.mark.parametrize("name", sorted(GROUPS))
@given(seed=st.integers(0, 100_000))
def test_integral_theorems_random(name, seed):
    rng, space, g = _setting(seed, name)
    f1 = random_simple_map(rng, space, g)
    f2 = random_simple_map(rng, space, g)
    y = random_measurable(rng, space)
    assert check_norm_bound(f1, y).passed
    assert check_additivity(f1, f2).passed
    assert check_omega_bound(g.mul, [f1, f2]).passed
    assert check_scalar_morphism(g.random(rng), f1, "left").passed
    assert check_scalar_morphism(g.random(rng), f1, "right").passed
    assert boundedness(f1, y).passed
    assert chebyshev(f1, F(rng.randint(1, 6), rng.randint(1, 3))).passed
    assert zero_integral_null(f1).passed
    assert ae_equal_integral(f1, f2).passed
    comp = space.unit & ~y if space is not INTERVAL_SPACE else ~y
    assert sigma_additivity(f1, [y, comp] if y and comp else [space.unit]).passed
    assert continuity_modulus(f1, F(1, rng.randint(1, 20))).report.passed


@given(seed=st.integers(0, 100_000))
def test_integral_linear_in_scalars(seed):
    rng, space, g = _setting(seed, "ratvec3")
    f1 = random_simple_map(rng, space, g)
    q = F(rng.randint(-5, 5), rng.randint(1, 5))
    scaled = combine(lambda v: g.scalar(q, v), [f1])
    assert integrate(scaled).value == g.scalar(q, integrate(f1).value)
