from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from measure_engine.measure import MeasurableSpace, MeasureTable
from measure_engine.set_system import Carrier, SetSystem

settings.register_profile("default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def c3():
    return Carrier((1, 2, 3))


@pytest.fixture
def example_semiring(c3):
    """{∅, {1}, {2,3}, {1,2,3}}."""
    return SetSystem.from_sets(c3, [[], [1], [2, 3], [1, 2, 3]])


@pytest.fixture
def example_table(example_semiring):
    return MeasureTable.from_sets(
        example_semiring, [([], 0), ([1], Fraction(1, 2)), ([2, 3], Fraction(1, 3)), ([1, 2, 3], Fraction(5, 6))]
    )


@pytest.fixture
def three_atoms(c3):
    """Power set of {1,2,3} with atoms 1/2, 1/3, 1/6."""
    system = SetSystem.power_set(c3)
    table = MeasureTable.from_weights(system, {1: Fraction(1, 2), 2: Fraction(1, 3), 3: Fraction(1, 6)})
    return MeasurableSpace(system, table)
