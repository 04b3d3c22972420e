"""Seeded random generators for semirings, measures and simple maps.

Every generator takes a ``random.Random`` so corpora are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .integral import SimpleMap
from .interval import INTERVAL_SPACE, IntervalUnion
from .measure import MeasurableSpace, MeasureTable
from .omega import OmegaGroup
from .product import rectangle
from .set_system import Carrier, SetSystem, atoms, bits, is_semiring


def carrier(n: int) -> Carrier:
    return Carrier(tuple(range(1, n + 1)))


def _random_partition(rng: random.Random, mask: int) -> list[int]:
    """Split ``mask`` into random nonempty blocks."""
    blocks: list[int] = []
    for i in bits(mask):
        k = rng.randrange(len(blocks) + 1)
        if k == len(blocks):
            blocks.append(1 << i)
        else:
            blocks[k] |= 1 << i
    return blocks


def partition_semiring(rng: random.Random, n: int, with_unit: bool = True) -> SetSystem:
    """``∅``, the blocks of a random partition of a random subset, and optionally their union."""
    c = carrier(n)
    support = rng.randrange(1, c.full + 1)
    blocks = _random_partition(rng, support)
    members = {0, *blocks}
    if with_unit:
        members.add(support)
    return SetSystem(c, frozenset(members))


def hierarchical_semiring(rng: random.Random, n: int, depth: int = 3) -> SetSystem:
    """A laminar family in which every non-leaf member is partitioned by its children."""
    c = carrier(n)
    members = {0}

    def grow(mask: int, level: int):
        members.add(mask)
        if level == 0 or mask & (mask - 1) == 0 or rng.random() < 0.25:
            return
        blocks = _random_partition(rng, mask)
        if len(blocks) == 1:
            return
        for b in blocks:
            grow(b, level - 1)

    grow(c.full if rng.random() < 0.7 else rng.randrange(1, c.full + 1), depth)
    return SetSystem(c, frozenset(members))


def interval_semiring(rng: random.Random, n: int) -> SetSystem:
    """Discrete half-open intervals ``[i, j)`` of ``0..n-1`` with endpoints in a random cut set."""
    c = carrier(n)
    cuts = sorted({0, n} | {k for k in range(1, n) if rng.random() < 0.6})
    members = {0}
    for a_idx, a in enumerate(cuts):
        for b in cuts[a_idx + 1:]:
            members.add(((1 << b) - 1) & ~((1 << a) - 1))
    return SetSystem(c, frozenset(members))


def rejection_semiring(rng: random.Random, n: int, tries: int = 200) -> SetSystem:
    """Uniformly random families on a tiny carrier, kept only if they are semirings."""
    c = carrier(n)
    for _ in range(tries):
        members = {0} | {m for m in range(1, c.full + 1) if rng.random() < 0.3}
        system = SetSystem(c, frozenset(members))
        if is_semiring(system):
            return system
    return partition_semiring(rng, n)


def rectangle_semiring(rng: random.Random, max_points: int = 6) -> SetSystem:
    """Rectangles of two small random semirings, relabelled onto ``n1 * n2`` plain points."""
    n1 = rng.randint(1, max(1, max_points // 2))
    n2 = rng.randint(1, max(1, max_points // n1))
    left = interval_semiring(rng, n1) if rng.random() < 0.5 else SetSystem.power_set(carrier(n1))
    right = interval_semiring(rng, n2) if rng.random() < 0.5 else SetSystem.power_set(carrier(n2))
    members = {rectangle(a, b, n2) for a in left.members for b in right.members}
    return SetSystem(carrier(n1 * n2), frozenset(members))


def random_semiring(rng: random.Random, max_points: int = 6, max_members: int | None = None) -> SetSystem:
    """One of six families; with ``max_members`` set, redraw until the family is small enough."""
    while True:
        system = _draw_semiring(rng, max_points)
        if max_members is None or len(system.members) <= max_members:
            return system


def _draw_semiring(rng: random.Random, max_points: int) -> SetSystem:
    n = rng.randint(1, max_points)
    kind = rng.randrange(6)
    if kind == 5:
        return rectangle_semiring(rng, max_points)
    if kind == 0:
        return partition_semiring(rng, n, with_unit=rng.random() < 0.7)
    if kind == 1:
        return hierarchical_semiring(rng, n)
    if kind == 2:
        return interval_semiring(rng, n)
    if kind == 3:
        return SetSystem.power_set(carrier(min(n, 4)))
    return rejection_semiring(rng, min(n, 4))


def random_rational(rng: random.Random, size: int = 6, zero_rate: float = 0.2) -> Fraction:
    if rng.random() < zero_rate:
        return Fraction(0)
    return Fraction(rng.randint(1, size), rng.randint(1, size))


def random_measure(rng: random.Random, system: SetSystem, zero_rate: float = 0.2) -> MeasureTable:
    """Additive by construction: each ring atom gets a random weight, zeros included."""
    weights = {}
    for atom in atoms(system):
        lead = next(iter(bits(atom)))
        weights[system.carrier.points[lead]] = random_rational(rng, zero_rate=zero_rate)
    return MeasureTable.from_weights(system, weights)


def random_simple_map(rng: random.Random, space, group: OmegaGroup, levels: int = 4) -> SimpleMap:
    """Random values on a random coarsening of the space's atoms (or of dyadic cells of [0, 1))."""
    if space is INTERVAL_SPACE:
        den = rng.choice((2, 4, 8, 16))
        cells = [IntervalUnion.of((Fraction(k, den), Fraction(k + 1, den))) for k in range(den)]
    else:
        cells = list(space.atoms)
        covered = 0
        for a in cells:
            covered |= a
        leftover = space.unit & ~covered
        if leftover:
            cells.append(leftover)
    values = [group.random(rng) for _ in range(rng.randint(1, levels))]
    merged: dict[int, object] = {}
    for cell in cells:
        k = rng.randrange(len(values))
        merged[k] = merged[k] | cell if k in merged else cell
    return SimpleMap(space, group, tuple((s, values[k]) for k, s in merged.items()))


def random_measurable(rng: random.Random, space):
    """A random member of the space's algebra (or a random dyadic union in [0, 1))."""
    if space is INTERVAL_SPACE:
        den = rng.choice((2, 4, 8, 16))
        pairs = [(Fraction(k, den), Fraction(k + 1, den)) for k in range(den) if rng.random() < 0.5]
        return IntervalUnion.of(*pairs)
    members = space.members()
    return members[rng.randrange(len(members))]


def random_space(rng: random.Random, max_points: int = 6) -> MeasurableSpace:
    """Power set of a random carrier with a random atom measure: the simplest measurable space."""
    system = SetSystem.power_set(carrier(rng.randint(1, max_points)))
    return MeasurableSpace(system, random_measure(rng, system))
