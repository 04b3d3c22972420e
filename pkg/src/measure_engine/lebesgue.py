"""Outer measure, Lebesgue measurability and the Lebesgue extension.

Two kinds of space are handled:

* :class:`PremeasureSpace` - a finite semiring with unit and a measure on it.
  The infimum over coverings is a minimum over finite coverings and is
  computed exactly by dynamic programming over subsets of the unit.
* :class:`~measure_engine.interval.IntervalSpace` - intervals in ``[0, 1)``
  with length.  A finite union of intervals is covered by its own pieces, which
  attains the infimum; countable unions are approached with epsilon witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

from .errors import NoUnitError, NotMeasurableError, PreconditionError
from .interval import Interval, IntervalSpace, IntervalUnion, as_union
from .measure import Level, MeasurableSpace, MeasureTable, extend_measure
from .report import Report, fmt
from .set_system import GeneratedRing, SetSystem, generate_ring_from_semiring, is_subset, key


class PremeasureSpace:
    """A semiring with unit ``E`` and a measure ``m`` on it, with memoised ``μ*``."""

    def __init__(self, table: MeasureTable):
        if table.system.unit is None:
            raise NoUnitError()
        self.table = table
        self.semiring = table.system
        self.carrier = table.system.carrier
        self.unit = table.system.unit
        self._cover: dict[int, tuple[Fraction, tuple[int, ...]]] = {0: (Fraction(0), ())}

    empty = 0

    def format(self, a: int) -> str:
        return self.carrier.format(a)

    def sort_key(self, a: int):
        return key(a)

    @cached_property
    def generated(self) -> GeneratedRing:
        return generate_ring_from_semiring(self.semiring)

    @cached_property
    def ring_measure(self) -> MeasureTable:
        return extend_measure(self.table, self.generated)

    @property
    def ring(self) -> SetSystem:
        return self.generated.ring

    def best_cover(self, target: int) -> tuple[Fraction, tuple[int, ...]]:
        """Cheapest cover of ``target`` by semiring members.

        Some member of an optimal cover holds the lowest point of the target,
        so ``cost(s) = min over B ∋ low(s) of m(B) + cost(s ∖ B)``.  Members are
        tried in key order and only strict improvements replace the incumbent,
        which makes the reported cover canonical.
        """
        if target & ~self.unit:
            raise PreconditionError(f"{self.format(target)} is not contained in the unit")
        return self._best(target)

    def _best(self, s: int) -> tuple[Fraction, tuple[int, ...]]:
        hit = self._cover.get(s)
        if hit is not None:
            return hit
        low = s & -s
        best = None
        for b in self.semiring.nonempty:
            if b & low:
                cost, cover = self._best(s & ~b)
                cost += self.table(b)
                if best is None or cost < best[0]:
                    best = (cost, tuple(sorted((b,) + cover, key=key)))
        self._cover[s] = best
        return best

    def outer(self, target: int) -> Fraction:
        return self.best_cover(target)[0]

    @cached_property
    def measurable_sets(self) -> tuple[int, ...]:
        return tuple(
            a for a in sorted(self.carrier.subsets(self.unit), key=key) if _distance_to_ring(self, a)[0] == 0
        )


def _distance_to_ring(space: PremeasureSpace, target: int) -> tuple[Fraction, int]:
    best = None
    for b in space.ring.ordered:
        d = space.outer(target ^ b)
        if best is None or d < best[0]:
            best = (d, b)
            if d == 0:
                break
    return best


# --- outer measure ----------------------------------------------------------


@dataclass(frozen=True)
class OuterMeasureResult:
    target: object
    value: Fraction
    best_cover: tuple
    attained: bool = True


def outer_measure(space, target) -> OuterMeasureResult:
    """``μ*(target)``: least total measure of a cover by semiring members."""
    if isinstance(space, IntervalSpace):
        target = as_union(target)
        return OuterMeasureResult(target, target.length, target.intervals, True)
    value, cover = space.best_cover(target)
    return OuterMeasureResult(target, value, cover, True)


def symdiff_distance(space, a, b) -> Fraction:
    """``μ*(A Δ B)``."""
    if isinstance(space, IntervalSpace):
        return (as_union(a) ^ as_union(b)).length
    return space.outer(a ^ b)


# --- measurability ----------------------------------------------------------


@dataclass(frozen=True)
class CountableIntervalUnion:
    """``⋃_k piece(k)`` for pairwise disjoint intervals, ``k = 1, 2, …``.

    ``tail(K)`` must bound the total length of the pieces with index ``> K``.
    """

    piece: Callable[[int], Interval]
    tail: Callable[[int], Fraction]
    max_terms: int = 4096

    def truncation(self, k: int) -> IntervalUnion:
        return IntervalUnion(self.piece(i) for i in range(1, k + 1))


@dataclass(frozen=True)
class MeasurabilityWitness:
    target: object
    best: object
    distance: Fraction
    measurable: bool
    complement_best: object = None
    epsilon: Fraction | None = None
    distance_is_bound: bool = False


def is_measurable(space, target, epsilon: Fraction | None = None) -> MeasurabilityWitness:
    """Distance from ``target`` to the generated ring, with the closest ring set.

    Finite spaces decide exactly: the target is measurable iff the least
    ``μ*(A Δ B)`` over ring members ``B`` is zero.  The complement witness is
    ``E ∖ B``, at the same distance because ``A Δ B = (E∖A) Δ (E∖B)``.
    For a countable interval union the first ``K`` pieces serve as ``B`` once
    the declared tail drops below ``epsilon``.
    """
    if epsilon is not None:
        epsilon = Fraction(epsilon)
        if epsilon <= 0:
            raise PreconditionError("epsilon must be positive")
    if isinstance(space, IntervalSpace):
        return _interval_measurability(space, target, epsilon)
    if target & ~space.unit:
        raise PreconditionError(f"{space.format(target)} is not contained in the unit")
    distance, best = _distance_to_ring(space, target)
    complement, complement_best = space.unit & ~target, space.unit & ~best
    if space.outer(complement ^ complement_best) != distance:
        raise AssertionError("complement witness disagrees")  # identity A Δ B = (E∖A) Δ (E∖B)
    return MeasurabilityWitness(target, best, distance, distance == 0, complement_best, epsilon)


def _interval_measurability(space, target, epsilon):
    if isinstance(target, CountableIntervalUnion):
        if epsilon is None:
            raise PreconditionError("a countable union needs an epsilon")
        for k in range(1, target.max_terms + 1):
            bound = Fraction(target.tail(k))
            if bound < epsilon:
                best = target.truncation(k)
                return MeasurabilityWitness(target, best, bound, True, ~best, epsilon, True)
        return MeasurabilityWitness(target, None, Fraction(target.tail(target.max_terms)), False, None, epsilon, True)
    target = as_union(target)
    return MeasurabilityWitness(target, target, Fraction(0), True, ~target, epsilon)


# --- the extension ----------------------------------------------------------


def lebesgue_extension(space):
    """All measurable subsets of the unit, with ``μ = μ*`` on them.

    The measure is the outer measure restricted, never recomputed from
    expansions, so additivity on the result is a real check.
    """
    if isinstance(space, IntervalSpace):
        return space
    members = space.measurable_sets
    algebra = SetSystem(space.carrier, frozenset(members))
    table = MeasureTable(algebra, {a: space.outer(a) for a in members}, Level.LEBESGUE)
    return MeasurableSpace(algebra, table)


# --- regularity -------------------------------------------------------------


@dataclass(frozen=True)
class Layer:
    n: int
    outer: object  # B_n
    chain: tuple  # B_n1 ⊆ B_n2 ⊆ …, ring sets exhausting B_n
    bound: Fraction  # μ*(A) + 1/n


@dataclass(frozen=True)
class RegularCover:
    target: object
    layers: tuple[Layer, ...]
    intersection: object  # B = ⋂ B_n

    def verify(self, space) -> Report:
        """Check every clause of the regularity statement up to the built depth."""
        report = Report("regular-cover")
        mu = _measure_fn(space)
        a, b = self.target, self.intersection
        mu_a = outer_measure(space, a).value
        report.add("A ⊆ B", not (a & ~b), anchor="lebesgue.regularity")
        report.add("μA = μB", mu_a == mu(b), anchor="lebesgue.regularity",
                   values={"muA": fmt(mu_a), "muB": fmt(mu(b))})
        acc = None
        for layer in self.layers:
            acc = layer.outer if acc is None else acc & layer.outer
        report.add("B = ⋂ B_n", acc == b, anchor="lebesgue.regularity")
        for prev, cur in zip(self.layers, self.layers[1:]):
            if cur.outer & ~prev.outer:
                report.add("B_n decreasing", False, anchor="lebesgue.regularity", values={"n": str(cur.n)})
                break
        else:
            report.add("B_n decreasing", True, anchor="lebesgue.regularity")
        chains_ok = True
        bounds_ok = True
        ring_ok = True
        for layer in self.layers:
            union = None
            for lo, hi in zip(layer.chain, layer.chain[1:]):
                chains_ok &= not (lo & ~hi)
            for piece in layer.chain:
                union = piece if union is None else union | piece
                bounds_ok &= mu(piece) <= layer.bound
                ring_ok &= _in_ring(space, piece)
            chains_ok &= union == layer.outer
            bounds_ok &= layer.bound == mu_a + Fraction(1, layer.n)
        report.add("B_n = ⋃_k B_nk, increasing", chains_ok, anchor="lebesgue.regularity")
        report.add("B_nk in the generated ring", ring_ok, anchor="lebesgue.regularity")
        report.add("μB_nk ≤ μ*A + 1/n", bounds_ok, anchor="lebesgue.regularity")
        return report


def _measure_fn(space):
    if isinstance(space, IntervalSpace):
        return lambda a: as_union(a).length
    return space.outer


def _in_ring(space, a) -> bool:
    if isinstance(space, IntervalSpace):
        return isinstance(a, IntervalUnion)
    return a in space.ring.members


def regular_cover(space, target, depth: int) -> RegularCover:
    """Decreasing ring hulls ``B_n`` of a measurable set, each an increasing chain.

    ``C_n`` is a ring set containing the target with ``μ(C_n) ≤ μ*A + 1/n``;
    on a finite space the least-measure hull attains ``μ*A`` so every ``C_n`` is
    that hull.  ``B_n = C_1 ∩ … ∩ C_n`` and ``B_nk`` is the union of the first
    ``k`` pieces of an expansion of ``B_n``.
    """
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    if isinstance(space, IntervalSpace):
        target = as_union(target)
        mu_a = target.length
        hull = target
        pieces = [IntervalUnion([i]) for i in target.intervals]
    else:
        if not is_measurable(space, target).measurable:
            raise NotMeasurableError(f"{space.format(target)} is not Lebesgue measurable")
        mu_a = space.outer(target)
        hulls = [b for b in space.ring.ordered if is_subset(target, b)]
        hull = min(hulls, key=lambda b: (space.ring_measure(b), key(b)))
        pieces = [p for p in space.generated.witnesses[hull].pieces if p]
    layers = []
    current = None
    for n in range(1, depth + 1):
        c_n = hull
        current = c_n if current is None else current & c_n
        chain = []
        acc = space.empty
        for p in pieces:
            acc = acc | p
            chain.append(acc)
        if not chain:
            chain = [space.empty]
        layers.append(Layer(n, current, tuple(chain), mu_a + Fraction(1, n)))
    return RegularCover(target, tuple(layers), current)


# --- subadditivity ----------------------------------------------------------


def countable_subadditivity_check(space, target, covers: Sequence[Sequence]) -> Report:
    """``μ*(target) ≤ Σ μ*(A_n)`` for each supplied cover ``{A_n}`` of the target."""
    report = Report("countable-subadditivity")
    lhs = outer_measure(space, target).value
    for i, cover in enumerate(covers):
        union = space.empty
        for c in cover:
            union = union | c
        if target & ~union:
            raise PreconditionError(f"cover {i} does not cover the target")
        rhs = sum((outer_measure(space, c).value for c in cover), Fraction(0))
        report.add(
            f"cover {i}",
            lhs <= rhs,
            anchor="lebesgue.countable-subadditivity",
            values={"outer": fmt(lhs), "sum": fmt(rhs), "strict": str(lhs < rhs).lower()},
        )
    return report


def is_complete(space: MeasurableSpace) -> Report:
    """Every subset of a null member is a member (with measure zero)."""
    report = Report("completeness")
    for n in space.members():
        if space.mu(n) != 0:
            continue
        for s in space.carrier.subsets(n):
            if s not in space or space.mu(s) != 0:
                report.add("null subsets measurable", False, anchor="lebesgue.complete",
                           witness=f"{space.format(s)} ⊆ {space.format(n)}")
                return report
    report.add("null subsets measurable", True, anchor="lebesgue.complete")
    return report

