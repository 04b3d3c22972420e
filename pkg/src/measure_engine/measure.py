"""Measures on finite semirings and their extension to the generated ring."""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from .errors import MeasureNotAdditiveError, MissingValueError, NoUnitError, PreconditionError
from .report import Report, fmt
from .set_system import (
    GeneratedRing,
    SetSystem,
    atoms,
    find_expansion,
    generate_ring_from_semiring,
    is_subset,
    key,
)

log = logging.getLogger(__name__)


class Level(str, enum.Enum):
    SEMIRING = "semiring"
    RING = "ring"
    LEBESGUE = "lebesgue"


@dataclass(frozen=True, eq=False)
class MeasureTable:
    """Nonnegative rational value for every member of ``system``.

    Tables must be total: a member without a value raises
    :class:`MissingValueError`, and values on non-members are refused.
    """

    system: SetSystem
    values: Mapping[int, Fraction]
    level: Level = Level.SEMIRING

    def __post_init__(self):
        values = {m: Fraction(v) for m, v in self.values.items()}
        for m in self.system.ordered:
            if m not in values:
                raise MissingValueError(self.system.carrier.format(m))
        extra = set(values) - self.system.members
        if extra:
            raise PreconditionError(
                "values given for non-members: "
                + ", ".join(self.system.carrier.format(m) for m in sorted(extra, key=key))
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def from_sets(cls, system: SetSystem, pairs: Iterable, level: Level = Level.SEMIRING) -> MeasureTable:
        """Build from ``(points, value)`` pairs."""
        return cls(system, {system.carrier.mask(s): Fraction(v) for s, v in pairs}, level)

    @classmethod
    def from_weights(cls, system: SetSystem, weights: Mapping, level: Level = Level.SEMIRING) -> MeasureTable:
        """Measure of a member = sum of its point weights (points missing weigh 0)."""
        w = [Fraction(weights.get(p, 0)) for p in system.carrier.points]
        values = {m: sum((w[i] for i in range(len(w)) if m >> i & 1), Fraction(0)) for m in system.members}
        return cls(system, values, level)

    def __call__(self, mask: int) -> Fraction:
        try:
            return self.values[mask]
        except KeyError:
            raise PreconditionError(f"{self.system.carrier.format(mask)} is not in the measure's domain") from None

    @property
    def carrier(self):
        return self.system.carrier

    def restrict(self, system: SetSystem) -> MeasureTable:
        return MeasureTable(system, {m: self(m) for m in system.members}, Level.SEMIRING)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MeasureTable)
            and self.system == other.system
            and self.values == other.values
        )

    __hash__ = None


# --- check_measure ----------------------------------------------------------


@dataclass
class _CoverSums:
    """For each remainder mask, every distinct sum over its expansions, with one expansion each."""

    table: MeasureTable
    memo: dict[int, dict[Fraction, tuple[int, ...]]] = field(default_factory=dict)

    def __call__(self, rem: int) -> dict[Fraction, tuple[int, ...]]:
        if rem in self.memo:
            return self.memo[rem]
        if rem == 0:
            return {Fraction(0): ()}
        low = rem & -rem
        out: dict[Fraction, tuple[int, ...]] = {}
        for c in self.table.system.nonempty:
            if c & low and c & ~rem == 0:
                head = self.table(c)
                for s, exp in self(rem & ~c).items():
                    out.setdefault(head + s, (c,) + exp)
        self.memo[rem] = out
        return out


def check_measure(table: MeasureTable) -> Report:
    """Nonnegativity and additivity over every finite expansion of every member."""
    report = Report("check-measure")
    fmt_set = table.carrier.format
    sums = _CoverSums(table)
    for m in table.system.ordered:
        value = table(m)
        report.add(
            f"nonnegative {fmt_set(m)}",
            value >= 0,
            anchor="measure.nonnegative",
            values={"m": fmt(value)},
        )
        for total, expansion in sorted(sums(m).items()):
            if total != value:
                report.add(
                    f"additive {fmt_set(m)}",
                    False,
                    anchor="measure.additive",
                    values={"m": fmt(value), "sum": fmt(total)},
                    witness=" + ".join(fmt_set(p) for p in expansion) or "{}",
                )
    if not report.failures:
        report.add("additive on all expansions", True, anchor="measure.additive")
    return report


# --- extension --------------------------------------------------------------


def _cross_check(table: MeasureTable, first: tuple[int, ...], second: tuple[int, ...]) -> bool:
    return sum(map(table, first), Fraction(0)) == sum(map(table, second), Fraction(0))


def extend_measure(table: MeasureTable, generated: GeneratedRing | None = None) -> MeasureTable:
    """Unique extension of a semiring measure to the ring the semiring generates.

    The value on each ring member is the sum over its witness expansion.  The
    expansions found with the forward and reversed tie-break orders, when they
    differ from the witness, must give the same sum.
    """
    generated = generated or generate_ring_from_semiring(table.system)
    values = {}
    for r, exp in generated.witnesses.items():
        pieces = tuple(p for p in exp.pieces if p)
        values[r] = sum(map(table, pieces), Fraction(0))
        others = {
            frozenset(o)
            for o in (find_expansion(table.system, r, reverse=True), find_expansion(table.system, r))
            if o is not None and set(o) != set(pieces)
        }
        if not others:
            log.debug("single expansion of %s; cross-check skipped", table.carrier.format(r))
        for other in others:
            if not _cross_check(table, pieces, tuple(other)):
                raise MeasureNotAdditiveError(
                    f"measure not additive: expansions of {table.carrier.format(r)} disagree"
                )
    return MeasureTable(generated.ring, values, Level.RING)


# --- measurable spaces ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MeasurableSpace:
    """An algebra with unit together with a measure defined on all of it."""

    algebra: SetSystem
    measure: MeasureTable

    def __post_init__(self):
        if self.algebra.unit is None:
            raise NoUnitError()
        if self.measure.system.members != self.algebra.members:
            raise PreconditionError("measure is not defined on the whole algebra")

    @property
    def carrier(self):
        return self.algebra.carrier

    @property
    def unit(self) -> int:
        return self.algebra.unit

    empty = 0

    def mu(self, a: int) -> Fraction:
        return self.measure(a)

    def __contains__(self, a) -> bool:
        return isinstance(a, int) and a in self.algebra.members

    def members(self) -> tuple[int, ...]:
        return self.algebra.ordered

    def sort_key(self, a: int):
        return key(a)

    def format(self, a: int) -> str:
        return self.carrier.format(a)

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        return atoms(self.algebra)

    def __eq__(self, other) -> bool:
        return isinstance(other, MeasurableSpace) and self.measure == other.measure

    __hash__ = None


def ring_space(table: MeasureTable) -> MeasurableSpace:
    """The generated ring with the extended measure (needs a semiring with unit)."""
    if table.system.unit is None:
        raise NoUnitError()
    ext = extend_measure(table)
    return MeasurableSpace(ext.system, ext)


# --- order properties -------------------------------------------------------


def monotonicity_check(space: MeasurableSpace) -> Report:
    report = Report("monotonicity")
    members = space.members()
    bad = None
    for a in members:
        for b in members:
            if is_subset(a, b) and space.mu(a) > space.mu(b):
                bad = (a, b)
                break
        if bad:
            break
    report.add(
        "A ⊆ B implies μA ≤ μB",
        bad is None,
        anchor="measure.monotone",
        values={"pairs": str(len(members) ** 2)},
        witness=None if bad is None else f"{space.format(bad[0])} ⊆ {space.format(bad[1])}",
    )
    for a in members:
        for b in members:
            if is_subset(b, a):
                ok = space.mu(a & ~b) == space.mu(a) - space.mu(a & b)
                if not ok:
                    report.add("μ(A∖B) = μA − μ(A∩B)", False, anchor="measure.difference",
                               witness=f"{space.format(a)}, {space.format(b)}")
                    return report
    report.add("μ(A∖B) = μA − μ(A∩B)", True, anchor="measure.difference")
    return report


def subadditivity_check(space: MeasurableSpace, arity: int = 4, samples: int = 200, seed: int = 0) -> Report:
    """Sampled covers ``A ⊆ A_1 ∪ … ∪ A_k`` (k ≤ arity) satisfy ``μA ≤ Σ μA_i``."""
    rng = random.Random(seed)
    members = space.members()
    report = Report("subadditivity")
    for _ in range(samples):
        cover = [rng.choice(members) for _ in range(rng.randint(1, arity))]
        union = 0
        for c in cover:
            union |= c
        inside = [m for m in members if is_subset(m, union)]
        a = rng.choice(inside)
        total = sum(map(space.mu, cover), Fraction(0))
        if space.mu(a) > total:
            report.add("μA ≤ Σ μA_i", False, anchor="measure.subadditive",
                       witness=f"{space.format(a)} ⊆ " + " ∪ ".join(map(space.format, cover)))
            return report
    report.add("μA ≤ Σ μA_i", True, anchor="measure.subadditive", values={"covers": str(samples)})
    return report


# --- continuity -------------------------------------------------------------


@dataclass(frozen=True)
class NestedFamily:
    """Indexed nested family ``n ↦ A_n`` with a declared limit and rate.

    ``measure`` evaluates members; ``closed_form`` (optional) is the claimed
    value of ``μ(A_n)``; ``rate(n)`` bounds ``|μ(A_n) − limit_measure|``.
    ``limit`` is the limit set when it is representable.
    """

    member: Callable[[int], object]
    measure: Callable[[object], Fraction]
    direction: str
    limit_measure: Fraction
    rate: Callable[[int], Fraction]
    closed_form: Callable[[int], Fraction] | None = None
    limit: object | None = None
    in_algebra: Callable[[object], bool] | None = None


def continuity_check(family: NestedFamily, horizon: int) -> Report:
    """Nestedness, closed form, and a nonincreasing gap within the declared rate."""
    if family.direction not in ("decreasing", "increasing"):
        raise PreconditionError("direction must be 'decreasing' or 'increasing'")
    report = Report("continuity")
    previous_set = None
    previous_gap = None
    for n in range(1, horizon + 1):
        a = family.member(n)
        if family.in_algebra is not None and not family.in_algebra(a):
            raise PreconditionError(f"family member {n} lies outside the algebra")
        value = family.measure(a)
        gap = abs(value - Fraction(family.limit_measure))
        values = {"n": str(n), "mu": fmt(value), "gap": fmt(gap), "rate": fmt(family.rate(n))}
        ok = gap <= family.rate(n)
        if previous_gap is not None:
            ok = ok and gap <= previous_gap
        if previous_set is not None:
            inner, outer = (a, previous_set) if family.direction == "decreasing" else (previous_set, a)
            ok = ok and not (inner & ~outer)
        if family.closed_form is not None:
            ok = ok and value == family.closed_form(n)
        if family.limit is not None:
            inner, outer = (family.limit, a) if family.direction == "decreasing" else (a, family.limit)
            ok = ok and not (inner & ~outer)
        report.add(f"member {n}", ok, anchor="measure.continuity", values=values)
        previous_set, previous_gap = a, gap
    return report


def dyadic_decreasing() -> NestedFamily:
    """``A_n = [0, 2^-n)`` shrinking to the empty set."""
    from .interval import EMPTY_UNION, IntervalUnion, length

    return NestedFamily(
        member=lambda n: IntervalUnion.of((0, Fraction(1, 2**n))),
        measure=length,
        direction="decreasing",
        limit_measure=Fraction(0),
        rate=lambda n: Fraction(1, 2**n),
        closed_form=lambda n: Fraction(1, 2**n),
        limit=EMPTY_UNION,
    )


def dyadic_increasing() -> NestedFamily:
    """``A_n = [2^-n, 1)`` growing to ``(0, 1)``, whose measure is 1."""
    from .interval import IntervalUnion, length

    return NestedFamily(
        member=lambda n: IntervalUnion.of((Fraction(1, 2**n), 1)),
        measure=length,
        direction="increasing",
        limit_measure=Fraction(1),
        rate=lambda n: Fraction(1, 2**n),
        closed_form=lambda n: 1 - Fraction(1, 2**n),
    )


def constant_family(a, measure: Callable, direction: str = "decreasing") -> NestedFamily:
    value = measure(a)
    return NestedFamily(
        member=lambda n: a,
        measure=measure,
        direction=direction,
        limit_measure=value,
        rate=lambda n: Fraction(0),
        closed_form=lambda n: value,
        limit=a,
    )

