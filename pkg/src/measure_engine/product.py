"""Cartesian products of finite semirings and measures, and sections.

The pair carrier lists ``(x1, x2)`` with ``x1`` varying slowest, so the pair of
left index ``i`` and right index ``j`` sits at bit ``i * n2 + j``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import NotASemiringError, PreconditionError
from .measure import MeasurableSpace, MeasureTable, extend_measure
from .report import Report, fmt
from .set_system import Carrier, GeneratedRing, SetSystem, bits, generate_ring_from_semiring, is_semiring


@dataclass(frozen=True, eq=False)
class ProductSystem:
    left: SetSystem
    right: SetSystem
    carrier: Carrier
    semiring: SetSystem
    factors: dict[int, tuple[int, int]] = field(repr=False)  # nonempty rectangle -> (A1, A2)

    @property
    def n_left(self) -> int:
        return len(self.left.carrier)

    @property
    def n_right(self) -> int:
        return len(self.right.carrier)

    def rect(self, a1: int, a2: int) -> int:
        return rectangle(a1, a2, self.n_right)

    def section(self, a: int, side: str, point) -> int:
        if side == "left":
            i = self.left.carrier.index(point)
            return (a >> (i * self.n_right)) & ((1 << self.n_right) - 1)
        if side == "right":
            j = self.right.carrier.index(point)
            out = 0
            for i in range(self.n_left):
                if a >> (i * self.n_right + j) & 1:
                    out |= 1 << i
            return out
        raise PreconditionError("side must be 'left' or 'right'")

    @cached_property
    def generated(self) -> GeneratedRing:
        return generate_ring_from_semiring(self.semiring)


def rectangle(a1: int, a2: int, n_right: int) -> int:
    out = 0
    for i in bits(a1):
        out |= a2 << (i * n_right)
    return out


def product_system(s1: SetSystem, s2: SetSystem) -> ProductSystem:
    """All rectangles ``A1 × A2`` with ``A1 ∈ s1`` and ``A2 ∈ s2``."""
    if not is_semiring(s1) or not is_semiring(s2):
        raise NotASemiringError("both factors must be semirings")
    carrier = Carrier(tuple((p, q) for p in s1.carrier.points for q in s2.carrier.points))
    n2 = len(s2.carrier)
    factors = {}
    members = {0}
    for a1 in s1.ordered:
        for a2 in s2.ordered:
            r = rectangle(a1, a2, n2)
            members.add(r)
            if r:
                factors[r] = (a1, a2)
    return ProductSystem(s1, s2, carrier, SetSystem(carrier, frozenset(members)), factors)


@dataclass(frozen=True, eq=False)
class ProductSpace:
    system: ProductSystem
    left: MeasureTable
    right: MeasureTable
    table: MeasureTable  # product measure on the rectangle semiring

    @property
    def semiring(self) -> SetSystem:
        return self.system.semiring

    @property
    def carrier(self) -> Carrier:
        return self.system.carrier

    @cached_property
    def left_ring(self) -> MeasureTable:
        return extend_measure(self.left)

    @cached_property
    def right_ring(self) -> MeasureTable:
        return extend_measure(self.right)

    @cached_property
    def ring_measure(self) -> MeasureTable:
        return extend_measure(self.table, self.system.generated)

    @property
    def ring(self) -> SetSystem:
        return self.system.generated.ring

    def ring_space(self) -> MeasurableSpace:
        return MeasurableSpace(self.ring, self.ring_measure)

    def left_space(self) -> MeasurableSpace:
        return MeasurableSpace(self.left_ring.system, self.left_ring)

    def right_space(self) -> MeasurableSpace:
        return MeasurableSpace(self.right_ring.system, self.right_ring)


def product_measure(m1: MeasureTable, m2: MeasureTable) -> ProductSpace:
    """``μ(A1 × A2) = μ1(A1) · μ2(A2)`` on the rectangle semiring."""
    system = product_system(m1.system, m2.system)
    values = {0: Fraction(0)}
    for r, (a1, a2) in system.factors.items():
        values[r] = m1(a1) * m2(a2)
    return ProductSpace(system, m1, m2, MeasureTable(system.semiring, values))


@dataclass(frozen=True)
class Section:
    side: str
    point: object
    subset: int


def section(space: ProductSpace | ProductSystem, a: int, side: str, point) -> Section:
    """The slice of ``a`` at ``point``: fixing a left point yields a right subset and vice versa."""
    system = space.system if isinstance(space, ProductSpace) else space
    return Section(side, point, system.section(a, side, point))


def _iterated(space: ProductSpace, a: int, outer_side: str) -> Fraction:
    system = space.system
    if outer_side == "left":
        outer_carrier, outer_ring, inner_ring = system.left.carrier, space.left_ring, space.right_ring
    else:
        outer_carrier, outer_ring, inner_ring = system.right.carrier, space.right_ring, space.left_ring
    # x ↦ μ(A_x) is constant on the points sharing a section; each such level set is a ring member
    levels: dict[int, int] = defaultdict(int)
    for idx, point in enumerate(outer_carrier.points):
        s = system.section(a, outer_side, point)
        if s:
            levels[s] |= 1 << idx
    total = Fraction(0)
    for s, level in levels.items():
        total += outer_ring(level) * inner_ring(s)
    return total


def measure_via_sections(space: ProductSpace, a: int, order: str = "left_first") -> Fraction:
    """``μ(A) = ∫ μ2(A_x1) dμ1`` (``left_first``) or ``∫ μ1(A^x2) dμ2`` (``right_first``)."""
    if a not in space.ring.members:
        raise PreconditionError("set is not in the generated product ring")
    if order == "left_first":
        return _iterated(space, a, "left")
    if order == "right_first":
        return _iterated(space, a, "right")
    raise PreconditionError("order must be 'left_first' or 'right_first'")


def check_sections(space: ProductSpace, members=None) -> Report:
    """Direct product-ring measure against both iterated section integrals."""
    report = Report("sections")
    members = space.ring.ordered if members is None else members
    bad = None
    for a in members:
        direct = space.ring_measure(a)
        left = measure_via_sections(space, a, "left_first")
        right = measure_via_sections(space, a, "right_first")
        if not direct == left == right:
            bad = (a, direct, left, right)
            break
    if bad is None:
        report.add("direct = left-iterated = right-iterated", True, anchor="product.sections",
                   values={"members": str(len(members))})
    else:
        a, direct, left, right = bad
        report.add("direct = left-iterated = right-iterated", False, anchor="product.sections",
                   values={"direct": fmt(direct), "left": fmt(left), "right": fmt(right)},
                   witness=space.carrier.format(a))
    return report


def transpose(space: ProductSpace) -> ProductSpace:
    return product_measure(space.right, space.left)


def swap_mask(a: int, n_left: int, n_right: int) -> int:
    """Image of a product subset under ``(x1, x2) ↦ (x2, x1)``."""
    out = 0
    for b in bits(a):
        i, j = divmod(b, n_right)
        out |= 1 << (j * n_left + i)
    return out


def flatten_point(point) -> tuple:
    """``((a, b), c)`` and ``(a, (b, c))`` both become ``(a, b, c)``."""
    if isinstance(point, tuple) and len(point) == 2:
        return flatten_point(point[0]) + flatten_point(point[1])
    return (point,)


def power_measure(tables: list[MeasureTable]) -> ProductSpace:
    """Left-nested product ``((m1 × m2) × m3) × …`` of at least two measures."""
    if len(tables) < 2:
        raise PreconditionError("need at least two factors")
    space = product_measure(tables[0], tables[1])
    for t in tables[2:]:
        space = product_measure(space.table, t)
    return space
