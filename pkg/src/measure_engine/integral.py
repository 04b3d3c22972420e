"""Simple maps into Ω-groups and their integrals.

A simple map is a finite partition of the unit ``X`` of a measurable space
into measurable pieces ``F_n``, each carrying a value ``f_n`` in an Ω-group.
Its integral over a measurable ``Y`` is ``Σ μ(F_n ∩ Y) · f_n``.  Ranges are
finite, so every series is a finite sum and normal convergence is automatic.

The theorem checks below return :class:`~measure_engine.report.Report`
objects and compare exact rationals throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import NotMeasurableError, PreconditionError
from .interval import Interval, IntervalSpace, IntervalUnion
from .measure import MeasurableSpace
from .omega import GROUPS, OmegaGroup
from .report import Report, fmt
from .set_system import common_refinement

SCALARS = GROUPS["ratscalar"]


@dataclass(frozen=True, eq=False)
class SimpleMap:
    space: MeasurableSpace | IntervalSpace
    group: OmegaGroup
    pieces: tuple[tuple[object, object], ...]
    canonical: bool = False

    def __post_init__(self):
        pieces = tuple((s, v) for s, v in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        space = self.space
        acc = space.empty
        for s, _ in pieces:
            if s not in space:
                raise NotMeasurableError(f"piece {space.format(s)} is not measurable")
            if s & acc:
                raise PreconditionError(f"pieces overlap on {space.format(s & acc)}")
            acc = acc | s
        if acc != space.unit:
            raise PreconditionError(f"pieces leave a gap: {space.format(space.unit & ~acc)}")

    @classmethod
    def constant(cls, space, group: OmegaGroup, value) -> SimpleMap:
        return cls(space, group, ((space.unit, value),))

    @classmethod
    def from_points(cls, space: MeasurableSpace, group: OmegaGroup, values: Mapping) -> SimpleMap:
        """Pointwise definition on a finite space; points of the unit left out map to zero."""
        levels: dict = {}
        carrier = space.carrier
        for i, p in enumerate(carrier.points):
            if space.unit >> i & 1:
                v = values.get(p, group.zero)
                levels[v] = levels.get(v, 0) | (1 << i)
        return cls(space, group, tuple((s, v) for v, s in levels.items()))

    def value_at(self, x):
        """Value at a carrier point (finite spaces) or at a rational in [0, 1)."""
        if isinstance(self.space, IntervalSpace):
            for s, v in self.pieces:
                if x in s:
                    return v
        else:
            bit = 1 << self.space.carrier.index(x)
            for s, v in self.pieces:
                if s & bit:
                    return v
        raise PreconditionError(f"{x!r} is outside the unit")

    def format(self) -> str:
        return "; ".join(f"{self.space.format(s)} -> {self.group.format(v)}" for s, v in self.pieces)


@dataclass(frozen=True)
class IntegralValue:
    value: object
    norm_integral: Fraction


def canonicalize(f: SimpleMap) -> SimpleMap:
    """Merge pieces sharing a value, drop empty pieces, order pieces by set."""
    merged: dict = {}
    order = []
    for s, v in f.pieces:
        if not s:
            continue
        if v in merged:
            merged[v] = merged[v] | s
        else:
            merged[v] = s
            order.append(v)
    pieces = sorted(((merged[v], v) for v in order), key=lambda sv: f.space.sort_key(sv[0]))
    return SimpleMap(f.space, f.group, tuple(pieces), canonical=True)


def refine(space, maps: Sequence[SimpleMap]) -> list[tuple[object, list]]:
    """Common refinement of several partitions: pieces with each map's value there."""
    for m in maps:
        if m.space is not space and m.space != space:
            raise PreconditionError("maps live on different spaces")
    if not maps:
        return [(space.unit, [])]
    if isinstance(space, IntervalSpace):
        cells = [(space.unit, [])]
        for m in maps:
            cells = [(c & s, vals + [v]) for c, vals in cells for s, v in m.pieces if c & s]
        return cells
    sets = [s for m in maps for s, _ in m.pieces]
    refinement = common_refinement(space.algebra, sets)
    owner = {}
    offset = 0
    for k, m in enumerate(maps):
        for j, (_, v) in enumerate(m.pieces):
            for p in refinement.membership[offset + j]:
                owner[(k, p)] = v
        offset += len(m.pieces)
    return [(piece, [owner[(k, p)] for k in range(len(maps))]) for p, piece in enumerate(refinement.pieces)]


def combine(fn: Callable, maps: Sequence[SimpleMap], group: OmegaGroup | None = None) -> SimpleMap:
    """Pointwise ``fn(f1(x), …, fk(x))`` as a canonical simple map."""
    space = maps[0].space
    group = group or maps[0].group
    cells = refine(space, maps)
    return canonicalize(SimpleMap(space, group, tuple((s, fn(*vals)) for s, vals in cells)))


def add(f: SimpleMap, g: SimpleMap) -> SimpleMap:
    return combine(f.group.add, [f, g])


def omega(op, maps: Sequence[SimpleMap]) -> SimpleMap:
    if len(maps) != op.arity:
        raise PreconditionError(f"operation {op.name} takes {op.arity} maps")
    return combine(op.apply, maps)


def norm_map(f: SimpleMap) -> SimpleMap:
    """``x ↦ ‖f(x)‖`` as a rational-valued simple map."""
    return canonicalize(SimpleMap(f.space, SCALARS, tuple((s, f.group.norm(v)) for s, v in f.pieces)))


def _check_over(space, over):
    if over is None:
        return space.unit
    if over not in space:
        raise NotMeasurableError(f"{space.format(over)} is not measurable")
    return over


def integrate(f: SimpleMap, over=None) -> IntegralValue:
    """``Σ μ(F_n ∩ Y) · f_n`` together with ``∫_Y ‖f‖``."""
    space, g = f.space, f.group
    y = _check_over(space, over)
    value = g.zero
    norm_total = Fraction(0)
    for s, v in f.pieces:
        w = space.mu(s & y)
        value = g.add(value, g.scalar(w, v))
        norm_total += w * g.norm(v)
    return IntegralValue(value, norm_total)


def level_set(f: SimpleMap, predicate: Callable) -> object:
    acc = f.space.empty
    for s, v in f.pieces:
        if predicate(v):
            acc = acc | s
    return acc


def support(f: SimpleMap):
    return level_set(f, lambda v: v != f.group.zero)


def sup_norm(f: SimpleMap) -> Fraction:
    return max((f.group.norm(v) for s, v in f.pieces if s), default=Fraction(0))


# --- theorem checks ---------------------------------------------------------


def check_norm_bound(f: SimpleMap, over=None) -> Report:
    """``‖∫f‖ ≤ ∫‖f‖``."""
    r = integrate(f, over)
    report = Report("norm-bound")
    lhs = f.group.norm(r.value)
    report.add("‖∫f‖ ≤ ∫‖f‖", lhs <= r.norm_integral, anchor="integral.norm-bound",
               values={"lhs": fmt(lhs), "rhs": fmt(r.norm_integral)})
    return report


def check_additivity(f: SimpleMap, g: SimpleMap) -> Report:
    """``∫(f + g) = ∫f + ∫g``."""
    grp = f.group
    lhs = integrate(add(f, g)).value
    rhs = grp.add(integrate(f).value, integrate(g).value)
    report = Report("additivity")
    report.add("∫(f+g) = ∫f + ∫g", lhs == rhs, anchor="integral.additive",
               values={"lhs": grp.format(lhs), "rhs": grp.format(rhs)})
    return report


def check_omega_bound(op, maps: Sequence[SimpleMap]) -> Report:
    """``‖∫ω(f1, …, fn)‖ ≤ |ω| · ∫‖f1‖⋯‖fn‖``."""
    grp = maps[0].group
    lhs = grp.norm(integrate(omega(op, maps)).value)

    def norm_product(*vals):
        out = Fraction(1)
        for v in vals:
            out *= grp.norm(v)
        return out

    rhs = op.bound * integrate(combine(norm_product, maps, SCALARS)).value
    report = Report("omega-bound")
    report.add(f"‖∫{op.name}(f…)‖ ≤ |ω|∫‖f1‖⋯‖fn‖", lhs <= rhs, anchor="integral.omega-bound",
               values={"lhs": fmt(lhs), "rhs": fmt(rhs), "bound": fmt(op.bound)})
    return report


def check_scalar_morphism(a, g: SimpleMap, side: str = "left", op=None) -> Report:
    """``∫ a·g = a·∫g`` (left) or ``∫ g·a = (∫g)·a`` (right) for a fixed element ``a``."""
    grp = g.group
    op = op or grp.mul
    if side == "left":
        lhs = integrate(combine(lambda v: op.apply(a, v), [g])).value
        rhs = op.apply(a, integrate(g).value)
    elif side == "right":
        lhs = integrate(combine(lambda v: op.apply(v, a), [g])).value
        rhs = op.apply(integrate(g).value, a)
    else:
        raise PreconditionError("side must be 'left' or 'right'")
    report = Report("scalar-morphism")
    report.add(f"{side} morphism", lhs == rhs, anchor="integral.morphism",
               values={"lhs": grp.format(lhs), "rhs": grp.format(rhs)})
    return report


def sigma_additivity(f: SimpleMap, partition: Sequence) -> Report:
    """``∫_X f = Σ ∫_{X_i} f`` and the same for ``‖f‖`` over a measurable partition."""
    space, grp = f.space, f.group
    acc = space.empty
    for part in partition:
        _check_over(space, part)
        if part & acc:
            raise PreconditionError("partition blocks overlap")
        acc = acc | part
    if acc != space.unit:
        raise PreconditionError("partition does not exhaust the unit")
    whole = integrate(f)
    parts = [integrate(f, p) for p in partition]
    total = grp.sum(p.value for p in parts)
    norm_total = sum((p.norm_integral for p in parts), Fraction(0))
    report = Report("sigma-additivity")
    report.add("∫_X f = Σ ∫_Xi f", whole.value == total, anchor="integral.sigma-additive",
               values={"whole": grp.format(whole.value), "sum": grp.format(total), "blocks": str(len(partition))})
    report.add("∫_X ‖f‖ = Σ ∫_Xi ‖f‖", whole.norm_integral == norm_total, anchor="integral.sigma-additive",
               values={"whole": fmt(whole.norm_integral), "sum": fmt(norm_total)})
    return report


def chebyshev(f: SimpleMap, c) -> Report:
    """``μ{‖f‖ ≥ c} ≤ (1/c) ∫‖f‖``."""
    c = Fraction(c)
    if c <= 0:
        raise PreconditionError("c must be positive")
    level = level_set(f, lambda v: f.group.norm(v) >= c)
    lhs = f.space.mu(level)
    rhs = integrate(f).norm_integral / c
    report = Report("chebyshev")
    report.add("μ{‖f‖ ≥ c} ≤ ∫‖f‖ / c", lhs <= rhs, anchor="integral.chebyshev",
               values={"c": fmt(c), "lhs": fmt(lhs), "rhs": fmt(rhs)})
    return report


def zero_integral_null(f: SimpleMap) -> Report:
    """``∫‖f‖ = 0`` forces ``μ{f ≠ 0} = 0``; otherwise the support has positive measure."""
    norm_integral = integrate(f).norm_integral
    mu_support = f.space.mu(support(f))
    report = Report("zero-integral")
    if norm_integral == 0:
        report.add("∫‖f‖ = 0 ⇒ f = 0 a.e.", mu_support == 0, anchor="integral.zero-null",
                   values={"support": fmt(mu_support)})
    else:
        report.add("∫‖f‖ > 0 ⇒ μ(support) > 0", mu_support > 0, anchor="integral.zero-null",
                   values={"norm_integral": fmt(norm_integral), "support": fmt(mu_support)})
    return report


def ae_equal_integral(f: SimpleMap, g: SimpleMap) -> Report:
    """When ``f = g`` outside a null set their integrals agree; otherwise no claim is made."""
    grp = f.group
    differ = f.space.empty
    for s, (u, v) in refine(f.space, [f, g]):
        if u != v:
            differ = differ | s
    mu_differ = f.space.mu(differ)
    report = Report("ae-equal")
    if mu_differ == 0:
        lhs, rhs = integrate(f).value, integrate(g).value
        report.add("f = g a.e. ⇒ ∫f = ∫g", lhs == rhs, anchor="integral.ae-equal",
                   values={"lhs": grp.format(lhs), "rhs": grp.format(rhs)})
    else:
        report.add("f ≠ g on a set of positive measure; no claim", True, anchor="integral.ae-equal",
                   values={"mu": fmt(mu_differ)})
    return report


def boundedness(f: SimpleMap, over=None) -> Report:
    """``‖∫_Y f‖ ≤ M · μ(Y)`` with ``M`` the largest value norm."""
    y = _check_over(f.space, over)
    m = sup_norm(f)
    lhs = f.group.norm(integrate(f, y).value)
    rhs = m * f.space.mu(y)
    report = Report("boundedness")
    report.add("‖∫f‖ ≤ M μ(Y)", lhs <= rhs, anchor="integral.bounded",
               values={"lhs": fmt(lhs), "M": fmt(m), "rhs": fmt(rhs)})
    return report


@dataclass(frozen=True)
class Modulus:
    delta: Fraction
    vacuous: bool
    report: Report


def continuity_modulus(f: SimpleMap, epsilon) -> Modulus:
    """``δ = ε / (2·max(1, max ‖f_n‖))`` with a check that ``μ(E) < δ`` gives ``‖∫_E f‖ < ε``.

    Finite spaces are checked on every measurable set.  The check is vacuous
    (flagged) when every set of measure below ``δ`` is null.  Interval spaces
    are checked on the dyadic intervals of length just below ``δ``.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    delta = epsilon / (2 * max(Fraction(1), sup_norm(f)))
    space = f.space
    if isinstance(space, IntervalSpace):
        k = 1
        while Fraction(1, 2**k) >= delta:
            k += 1
        candidates = [IntervalUnion([Interval(Fraction(i, 2**k), Fraction(i + 1, 2**k))]) for i in range(2**k)][:1024]
    else:
        candidates = space.members()
    worst = Fraction(0)
    nonnull = 0
    witness = None
    for e in candidates:
        mu_e = space.mu(e)
        if mu_e >= delta:
            continue
        if mu_e > 0:
            nonnull += 1
        n = f.group.norm(integrate(f, e).value)
        if n > worst:
            worst = n
        if n >= epsilon and witness is None:
            witness = space.format(e)
    vacuous = nonnull == 0
    report = Report("continuity-modulus")
    report.add("μ(E) < δ ⇒ ‖∫_E f‖ < ε", witness is None, anchor="integral.normal-continuity",
               values={"epsilon": fmt(epsilon), "delta": fmt(delta), "worst": fmt(worst), "sets": str(nonnull)},
               witness=witness, flagged=vacuous)
    return Modulus(delta, vacuous, report)

