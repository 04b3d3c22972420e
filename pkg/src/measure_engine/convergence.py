"""Limit theorems run as truncation certificates.

Sequences of simple maps are given by a generator ``n ↦ f_n``, a declared
limit ``f`` and a tail bound ``n ↦ t_n``: a rational-valued simple map with
``‖f_i(x) − f(x)‖ ≤ t_n(x)`` for every ``i ≥ n``.  No limit is ever taken;
every report states exact finite-horizon facts plus an explicit residual.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Mapping, Sequence

from .errors import PreconditionError
from .integral import SCALARS, SimpleMap, canonicalize, combine, integrate, level_set, refine
from .interval import INTERVAL_SPACE, IntervalUnion
from .measure import MeasurableSpace
from .omega import OmegaGroup
from .product import ProductSpace
from .report import Report, fmt
from .set_system import SetSystem, bits


@dataclass(frozen=True)
class MapSequence:
    space: object
    group: OmegaGroup
    generator: Callable[[int], SimpleMap]
    limit: SimpleMap
    tail_bound: Callable[[int], SimpleMap]
    # null set where convergence is not claimed; None when it is empty or, like
    # the single point 0 of [0, 1), has no half-open interval representation
    exceptional_set: object = None
    name: str = ""

    def __getitem__(self, n: int) -> SimpleMap:
        return self.generator(n)


def verify_tail_bound(seq: MapSequence, horizon: int) -> Report:
    """Spot-check ``‖f_i − f‖ ≤ t_n`` pointwise for ``n ≤ i ≤ horizon``."""
    report = Report("tail-bound")
    grp = seq.group
    for n in range(1, horizon + 1):
        t = seq.tail_bound(n)
        prev = seq.tail_bound(n - 1) if n > 1 else None
        for i in range(n, horizon + 1):
            cells = refine(seq.space, [seq[i], seq.limit, t])
            for s, (fi, f, b) in cells:
                if grp.norm(grp.sub(fi, f)) > b:
                    report.add("‖f_i − f‖ ≤ t_n", False, anchor="convergence.tail",
                               values={"n": str(n), "i": str(i)}, witness=seq.space.format(s))
                    return report
        if prev is not None:
            for s, (b_prev, b) in refine(seq.space, [prev, t]):
                if b > b_prev:
                    report.add("t_n nonincreasing", False, anchor="convergence.tail",
                               values={"n": str(n)}, witness=seq.space.format(s))
                    return report
    report.add("‖f_i − f‖ ≤ t_n, t_n nonincreasing", True, anchor="convergence.tail",
               values={"horizon": str(horizon)})
    return report


# --- Egorov -----------------------------------------------------------------


@dataclass
class EgorovResult:
    delta: Fraction
    e_delta: object
    schedule: dict[int, int]
    uniform_rate: dict[int, Fraction]
    report: Report = field(repr=False)


def egorov(seq: MapSequence, delta, depth: int, *, samples: int = 8, max_index: int = 4096) -> EgorovResult:
    """Build ``E_δ = ⋂_{m ≤ depth} E^m_{n0(m)}`` on which ``f_n → f`` uniformly.

    ``E^m_n = {x : t_n(x) < 1/m}`` is contained in the set where every
    ``‖f_i − f‖`` with ``i ≥ n`` stays below ``1/m``.  Off the null exceptional
    set the ``E^m_n`` increase to the whole unit, so ``n0(m)`` is the first
    index with ``μ(E ∖ E^m_n) < δ/2^m``.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    space, grp = seq.space, seq.group
    unit = space.unit
    mu_e = space.mu(unit)
    schedule: dict[int, int] = {}
    chosen = {}
    for m in range(1, depth + 1):
        threshold = delta / 2**m
        for n in range(1, max_index + 1):
            e_nm = level_set(seq.tail_bound(n), lambda b: b < Fraction(1, m))
            if mu_e - space.mu(e_nm) < threshold:
                schedule[m] = n
                chosen[m] = e_nm
                break
        else:
            raise PreconditionError(f"no index up to {max_index} meets δ/2^{m}; tail bound too slow")
    e_delta = unit
    for m in chosen:
        e_delta = e_delta & chosen[m]
    report = Report("egorov")
    mu_ed = space.mu(e_delta)
    report.add("μ(E_δ) ≥ μ(E) − δ", mu_ed >= mu_e - delta, anchor="convergence.egorov",
               values={"mu_E": fmt(mu_e), "mu_E_delta": fmt(mu_ed), "delta": fmt(delta)})
    uniform: dict[int, Fraction] = {}
    ok = True
    for m, n0 in schedule.items():
        worst = Fraction(0)
        for i in range(n0, n0 + samples):
            for s, (fi, f) in refine(space, [seq[i], seq.limit]):
                if s & e_delta:
                    worst = max(worst, grp.norm(grp.sub(fi, f)))
        uniform[m] = worst
        ok &= worst < Fraction(1, m)
    report.add("sup over E_δ of ‖f_i − f‖ < 1/m for i ≥ n0(m)", ok, anchor="convergence.egorov",
               values={f"n0({m})": str(n) for m, n in schedule.items()})
    return EgorovResult(delta, e_delta, schedule, uniform, report)


# --- dominated convergence and Beppo Levi -----------------------------------


@dataclass
class ConvergenceResult:
    integrals: dict[int, object]
    residuals: dict[int, Fraction]
    certificate: Fraction  # ∫ t_N, bounding every residual with index ≥ N
    report: Report = field(repr=False)


def _residuals(seq: MapSequence, horizon: int):
    grp = seq.group
    limit = integrate(seq.limit).value
    integrals, residuals = {}, {}
    for n in range(1, horizon + 1):
        integrals[n] = integrate(seq[n]).value
        residuals[n] = grp.norm(grp.sub(integrals[n], limit))
    return limit, integrals, residuals


def dominated_convergence(seq: MapSequence, dominating: SimpleMap, horizon: int, tol) -> ConvergenceResult:
    """``‖f_n‖ ≤ g`` for sampled ``n`` and ``‖∫f_n − ∫f‖ ≤ ∫t_N ≤ tol`` for ``n ≥ N``."""
    tol = Fraction(tol)
    grp = seq.group
    report = Report("dominated-convergence")
    for n in list(range(1, horizon + 1)) + [None]:
        f = seq.limit if n is None else seq[n]
        for s, (v, bound) in refine(seq.space, [f, dominating]):
            if grp.norm(v) > bound:
                report.add("‖f_n‖ ≤ g", False, anchor="convergence.dominated",
                           values={"n": "limit" if n is None else str(n)}, witness=seq.space.format(s))
                return ConvergenceResult({}, {}, Fraction(0), report)
    report.add("‖f_n‖ ≤ g", True, anchor="convergence.dominated", values={"horizon": str(horizon)})
    report.add("g integrable", True, anchor="convergence.dominated",
               values={"int_g": fmt(integrate(dominating).value)})
    limit, integrals, residuals = _residuals(seq, horizon)
    within = all(residuals[n] <= integrate(seq.tail_bound(n)).value for n in residuals)
    report.add("‖∫f_n − ∫f‖ ≤ ∫t_n", within, anchor="convergence.dominated")
    certificate = integrate(seq.tail_bound(horizon)).value
    report.add("∫t_N ≤ tol", certificate <= tol, anchor="convergence.dominated",
               values={"N": str(horizon), "certificate": fmt(certificate), "tol": fmt(tol),
                       "residual_N": fmt(residuals[horizon])})
    return ConvergenceResult(integrals, residuals, certificate, report)


def beppo_levi(seq: MapSequence, bound, horizon: int, tol) -> ConvergenceResult:
    """Nondecreasing scalar ``f_n`` with ``∫f_n ≤ M``: integrals climb to ``∫f`` within ``∫t_N``."""
    bound, tol = Fraction(bound), Fraction(tol)
    report = Report("beppo-levi")
    for n in range(1, horizon):
        for s, (a, b) in refine(seq.space, [seq[n], seq[n + 1]]):
            if a > b:
                report.add("f_n ≤ f_(n+1)", False, anchor="convergence.beppo-levi",
                           values={"n": str(n)}, witness=seq.space.format(s))
                return ConvergenceResult({}, {}, Fraction(0), report)
    report.add("f_n ≤ f_(n+1)", True, anchor="convergence.beppo-levi", values={"horizon": str(horizon)})
    limit, integrals, residuals = _residuals(seq, horizon)
    values = [integrals[n] for n in range(1, horizon + 1)]
    report.add("∫f_n nondecreasing", all(a <= b for a, b in zip(values, values[1:])),
               anchor="convergence.beppo-levi")
    report.add("∫f_n ≤ M", all(v <= bound for v in values), anchor="convergence.beppo-levi",
               values={"M": fmt(bound)})
    certificate = integrate(seq.tail_bound(horizon)).value
    report.add("|∫f_N − ∫f| ≤ ∫t_N ≤ tol", residuals[horizon] <= certificate <= tol,
               anchor="convergence.beppo-levi",
               values={"int_f_N": fmt(values[-1]), "int_f": fmt(limit), "certificate": fmt(certificate),
                       "tol": fmt(tol)})
    return ConvergenceResult(integrals, residuals, certificate, report)


# --- sequence families ------------------------------------------------------


def _indicator(a: IntervalUnion, value=Fraction(1)) -> SimpleMap:
    pieces = [(a, value), (~a, Fraction(0))]
    return canonicalize(SimpleMap(INTERVAL_SPACE, SCALARS, tuple((s, v) for s, v in pieces if s)))


def dyadic_indicator(direction: str = "decreasing") -> MapSequence:
    """``1[0, 2^-n) → 0`` (decreasing) or ``1[2^-n, 1) → 1`` (increasing), on [0, 1).

    Both converge everywhere except at 0, a null set.
    """
    head = lambda n: IntervalUnion.of((0, Fraction(1, 2**n)))  # noqa: E731
    if direction == "decreasing":
        gen = lambda n: _indicator(head(n))  # noqa: E731
        limit = SimpleMap.constant(INTERVAL_SPACE, SCALARS, Fraction(0))
    elif direction == "increasing":
        gen = lambda n: _indicator(~head(n))  # noqa: E731
        limit = SimpleMap.constant(INTERVAL_SPACE, SCALARS, Fraction(1))
    else:
        raise PreconditionError("direction must be 'decreasing' or 'increasing'")
    return MapSequence(INTERVAL_SPACE, SCALARS, gen, limit, lambda n: _indicator(head(n)),
                       name=f"dyadic_indicator_{direction}")


def staircase(space: MeasurableSpace, heights: Mapping, plateaus: Mapping) -> MapSequence:
    """``f_n(x) = h_x · min(n, p_x) / p_x`` rising to ``h_x`` at step ``p_x``; needs ``h_x ≥ 0``."""
    points = [p for i, p in enumerate(space.carrier.points) if space.unit >> i & 1]
    h = {p: Fraction(heights.get(p, 0)) for p in points}
    steps = {p: int(plateaus.get(p, 1)) for p in points}
    if any(v < 0 for v in h.values()) or any(s < 1 for s in steps.values()):
        raise PreconditionError("staircase needs nonnegative heights and plateaus ≥ 1")

    def gen(n):
        return SimpleMap.from_points(space, SCALARS, {p: h[p] * min(n, steps[p]) / steps[p] for p in points})

    def tail(n):
        return SimpleMap.from_points(space, SCALARS, {p: h[p] * (1 - Fraction(min(n, steps[p]), steps[p])) for p in points})

    limit = SimpleMap.from_points(space, SCALARS, h)
    return MapSequence(space, SCALARS, gen, limit, tail, name="staircase")


def eventually_constant(limit: SimpleMap, before: SimpleMap, switch: int = 1) -> MapSequence:
    """``f_n = before`` for ``n < switch`` and ``f_n = limit`` afterwards."""
    grp = limit.group
    gap = combine(lambda a, b: grp.norm(grp.sub(a, b)), [before, limit], SCALARS)
    zero = SimpleMap.constant(limit.space, SCALARS, Fraction(0))
    return MapSequence(
        limit.space, grp,
        lambda n: before if n < switch else limit,
        limit,
        lambda n: gap if n < switch else zero,
        name="eventually_constant",
    )


def geometric(space: MeasurableSpace, rates: Mapping) -> MapSequence:
    """``f_n(x) = r_x^n → 0`` with per-point rates ``0 ≤ r_x < 1``."""
    points = [p for i, p in enumerate(space.carrier.points) if space.unit >> i & 1]
    r = {p: Fraction(rates.get(p, 0)) for p in points}
    if any(not 0 <= v < 1 for v in r.values()):
        raise PreconditionError("rates must lie in [0, 1)")
    gen = lambda n: SimpleMap.from_points(space, SCALARS, {p: r[p] ** n for p in points})  # noqa: E731
    limit = SimpleMap.constant(space, SCALARS, Fraction(0))
    return MapSequence(space, SCALARS, gen, limit, gen, name="geometric")


# --- Fubini -----------------------------------------------------------------


@dataclass(frozen=True)
class FubiniValues:
    direct: object
    left_first: object
    right_first: object


def _iterated_integral(product: ProductSpace, f: SimpleMap, b: int, outer_side: str):
    system = product.system
    grp = f.group
    if outer_side == "left":
        outer_carrier, outer_ring, inner_ring = system.left.carrier, product.left_ring, product.right_ring
    else:
        outer_carrier, outer_ring, inner_ring = system.right.carrier, product.right_ring, product.left_ring
    cut = [(s & b, v) for s, v in f.pieces]
    groups: dict[tuple[int, ...], int] = defaultdict(int)
    for idx, point in enumerate(outer_carrier.points):
        pattern = tuple(system.section(s, outer_side, point) for s, _ in cut)
        if any(pattern):
            groups[pattern] |= 1 << idx
    total = grp.zero
    for pattern, level in groups.items():
        inner = grp.sum(grp.scalar(inner_ring(sec), v) for sec, (_, v) in zip(pattern, cut))
        total = grp.add(total, grp.scalar(outer_ring(level), inner))
    return total


def fubini_values(product: ProductSpace, f: SimpleMap, b: int | None = None) -> FubiniValues:
    space = f.space
    b = space.unit if b is None else b
    if b not in space:
        raise PreconditionError("B is not measurable in the product space")
    return FubiniValues(
        integrate(f, b).value,
        _iterated_integral(product, f, b, "left"),
        _iterated_integral(product, f, b, "right"),
    )


def fubini_simple(product: ProductSpace, f: SimpleMap, b: int | None = None) -> Report:
    """``∫_B f = ∫_X1 ∫_{B_x1} f dμ2 dμ1 = ∫_X2 ∫_{B^x2} f dμ1 dμ2``, exactly."""
    vals = fubini_values(product, f, b)
    grp = f.group
    report = Report("fubini")
    report.add("direct = left-first = right-first",
               vals.direct == vals.left_first == vals.right_first, anchor="convergence.fubini",
               values={"direct": grp.format(vals.direct), "left_first": grp.format(vals.left_first),
                       "right_first": grp.format(vals.right_first)})
    return report


def fubini_uniform_limit(product: ProductSpace, truncations: Sequence[SimpleMap], residuals: Sequence,
                         b: int | None = None) -> Report:
    """Fubini for a uniform limit, through its simple truncations.

    ``residuals[n]`` bounds ``sup ‖f_n − f‖``.  Each truncation must satisfy the
    three-way equality, and any two must agree within ``(r_n + r_m) · μ(B)``.
    """
    report = Report("fubini-uniform-limit")
    space = truncations[0].space
    b = space.unit if b is None else b
    mu_b = space.mu(b)
    grp = truncations[0].group
    vals = []
    for n, f in enumerate(truncations):
        v = fubini_values(product, f, b)
        vals.append(v)
        report.add(f"truncation {n}", v.direct == v.left_first == v.right_first, anchor="convergence.fubini")
    for (i, vi), (j, vj) in ((p, q) for p in enumerate(vals) for q in enumerate(vals) if p[0] < q[0]):
        allowed = (Fraction(residuals[i]) + Fraction(residuals[j])) * mu_b
        for name in ("direct", "left_first", "right_first"):
            gap = grp.norm(grp.sub(getattr(vi, name), getattr(vj, name)))
            if gap > allowed:
                report.add("Cauchy within residual", False, anchor="convergence.fubini",
                           values={"i": str(i), "j": str(j), "gap": fmt(gap), "allowed": fmt(allowed)})
                return report
    report.add("Cauchy within residual", True, anchor="convergence.fubini")
    return report


# --- measurability of maps --------------------------------------------------


@dataclass(frozen=True)
class FiniteMap:
    """Map between finite carriers: ``image[i]`` is the codomain index of domain point ``i``."""

    domain: SetSystem
    codomain: SetSystem
    image: tuple[int, ...]

    def preimage(self, mask: int) -> int:
        out = 0
        for i, j in enumerate(self.image):
            if mask >> j & 1:
                out |= 1 << i
        return out

    def is_measurable(self) -> bool:
        return all(self.preimage(b) in self.domain.members for b in self.codomain.members)

    def then(self, other: FiniteMap) -> FiniteMap:
        if other.domain.carrier != self.codomain.carrier:
            raise PreconditionError("maps do not compose")
        return FiniteMap(self.domain, other.codomain, tuple(other.image[j] for j in self.image))


def identity_map(system: SetSystem) -> FiniteMap:
    return FiniteMap(system, system, tuple(range(len(system.carrier))))


def _level_sets(space: MeasurableSpace, values: Mapping) -> dict:
    levels: dict = defaultdict(int)
    for i in bits(space.unit):
        levels[values[space.carrier.points[i]]] |= 1 << i
    return dict(levels)


def measurable_by_levels(space: MeasurableSpace, values: Mapping) -> bool:
    """A finite-range map is measurable iff each of its level sets is."""
    return all(s in space for s in _level_sets(space, values).values())


def measurable_by_preimages(space: MeasurableSpace, values: Mapping) -> bool:
    """Preimage of every set of values (discrete codomain) lies in the algebra."""
    levels = list(_level_sets(space, values).values())
    for choice in cartesian((False, True), repeat=len(levels)):
        pre = 0
        for take, s in zip(choice, levels):
            if take:
                pre |= s
        if pre not in space:
            return False
    return True


def measurability_closure_checks(space: MeasurableSpace, maps: Sequence[Mapping], group: OmegaGroup = SCALARS) -> Report:
    """Criterion agreement and closure under composition, +, ω, limits and gluing."""
    report = Report("measurability")
    report.add("identity measurable", identity_map(space.algebra).is_measurable(), anchor="maps.composition")
    verdicts = []
    for k, values in enumerate(maps):
        by_levels = measurable_by_levels(space, values)
        by_pre = measurable_by_preimages(space, values)
        verdicts.append(by_levels)
        report.add(f"map {k}: level-set criterion = preimage enumeration", by_levels == by_pre,
                   anchor="maps.criterion", values={"measurable": str(by_levels).lower()})
    good = [m for m, ok in zip(maps, verdicts) if ok]
    points = [space.carrier.points[i] for i in bits(space.unit)]
    for i, f in enumerate(good):
        composed = {p: group.norm(f[p]) for p in points}
        report.add(f"norm ∘ map {i} measurable", measurable_by_levels(space, composed), anchor="maps.composition")
        for j, g in enumerate(good):
            if j < i:
                continue
            total = {p: group.add(f[p], g[p]) for p in points}
            report.add(f"map {i} + map {j} measurable", measurable_by_levels(space, total), anchor="maps.sum")
            for op in group.operations:
                prod = {p: op.apply(f[p], g[p]) for p in points}
                report.add(f"{op.name}(map {i}, map {j}) measurable", measurable_by_levels(space, prod),
                           anchor="maps.omega")
    # gluing over a measurable split X = X1 + X2
    for x1 in space.members():
        x2 = space.unit & ~x1
        for k, values in enumerate(maps):
            levels = _level_sets(space, values)
            on_parts = all((s & x1) in space and (s & x2) in space for s in levels.values())
            if on_parts and not measurable_by_levels(space, values):
                report.add(f"gluing map {k}", False, anchor="maps.gluing", witness=space.format(x1))
                return report
    report.add("measurable on X1 and X2 ⇒ measurable on X", True, anchor="maps.gluing")
    return report


def limit_measurability(seq: MapSequence, horizon: int) -> Report:
    """Terms measurable (simple maps always are) and the declared limit measurable."""
    report = Report("limit-measurability")
    space = seq.space
    ok = all(all(s in space for s, _ in seq[n].pieces) for n in range(1, horizon + 1))
    ok &= all(s in space for s, _ in seq.limit.pieces)
    report.add("limit of measurable maps measurable", ok, anchor="maps.limit")
    return report
