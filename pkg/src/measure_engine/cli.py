"""Command-line front door: ``measure-engine <command> <definition.json> [args]``.

Exit codes: 0 pass, 1 a check failed, 2 input error, 3 flagged (vacuous or
attainment caveats).  Reports are byte-identical for identical inputs unless
``--timestamps`` is given.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import convergence as conv
from . import integral as integ
from .errors import MeasureEngineError, MeasureNotAdditiveError
from .interval import INTERVAL_SPACE, IntervalUnion, parse_interval_union, semiring_axioms
from .lebesgue import PremeasureSpace, is_complete, is_measurable, lebesgue_extension, outer_measure
from .measure import MeasurableSpace, MeasureTable, check_measure, extend_measure, monotonicity_check, subadditivity_check
from .omega import GROUPS, law_suite
from .product import ProductSpace, check_sections, measure_via_sections, product_measure
from .report import Report, fmt
from .sampling import random_measurable, random_simple_map
from .schema import Definition, SchemaError, load
from .set_system import (
    Carrier,
    Kind,
    SetSystem,
    bits,
    classify,
    generate_ring,
    generate_ring_from_semiring,
    is_semiring,
    key,
)

EXIT = {"pass": 0, "fail": 1, "flagged": 3}
INPUT_ERROR = 2
THEOREM_GROUPS = ("measure", "lebesgue", "integral", "omega", "convergence")


class InputError(MeasureEngineError):
    pass


# --- loading ----------------------------------------------------------------


@dataclass
class Loaded:
    """A definition turned into engine objects, built lazily."""

    d: Definition

    @cached_property
    def carrier(self) -> Carrier:
        return Carrier(self.d.carrier)

    def mask(self, points) -> int:
        return self.carrier.mask(points)

    @cached_property
    def system(self) -> SetSystem:
        return SetSystem(self.carrier, frozenset(self.mask(s) for s in self.d.system))

    @cached_property
    def table(self) -> MeasureTable:
        return MeasureTable(self.system, {self.mask(s): v for s, v in self.d.measure})

    @cached_property
    def premeasure(self) -> PremeasureSpace:
        return PremeasureSpace(self.table)

    @cached_property
    def space(self):
        """The Lebesgue extension: the space that maps and sequences live on."""
        if self.d.is_interval:
            return INTERVAL_SPACE
        return lebesgue_extension(self.premeasure)

    @property
    def group(self):
        return GROUPS[self.d.omega_group]

    def parse_set(self, text: str):
        if self.d.is_interval:
            return parse_interval_union(text)
        return self.mask(_split_points(text))

    def is_product_map(self, name: str) -> bool:
        return any(":" in p for s, _ in self.map_pieces(name) for p in s)

    def map_pieces(self, name: str):
        if name not in self.d.maps:
            raise InputError(f"unknown map {name!r}; defined maps: {', '.join(sorted(self.d.maps)) or 'none'}")
        return self.d.maps[name]

    def build_map(self, name: str, space=None, to_mask=None) -> integ.SimpleMap:
        """Pieces as given; whatever they leave uncovered maps to zero."""
        space = space or self.space
        pieces = self.map_pieces(name)
        if self.d.is_interval:
            sets = [(s, v) for s, v in pieces]
        else:
            to_mask = to_mask or self.mask
            sets = [(to_mask(s), v) for s, v in pieces]
        covered = space.empty
        for s, _ in sets:
            covered = covered | s
        gap = space.unit & ~covered
        if gap:
            sets.append((gap, self.group.zero))
        return integ.SimpleMap(space, self.group, tuple(sets))

    def build_sequence(self, name: str) -> conv.MapSequence:
        if name not in self.d.sequences:
            raise InputError(f"unknown sequence {name!r}")
        entry = self.d.sequences[name]
        if entry["kind"] == "dyadic_indicator":
            return conv.dyadic_indicator(entry["direction"])
        if entry["kind"] == "staircase":
            heights = {p: Fraction(v) for p, v in entry["heights"].items()}
            return conv.staircase(self.space, heights, entry["plateaus"])
        return conv.eventually_constant(self.build_map(entry["limit"]), self.build_map(entry["before"]), entry["switch"])


def _split_points(text: str) -> list[str]:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    return [p.strip() for p in body.split(",") if p.strip()]


@dataclass
class ProductLoaded:
    left: Loaded
    right: Loaded

    @cached_property
    def space(self) -> ProductSpace:
        if self.left.d.is_interval or self.right.d.is_interval:
            raise InputError("products need finite carriers on both sides")
        return product_measure(self.left.table, self.right.table)

    def point(self, name: str):
        if name.count(":") != 1:
            raise InputError(f"product point {name!r} must look like x1:x2")
        return tuple(name.split(":"))

    def mask(self, names) -> int:
        return self.space.carrier.mask(self.point(p) for p in names)

    def parse_set(self, text: str) -> int:
        return self.mask(_split_points(text))

    @cached_property
    def ring_space(self) -> MeasurableSpace:
        return self.space.ring_space()


# --- report rendering -------------------------------------------------------


def render_text(report: Report, header: dict) -> str:
    lines = [f"measure-engine {header['command']}", f"input sha256:{header['digest']}"]
    if "generated" in header:
        lines.append(f"generated: {header['generated']}")
    lines.append(f"verdict: {report.verdict}")
    for c in report.checks:
        anchor = f" ({c.anchor})" if c.anchor else ""
        lines.append(f"[{c.status}] {c.name}{anchor}")
        for k, v in c.values.items():
            lines.append(f"    {k} = {v}")
        if c.witness:
            lines.append(f"    witness: {c.witness}")
    return "\n".join(lines) + "\n"


def render_json(report: Report, header: dict) -> str:
    doc = dict(header)
    doc["verdict"] = report.verdict
    doc["checks"] = [
        {"name": c.name, "status": c.status, "anchor": c.anchor, "values": c.values, "witness": c.witness}
        for c in report.checks
    ]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def input_digest(command: str, args: list[str], definitions: list[Definition]) -> str:
    payload = {"command": command, "args": args, "definitions": [d.to_json() for d in definitions]}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


# --- commands ---------------------------------------------------------------


def cmd_classify(ld: Loaded, require: str | None = None) -> Report:
    report = Report("classify")
    if ld.d.is_interval:
        return _classify_intervals(ld, report)
    system = ld.system
    result = classify(system)
    values = {"class": result.kind.label}
    for kind in (Kind.SEMIRING, Kind.RING, Kind.ALGEBRA, Kind.SIGMA_ALGEBRA):
        values[kind.label] = "yes" if result.kind >= kind else "no"
    values["members"] = str(len(system.members))
    witness = result.witness.describe(system.carrier) if result.witness else None
    report.add("classification", True, anchor="set_system.classify", values=values, witness=witness)
    if require:
        wanted = _kind(require)
        met = classify(system, wanted)
        report.add(f"at least {wanted.label}", met.kind >= wanted, anchor="set_system.classify",
                   witness=met.witness.describe(system.carrier) if met.witness else None)
    return report


def _kind(label: str) -> Kind:
    for k in Kind:
        if k.label == label.replace("-", "_"):
            return k
    raise InputError(f"unknown class {label!r}")


def _classify_intervals(ld: Loaded, report: Report) -> Report:
    singles = [iv for s in ld.d.system for iv in s.intervals]
    failures = []
    for a in singles:
        for b in singles:
            failures.extend(semiring_axioms(a, b))
    report.add("classification", True, anchor="set_system.classify",
               values={"class": "semiring", "unit": "[0,1)", "ring": "no"},
               witness="[0,1/2) Δ [1/4,3/4) = [0,1/4)+[1/2,3/4) is not an interval")
    report.add("semiring axioms on listed intervals", not failures, anchor="interval.semiring",
               values={"intervals": str(len(singles))}, witness=str(failures[0]) if failures else None)
    return report


def cmd_generate_ring(ld: Loaded) -> Report:
    report = Report("generate-ring")
    if ld.d.is_interval:
        return _interval_ring(ld, report)
    system = ld.system
    if not is_semiring(system):
        report.add("input is a semiring", False, anchor="set_system.generate-ring",
                   witness=classify(system, Kind.SEMIRING).witness.describe(system.carrier))
        return report
    gen = generate_ring_from_semiring(system)
    closure = generate_ring(system)
    fmt_set = system.carrier.format
    values = {fmt_set(r): " + ".join(fmt_set(p) for p in gen.witnesses[r].pieces) or "{}" for r in gen.ring.ordered}
    report.add("disjoint unions of semiring members", True, anchor="set_system.generate-ring",
               values={"members": str(len(gen.ring.members)), **values})
    report.add("equals closure under ∩ and Δ", gen.ring.members == closure.members,
               anchor="set_system.generate-ring", values={"closure_members": str(len(closure.members))})
    report.add("result is a ring", classify(gen.ring).kind >= Kind.RING, anchor="set_system.classify")
    return report


def _interval_atoms(sets: list[IntervalUnion]) -> list[IntervalUnion]:
    points = sorted({e for s in sets for iv in s.intervals for e in (iv.lo, iv.hi)})
    groups: dict[tuple, list] = {}
    for lo, hi in zip(points, points[1:]):
        cell = IntervalUnion.of((lo, hi))
        sig = tuple(bool(cell & s) for s in sets)
        if any(sig):
            groups.setdefault(sig, []).append((lo, hi))
    return sorted((IntervalUnion.of(*pairs) for pairs in groups.values()), key=lambda u: u.sort_key())


def _interval_ring(ld: Loaded, report: Report) -> Report:
    sets = list(ld.d.system)
    atoms = _interval_atoms(sets)
    ok = True
    for a in sets:
        for b in sets:
            for c in (a & b, a ^ b):
                ok &= all(not (c & atom) or atom <= c for atom in atoms)
    report.add("finite unions of atoms", True, anchor="set_system.generate-ring",
               values={"atoms": " | ".join(str(a) for a in atoms) or "{}", "members": str(2 ** len(atoms))})
    report.add("∩ and Δ of listed sets are unions of atoms", ok, anchor="set_system.generate-ring")
    return report


def cmd_extend_measure(ld: Loaded) -> Report:
    report = Report("extend-measure")
    if ld.d.is_interval:
        values = {str(s): fmt(s.length) for s in ld.d.system}
        report.add("length on listed sets", True, anchor="measure.extend", values=values)
        ok = all(s.length == sum((iv.length for iv in s.intervals), Fraction(0)) for s in ld.d.system)
        report.add("length additive over interval pieces", ok, anchor="measure.additive")
        return report
    report.extend(check_measure(ld.table))
    if not report.passed:
        return report
    try:
        ext = extend_measure(ld.table)
    except MeasureNotAdditiveError as exc:
        report.add("expansions agree", False, anchor="measure.extend", witness=str(exc))
        return report
    fmt_set = ld.carrier.format
    report.add("extension to the generated ring", True, anchor="measure.extend",
               values={fmt_set(r): fmt(ext(r)) for r in ext.system.ordered})
    report.add("restriction to the semiring is the input", ext.restrict(ld.system) == ld.table,
               anchor="measure.extend")
    return report


def cmd_outer_measure(ld: Loaded, target_text: str) -> Report:
    report = Report("outer-measure")
    target = ld.parse_set(target_text)
    if ld.d.is_interval:
        res = outer_measure(INTERVAL_SPACE, target)
        report.add("outer measure", True, anchor="lebesgue.outer",
                   values={"set": str(target), "value": fmt(res.value),
                           "cover": " + ".join(str(i) for i in res.best_cover) or "{}"})
        return report
    res = outer_measure(ld.premeasure, target)
    fmt_set = ld.carrier.format
    report.add("outer measure", True, anchor="lebesgue.outer",
               values={"set": fmt_set(target), "value": fmt(res.value),
                       "cover": " + ".join(fmt_set(c) for c in res.best_cover) or "{}",
                       "attained": "yes" if res.attained else "no"},
               flagged=not res.attained)
    if target in ld.premeasure.ring.members:
        mu = ld.premeasure.ring_measure(target)
        report.add("μ* = μ on the generated ring", res.value == mu, anchor="lebesgue.outer",
                   values={"mu": fmt(mu)})
    return report


def cmd_measurable(ld: Loaded, target_text: str, epsilon: Fraction | None) -> Report:
    report = Report("measurable")
    target = ld.parse_set(target_text)
    space = INTERVAL_SPACE if ld.d.is_interval else ld.premeasure
    w = is_measurable(space, target, epsilon)
    values = {"set": space.format(target) if not ld.d.is_interval else str(target),
              "distance": fmt(w.distance),
              "closest_ring_set": str(w.best) if ld.d.is_interval else ld.carrier.format(w.best)}
    if epsilon is not None:
        values["epsilon"] = fmt(epsilon)
    report.add("Lebesgue measurable", w.measurable, anchor="lebesgue.measurable", values=values)
    return report


def _lebesgue_checks(ld: Loaded) -> Report:
    report = Report("lebesgue")
    if ld.d.is_interval:
        sets = list(ld.d.system) or [IntervalUnion.of((0, 1))]
        ok = all((a | b).length + (a & b).length == a.length + b.length for a in sets for b in sets)
        report.add("finite interval unions form an algebra with unit [0,1)", True, anchor="lebesgue.extension")
        report.add("length additive on listed sets", ok, anchor="lebesgue.additive")
        return report
    prem = ld.premeasure
    ext = lebesgue_extension(prem)
    kind = classify(ext.algebra).kind
    report.add("extension is an algebra", kind >= Kind.ALGEBRA, anchor="lebesgue.extension",
               values={"class": kind.label, "members": str(len(ext.algebra.members))})
    ring = prem.ring_measure
    report.add("μ* = μ on the generated ring", all(prem.outer(r) == ring(r) for r in ring.system.members),
               anchor="lebesgue.outer", values={"ring_members": str(len(ring.system.members))})
    atoms = ext.atoms
    additive = all(ext.mu(a) == sum((ext.mu(t) for t in atoms if t & a), Fraction(0)) for a in ext.members())
    report.add("additive over atoms", additive, anchor="lebesgue.additive")
    report.extend(is_complete(ext))
    report.extend(monotonicity_check(ext))
    return report


def cmd_lebesgue_extend(ld: Loaded) -> Report:
    report = _lebesgue_checks(ld)
    report.name = "lebesgue-extend"
    if not ld.d.is_interval:
        ext = ld.space
        if len(ext.algebra.members) <= 64:
            report.add("measurable sets", True, anchor="lebesgue.extension",
                       values={ext.format(a): fmt(ext.mu(a)) for a in ext.members()})
    return report


def cmd_product(ld: Loaded, right: Loaded) -> Report:
    report = Report("product")
    pl = ProductLoaded(ld, right)
    ps = pl.space
    system = ps.system
    report.add("rectangles form a semiring", is_semiring(system.semiring), anchor="product.semiring",
               values={"rectangles": str(len(system.factors)), "carrier": str(len(system.carrier))})
    ok = all(ps.ring_measure(r) == ps.left(a1) * ps.right(a2) for r, (a1, a2) in system.factors.items())
    report.add("μ(A1 × A2) = μ1(A1) μ2(A2) after extension", ok, anchor="product.measure",
               values={"ring_members": str(len(ps.ring.members)), "mu_unit": fmt(ps.ring_measure(ps.ring.unit))}
               if ps.ring.unit is not None else {"ring_members": str(len(ps.ring.members))})
    report.extend(check_sections(ps))
    return report


def cmd_sections(ld: Loaded, right: Loaded, target_text: str) -> Report:
    report = Report("sections")
    pl = ProductLoaded(ld, right)
    ps = pl.space
    a = pl.parse_set(target_text)
    if a not in ps.ring.members:
        raise InputError(f"{ps.carrier.format(a)} is not in the generated product ring")
    system = ps.system
    left_values = {}
    for x in system.left.carrier.points:
        s = system.section(a, "left", x)
        left_values[f"A_{x}"] = f"{right.carrier.format(s)} (μ2 = {fmt(ps.right_ring(s))})"
    right_values = {}
    for y in system.right.carrier.points:
        s = system.section(a, "right", y)
        right_values[f"A^{y}"] = f"{ld.carrier.format(s)} (μ1 = {fmt(ps.left_ring(s))})"
    report.add("sections over left points", True, anchor="product.sections", values=left_values)
    report.add("sections over right points", True, anchor="product.sections", values=right_values)
    direct = ps.ring_measure(a)
    lf = measure_via_sections(ps, a, "left_first")
    rf = measure_via_sections(ps, a, "right_first")
    report.add("direct = left-iterated = right-iterated", direct == lf == rf, anchor="product.sections",
               values={"direct": fmt(direct), "left_first": fmt(lf), "right_first": fmt(rf)})
    return report


def _plain_map(ld: Loaded, name: str) -> integ.SimpleMap:
    if not ld.d.is_interval and ld.is_product_map(name):
        raise InputError(f"map {name!r} lives on a product; use the fubini command")
    return ld.build_map(name)


def cmd_integrate(ld: Loaded, name: str, over_text: str | None) -> Report:
    report = Report("integrate")
    f = _plain_map(ld, name)
    over = ld.parse_set(over_text) if over_text is not None else None
    result = integ.integrate(f, over)
    values = {"value": f.group.format(result.value), "norm_integral": fmt(result.norm_integral)}
    if over is not None:
        values["over"] = f.space.format(over)
    report.add(f"integral of {name}", True, anchor="integral.simple", values=values)
    report.extend(integ.check_norm_bound(f, over))
    report.extend(integ.boundedness(f, over))
    return report


def _integral_suite(ld: Loaded, maps: list[integ.SimpleMap], samples: int, seed: int = 0) -> Report:
    import random

    rng = random.Random(seed)
    space, grp = ld.space, ld.group
    report = Report("integral")
    pool = list(maps) + [random_simple_map(rng, space, grp) for _ in range(samples)]
    checks: dict[str, list] = {}
    for i, f in enumerate(pool):
        g = pool[(i + 1) % len(pool)]
        y = random_measurable(rng, space)
        parts = [y, space.unit & ~y]
        a = grp.random(rng)
        subs = [
            integ.check_additivity(f, g),
            integ.check_norm_bound(f),
            integ.check_omega_bound(grp.mul, [f, g]),
            integ.check_scalar_morphism(a, f, "left"),
            integ.check_scalar_morphism(a, f, "right"),
            integ.sigma_additivity(f, [p for p in parts if p]),
            integ.chebyshev(f, max(integ.sup_norm(f), Fraction(1)) / 2),
            integ.zero_integral_null(f),
            integ.boundedness(f),
        ]
        for sub in subs:
            for c in sub.checks:
                checks.setdefault(c.anchor, []).append(c)
    for anchor, cs in checks.items():
        bad = next((c for c in cs if not c.passed), None)
        report.add(f"{anchor} on {len(cs)} instances", bad is None, anchor=anchor,
                   values=bad.values if bad else {}, witness=bad.name if bad else None)
    return report


def cmd_laws(ld: Loaded, which: str, samples: int) -> Report:
    if which in GROUPS:
        return law_suite(GROUPS[which], samples=samples)
    if which == "omega":
        return law_suite(ld.group, samples=samples)
    if which == "measure":
        report = Report("laws-measure")
        if ld.d.is_interval:
            return cmd_extend_measure(ld)
        report.extend(check_measure(ld.table))
        space = ld.space
        report.extend(monotonicity_check(space))
        report.extend(subadditivity_check(space, samples=samples))
        return report
    if which == "lebesgue":
        return _lebesgue_checks(ld)
    if which == "integral":
        maps = [ld.build_map(n) for n in sorted(ld.d.maps) if ld.d.is_interval or not ld.is_product_map(n)]
        return _integral_suite(ld, maps, samples)
    if which == "convergence":
        report = Report("laws-convergence")
        for name in sorted(ld.d.sequences):
            report.extend(_sequence_checks(ld, name))
        if not report.checks:
            report.add("no sequences defined", True, anchor="convergence", flagged=True)
        return report
    raise InputError(f"unknown theorem group {which!r}; expected one of {', '.join(THEOREM_GROUPS + tuple(GROUPS))}")


def cmd_egorov(ld: Loaded, name: str, delta: Fraction, depth: int) -> Report:
    seq = ld.build_sequence(name)
    result = conv.egorov(seq, delta, depth)
    report = Report("egorov")
    space = seq.space
    report.add("Egorov set", True, anchor="convergence.egorov",
               values={"delta": fmt(delta), "depth": str(depth), "E_delta": space.format(result.e_delta),
                       "mu_E_delta": fmt(space.mu(result.e_delta)),
                       **{f"n0({m})": str(n) for m, n in result.schedule.items()}})
    report.extend(result.report)
    report.extend(conv.verify_tail_bound(seq, min(max(result.schedule.values()) + 1, 16)))
    return report


def cmd_fubini(ld: Loaded, right: Loaded, name: str, over_text: str | None) -> Report:
    pl = ProductLoaded(ld, right)
    space = pl.ring_space
    f = ld.build_map(name, space, pl.mask)
    b = pl.parse_set(over_text) if over_text is not None else None
    report = conv.fubini_simple(pl.space, f, b)
    report.name = "fubini"
    return report


def _sequence_checks(ld: Loaded, name: str, horizon: int = 10) -> Report:
    report = Report(f"sequence {name}")
    seq = ld.build_sequence(name)
    report.extend(conv.verify_tail_bound(seq, 6))
    eg = conv.egorov(seq, Fraction(1, 8), 3)
    report.extend(eg.report)
    bound = max([integ.sup_norm(seq[n]) for n in range(1, horizon + 1)] + [integ.sup_norm(seq.limit)])
    g = integ.SimpleMap.constant(seq.space, integ.SCALARS, bound)
    tol = integ.integrate(seq.tail_bound(horizon)).value
    report.extend(conv.dominated_convergence(seq, g, horizon, tol).report)
    entry = ld.d.sequences[name]
    if entry["kind"] == "staircase" or entry.get("direction") == "increasing":
        limit_integral = integ.integrate(seq.limit).value
        report.extend(conv.beppo_levi(seq, limit_integral, horizon, tol).report)
    return report


def _nonvacuous_epsilon(f: integ.SimpleMap) -> Fraction:
    """An ε whose modulus δ exceeds the smallest positive atom, so some non-null set is tested."""
    space = f.space
    if space is INTERVAL_SPACE:
        return Fraction(1, 10)
    positive = [space.mu(a) for a in space.atoms if space.mu(a) > 0]
    if not positive:
        return Fraction(1)
    return 4 * max(Fraction(1), integ.sup_norm(f)) * min(positive)


def cmd_report_all(ld: Loaded, samples: int) -> Report:
    report = Report("report-all")
    report.extend(cmd_classify(ld))
    report.extend(cmd_generate_ring(ld))
    report.extend(cmd_extend_measure(ld))
    if not report.passed:
        return report
    if not ld.d.is_interval and ld.system.unit is None:
        report.add("no unit; Lebesgue and integral checks skipped", True, anchor="measure.space", flagged=True)
        return report
    report.extend(_lebesgue_checks(ld))
    report.extend(law_suite(ld.group, samples=samples))
    plain = [n for n in sorted(ld.d.maps) if ld.d.is_interval or not ld.is_product_map(n)]
    maps = [ld.build_map(n) for n in plain]
    for n, f in zip(plain, maps):
        sub = cmd_integrate(ld, n, None)
        report.extend(sub)
        modulus = integ.continuity_modulus(f, _nonvacuous_epsilon(f))
        report.extend(modulus.report)
    report.extend(_integral_suite(ld, maps, samples))
    for name in sorted(ld.d.sequences):
        report.extend(_sequence_checks(ld, name))
    return report


# --- entry point ------------------------------------------------------------


def _rational(text: str) -> Fraction:
    from .interval import rat

    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("definition", help="definition file (JSON)")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--timestamps", action="store_true", help="stamp the report with the current UTC time")
    common.add_argument("--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="measure-engine", description="Exact measure and integration checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="strongest class of the set system")
    p.add_argument("--require", help="fail unless at least this class (semiring, ring, algebra, sigma_algebra)")
    sub.add_parser("generate-ring", parents=[common], help="ring generated by the semiring")
    sub.add_parser("extend-measure", parents=[common], help="check the table and extend it to the ring")
    p = sub.add_parser("outer-measure", parents=[common], help="outer measure of a set")
    p.add_argument("set")
    p = sub.add_parser("measurable", parents=[common], help="Lebesgue measurability of a set")
    p.add_argument("set")
    p.add_argument("--epsilon", type=_rational)
    sub.add_parser("lebesgue-extend", parents=[common], help="the Lebesgue extension and its checks")
    p = sub.add_parser("product", parents=[common], help="product with a second definition")
    p.add_argument("right")
    p = sub.add_parser("sections", parents=[common], help="sections of a product set")
    p.add_argument("set")
    p.add_argument("--right", required=True)
    p = sub.add_parser("integrate", parents=[common], help="integral of a named map")
    p.add_argument("map")
    p.add_argument("--over")
    p = sub.add_parser("laws", parents=[common], help="run a theorem group or an Ω-group law suite")
    p.add_argument("group", help=f"one of {', '.join(THEOREM_GROUPS + tuple(GROUPS))}")
    p.add_argument("--samples", type=int, default=200)
    p = sub.add_parser("egorov", parents=[common], help="Egorov set for a named sequence")
    p.add_argument("sequence")
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--depth", type=int, required=True)
    p = sub.add_parser("fubini", parents=[common], help="three-way Fubini equality for a product map")
    p.add_argument("map")
    p.add_argument("--right", required=True)
    p.add_argument("--over")
    p = sub.add_parser("report-all", parents=[common], help="every applicable check")
    p.add_argument("--samples", type=int, default=50)
    return parser


def run(args: argparse.Namespace) -> tuple[Report, dict]:
    ld = Loaded(load(args.definition))
    definitions = [ld.d]
    right = None
    right_path = getattr(args, "right", None)
    if right_path:
        right = Loaded(load(right_path))
        definitions.append(right.d)
    c = args.command
    if c == "classify":
        report, extra = cmd_classify(ld, args.require), [args.require or ""]
    elif c == "generate-ring":
        report, extra = cmd_generate_ring(ld), []
    elif c == "extend-measure":
        report, extra = cmd_extend_measure(ld), []
    elif c == "outer-measure":
        report, extra = cmd_outer_measure(ld, args.set), [args.set]
    elif c == "measurable":
        report, extra = cmd_measurable(ld, args.set, args.epsilon), [args.set, fmt(args.epsilon) if args.epsilon else ""]
    elif c == "lebesgue-extend":
        report, extra = cmd_lebesgue_extend(ld), []
    elif c == "product":
        report, extra = cmd_product(ld, right), []
    elif c == "sections":
        report, extra = cmd_sections(ld, right, args.set), [args.set]
    elif c == "integrate":
        report, extra = cmd_integrate(ld, args.map, args.over), [args.map, args.over or ""]
    elif c == "laws":
        report, extra = cmd_laws(ld, args.group, args.samples), [args.group, str(args.samples)]
    elif c == "egorov":
        report, extra = cmd_egorov(ld, args.sequence, args.delta, args.depth), [args.sequence, fmt(args.delta), str(args.depth)]
    elif c == "fubini":
        report, extra = cmd_fubini(ld, right, args.map, args.over), [args.map, args.over or ""]
    else:
        report, extra = cmd_report_all(ld, args.samples), [str(args.samples)]
    report.name = c
    header = {"command": c, "digest": input_digest(c, extra, definitions)}
    return report, header


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else 0
    try:
        report, header = run(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except SchemaError as exc:
        print(f"error: {args.definition}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (MeasureEngineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if args.timestamps:
        header["generated"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    text = render_json(report, header) if args.json else render_text(report, header)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT[report.verdict]


if __name__ == "__main__":
    sys.exit(main())
