"""Definition files: strict JSON with rationals as ``"num/den"`` strings.

A definition names a carrier (a list of point names, or ``"interval"`` for
[0, 1) with length), a semiring, a measure table, an Ω-group, simple maps and
sequence families::

    {
      "carrier": ["1", "2", "3"],
      "system": [[], ["1"], ["2", "3"], ["1", "2", "3"]],
      "measure": [[[], "0"], [["1"], "1/2"], [["2", "3"], "1/3"], [["1", "2", "3"], "5/6"]],
      "omega_group": "ratscalar",
      "maps": {"f": [[["1"], "2"], [["2"], "-3"]]},
      "sequences": {"s": {"kind": "staircase", "heights": {"1": "1"}, "plateaus": {"1": 2}}}
    }

On interval carriers sets are lists of ``["lo", "hi"]`` pairs and the measure
is length, so ``measure`` must be absent.  Parsing reports the JSON location
of the first problem.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import MeasureEngineError
from .interval import IntervalUnion, parse_interval_union, rat
from .omega import GROUPS
from .set_system import MAX_CARRIER, key
from .report import fmt

FIELDS = ("carrier", "system", "measure", "omega_group", "maps", "sequences")
SEQUENCE_KINDS = {
    "dyadic_indicator": {"direction"},
    "staircase": {"heights", "plateaus"},
    "eventually_constant": {"before", "limit", "switch"},
}


class SchemaError(MeasureEngineError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _reject_float(text: str):
    raise SchemaError("$", f"float literal {text} is not allowed; write rationals as \"num/den\" strings")


def _reject_constant(text: str):
    raise SchemaError("$", f"{text} is not allowed")


def loads(text: str) -> Any:
    try:
        return json.loads(text, parse_float=_reject_float, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}", exc.msg) from None


def _rat(raw, where: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise SchemaError(where, f"expected a rational string, got {type(raw).__name__}")
    try:
        return rat(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(where, str(exc)) from None


@dataclass
class Definition:
    """A parsed definition in canonical form (point names are strings)."""

    carrier: tuple[str, ...] | str
    system: list = field(default_factory=list)
    measure: list = field(default_factory=list)  # [(set, Fraction)]
    omega_group: str = "ratscalar"
    maps: dict = field(default_factory=dict)  # name -> [(set, raw value)]
    sequences: dict = field(default_factory=dict)

    @property
    def is_interval(self) -> bool:
        return self.carrier == "interval"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"carrier": self.carrier if self.is_interval else list(self.carrier)}
        out["system"] = [self._dump_set(s) for s in self.system]
        if not self.is_interval:
            out["measure"] = [[self._dump_set(s), fmt(v)] for s, v in self.measure]
        out["omega_group"] = self.omega_group
        if self.maps:
            group = GROUPS[self.omega_group]
            out["maps"] = {
                name: [[self._dump_set(s), group.dump(v)] for s, v in pieces]
                for name, pieces in sorted(self.maps.items())
            }
        if self.sequences:
            out["sequences"] = {name: self.sequences[name] for name in sorted(self.sequences)}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()

    def _dump_set(self, s):
        if self.is_interval:
            return [[fmt(iv.lo), fmt(iv.hi)] for iv in s.intervals]
        return list(s)


def _parse_set(d: Definition, raw, where: str, allow_product: bool = False):
    if d.is_interval:
        if isinstance(raw, str):
            try:
                return parse_interval_union(raw)
            except ValueError as exc:
                raise SchemaError(where, str(exc)) from None
        if not isinstance(raw, list):
            raise SchemaError(where, "expected a list of [lo, hi] pairs")
        pairs = []
        for k, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"{where}[{k}]", "expected a [lo, hi] pair")
            lo, hi = _rat(pair[0], f"{where}[{k}][0]"), _rat(pair[1], f"{where}[{k}][1]")
            if not 0 <= lo <= hi <= 1:
                raise SchemaError(f"{where}[{k}]", "interval must satisfy 0 ≤ lo ≤ hi ≤ 1")
            pairs.append((lo, hi))
        return IntervalUnion.of(*pairs)
    if not isinstance(raw, list):
        raise SchemaError(where, "expected a list of point names")
    names = set()
    if allow_product and any(isinstance(p, str) and ":" in p for p in raw):
        # product points x1:x2; the right factor is only known to product commands
        for k, p in enumerate(raw):
            if not isinstance(p, str) or p.count(":") != 1 or p.split(":")[0] not in d.carrier:
                raise SchemaError(f"{where}[{k}]", f"expected a product point x1:x2 with x1 in the carrier, got {p!r}")
            names.add(p)
        return tuple(sorted(names))
    for k, p in enumerate(raw):
        if isinstance(p, bool) or not isinstance(p, (str, int)):
            raise SchemaError(f"{where}[{k}]", "point names must be strings or integers")
        if str(p) not in d.carrier:
            raise SchemaError(f"{where}[{k}]", f"unknown point {p!r}")
        names.add(str(p))
    return tuple(p for p in d.carrier if p in names)


def _set_key(d: Definition, s):
    if d.is_interval:
        return s.sort_key()
    mask = sum(1 << d.carrier.index(p) for p in s)
    return key(mask)


def parse(obj: Any) -> Definition:
    if not isinstance(obj, dict):
        raise SchemaError("$", "definition must be a JSON object")
    unknown = sorted(set(obj) - set(FIELDS))
    if unknown:
        raise SchemaError(f"$.{unknown[0]}", "unknown field")
    if "carrier" not in obj:
        raise SchemaError("$.carrier", "missing required field")
    raw_carrier = obj["carrier"]
    if raw_carrier == "interval":
        carrier: tuple[str, ...] | str = "interval"
    elif isinstance(raw_carrier, list):
        names = []
        for k, p in enumerate(raw_carrier):
            if isinstance(p, bool) or not isinstance(p, (str, int)):
                raise SchemaError(f"$.carrier[{k}]", "point names must be strings or integers")
            name = str(p)
            if ":" in name:
                raise SchemaError(f"$.carrier[{k}]", "':' is reserved for product points")
            if name in names:
                raise SchemaError(f"$.carrier[{k}]", f"duplicate point {name!r}")
            names.append(name)
        if not 1 <= len(names) <= MAX_CARRIER:
            raise SchemaError("$.carrier", f"carrier must have 1 to {MAX_CARRIER} points")
        carrier = tuple(names)
    else:
        raise SchemaError("$.carrier", 'expected a list of point names or "interval"')
    d = Definition(carrier)

    group = obj.get("omega_group", "ratscalar")
    if group not in GROUPS:
        raise SchemaError("$.omega_group", f"expected one of {', '.join(sorted(GROUPS))}")
    d.omega_group = group

    raw_system = obj.get("system", [] if d.is_interval else None)
    if raw_system is None:
        raise SchemaError("$.system", "missing required field")
    if not isinstance(raw_system, list):
        raise SchemaError("$.system", "expected a list of sets")
    seen = {}
    for k, raw in enumerate(raw_system):
        s = _parse_set(d, raw, f"$.system[{k}]")
        seen[_set_key(d, s)] = s
    d.system = [seen[k] for k in sorted(seen)]
    if not d.is_interval and not d.system:
        raise SchemaError("$.system", "empty system")

    if d.is_interval:
        if "measure" in obj:
            raise SchemaError("$.measure", "interval carriers use length; omit the measure")
    else:
        raw_measure = obj.get("measure")
        if not isinstance(raw_measure, list):
            raise SchemaError("$.measure", "expected a list of [set, value] pairs")
        table = {}
        for k, pair in enumerate(raw_measure):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"$.measure[{k}]", "expected a [set, value] pair")
            s = _parse_set(d, pair[0], f"$.measure[{k}][0]")
            if _set_key(d, s) in table:
                raise SchemaError(f"$.measure[{k}]", "duplicate set")
            table[_set_key(d, s)] = (s, _rat(pair[1], f"$.measure[{k}][1]"))
        members = {_set_key(d, s) for s in d.system}
        for k in sorted(members - set(table)):
            raise SchemaError("$.measure", f"missing value for system member {d._dump_set(seen[k])}")
        for k in sorted(set(table) - members):
            raise SchemaError("$.measure", f"value for non-member {d._dump_set(table[k][0])}")
        d.measure = [table[k] for k in sorted(table)]

    raw_maps = obj.get("maps", {})
    if not isinstance(raw_maps, dict):
        raise SchemaError("$.maps", "expected an object of named maps")
    grp = GROUPS[d.omega_group]
    for name, pieces in raw_maps.items():
        where = f"$.maps.{name}"
        if not isinstance(pieces, list):
            raise SchemaError(where, "expected a list of [set, value] pairs")
        parsed = []
        for k, pair in enumerate(pieces):
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(f"{where}[{k}]", "expected a [set, value] pair")
            s = _parse_set(d, pair[0], f"{where}[{k}][0]", allow_product=not d.is_interval)
            try:
                v = grp.parse(pair[1])
            except (ValueError, ZeroDivisionError, TypeError, MeasureEngineError) as exc:
                raise SchemaError(f"{where}[{k}][1]", str(exc)) from None
            parsed.append((s, v))
        d.maps[name] = parsed

    raw_seqs = obj.get("sequences", {})
    if not isinstance(raw_seqs, dict):
        raise SchemaError("$.sequences", "expected an object of named families")
    for name, entry in raw_seqs.items():
        d.sequences[name] = _parse_sequence(d, entry, f"$.sequences.{name}")
    return d


def _parse_sequence(d: Definition, entry, where: str) -> dict:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise SchemaError(where, "expected an object with a 'kind'")
    kind = entry["kind"]
    if kind not in SEQUENCE_KINDS:
        raise SchemaError(f"{where}.kind", f"expected one of {', '.join(sorted(SEQUENCE_KINDS))}")
    extra = sorted(set(entry) - SEQUENCE_KINDS[kind] - {"kind"})
    if extra:
        raise SchemaError(f"{where}.{extra[0]}", "unknown field")
    out: dict[str, Any] = {"kind": kind}
    if kind == "dyadic_indicator":
        if not d.is_interval:
            raise SchemaError(where, "dyadic_indicator needs the interval carrier")
        direction = entry.get("direction", "decreasing")
        if direction not in ("decreasing", "increasing"):
            raise SchemaError(f"{where}.direction", "expected 'decreasing' or 'increasing'")
        out["direction"] = direction
    elif kind == "staircase":
        if d.is_interval:
            raise SchemaError(where, "staircase needs a finite carrier")
        heights, plateaus = entry.get("heights", {}), entry.get("plateaus", {})
        if not isinstance(heights, dict) or not isinstance(plateaus, dict):
            raise SchemaError(where, "heights and plateaus must be objects keyed by point")
        for p in list(heights) + list(plateaus):
            if p not in d.carrier:
                raise SchemaError(where, f"unknown point {p!r}")
        out["heights"] = {p: fmt(_rat(v, f"{where}.heights.{p}")) for p, v in sorted(heights.items())}
        out["plateaus"] = {}
        for p, v in sorted(plateaus.items()):
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise SchemaError(f"{where}.plateaus.{p}", "expected an integer ≥ 1")
            out["plateaus"][p] = v
    else:
        for ref in ("before", "limit"):
            if entry.get(ref) not in d.maps:
                raise SchemaError(f"{where}.{ref}", "expected the name of a map")
            out[ref] = entry[ref]
        switch = entry.get("switch", 1)
        if isinstance(switch, bool) or not isinstance(switch, int) or switch < 1:
            raise SchemaError(f"{where}.switch", "expected an integer ≥ 1")
        out["switch"] = switch
    return out


def load(path) -> Definition:
    with open(path, encoding="utf-8") as fh:
        return parse(loads(fh.read()))
