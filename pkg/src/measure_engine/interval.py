"""Half-open rational intervals ``[a, b)`` inside ``[0, 1)``.

Intervals form a semiring with unit ``[0, 1)``; finite unions of them
(:class:`IntervalUnion`) form the ring it generates.  Endpoints are
:class:`fractions.Fraction`, so every length and every comparison is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError
from .set_system import Expansion

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; floats are refused."""
    if isinstance(x, float):
        raise PreconditionError(f"float {x!r} refused; use an exact rational such as '1/3'")
    if isinstance(x, str):
        x = x.strip()
        if not x or any(ch in x for ch in ".eE"):
            raise PreconditionError(f"{x!r} is not a rational of the form num/den")
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise PreconditionError(f"{x!r} is not a rational of the form num/den") from None


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = rat(self.lo), rat(self.hi)
        if not (ZERO <= lo <= ONE and ZERO <= hi <= ONE):
            raise PreconditionError(f"[{lo},{hi}) is not inside [0,1)")
        if lo > hi:
            raise PreconditionError(f"[{lo},{hi}) has lo > hi")
        if lo == hi:
            lo = hi = ZERO
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def empty(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x < self.hi

    def issubset(self, other: Interval) -> bool:
        return self.empty or (other.lo <= self.lo and self.hi <= other.hi)

    def __str__(self) -> str:
        return f"[{_fmt(self.lo)},{_fmt(self.hi)})"


EMPTY = Interval(ZERO, ZERO)
UNIT = Interval(ZERO, ONE)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def iv_intersect(a: Interval, b: Interval) -> Interval:
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo >= hi:
        return EMPTY
    return Interval(lo, hi)


def iv_subtract_expansion(whole: Interval, part: Interval) -> Expansion:
    """``whole`` as ``part`` followed by its left and right remainders."""
    if not part.issubset(whole):
        raise PreconditionError(f"{part} is not contained in {whole}")
    if part == whole:
        return Expansion(whole, (whole,), 1)
    if part.empty:
        return Expansion(whole, (whole,), 0)
    pieces = [part]
    if whole.lo < part.lo:
        pieces.append(Interval(whole.lo, part.lo))
    if part.hi < whole.hi:
        pieces.append(Interval(part.hi, whole.hi))
    return Expansion(whole, tuple(pieces), 1)


class IntervalUnion:
    """Canonical finite union of intervals: sorted, merged, no empty pieces.

    Supports ``&``, ``|``, ``^``, ``-`` and ``~`` (complement in ``[0, 1)``),
    ``<=`` for inclusion and truthiness for non-emptiness, so generic code can
    treat it like a bitmask.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval] = ()):
        object.__setattr__(self, "intervals", _normalize(intervals))

    def __setattr__(self, name, value):
        raise AttributeError("IntervalUnion is immutable")

    @classmethod
    def of(cls, *pairs) -> IntervalUnion:
        return cls(Interval(lo, hi) for lo, hi in pairs)

    @property
    def length(self) -> Fraction:
        return sum((i.length for i in self.intervals), ZERO)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalUnion) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        return f"IntervalUnion({list(self.intervals)!r})"

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return "+".join(str(i) for i in self.intervals)

    def __contains__(self, x) -> bool:
        return any(x in i for i in self.intervals)

    def __and__(self, other: IntervalUnion) -> IntervalUnion:
        return iu_intersect(self, other)

    def __or__(self, other: IntervalUnion) -> IntervalUnion:
        return iu_union(self, other)

    def __sub__(self, other: IntervalUnion) -> IntervalUnion:
        return iu_subtract(self, other)

    def __xor__(self, other: IntervalUnion) -> IntervalUnion:
        return iu_symdiff(self, other)

    def __invert__(self) -> IntervalUnion:
        return iu_complement(self)

    def __le__(self, other: IntervalUnion) -> bool:
        return not (self - other)

    def sort_key(self):
        return tuple((i.lo, i.hi) for i in self.intervals)


def _normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    pieces = sorted(i for i in intervals if not i.empty)
    merged: list[list[Fraction]] = []
    for i in pieces:
        if merged and i.lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], i.hi)
        else:
            merged.append([i.lo, i.hi])
    return tuple(Interval(lo, hi) for lo, hi in merged)


def union_normalize(pieces: Sequence[Interval]) -> IntervalUnion:
    """Sort and merge; overlapping or adjacent input pieces are fused."""
    return IntervalUnion(pieces)


def length(u: IntervalUnion | Interval) -> Fraction:
    return u.length


def iu_intersect(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    out = []
    i = j = 0
    xs, ys = a.intervals, b.intervals
    while i < len(xs) and j < len(ys):
        piece = iv_intersect(xs[i], ys[j])
        if not piece.empty:
            out.append(piece)
        if xs[i].hi < ys[j].hi:
            i += 1
        else:
            j += 1
    return IntervalUnion(out)


def iu_union(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    return IntervalUnion(a.intervals + b.intervals)


def iu_complement(a: IntervalUnion) -> IntervalUnion:
    out = []
    cursor = ZERO
    for i in a.intervals:
        if cursor < i.lo:
            out.append(Interval(cursor, i.lo))
        cursor = i.hi
    if cursor < ONE:
        out.append(Interval(cursor, ONE))
    return IntervalUnion(out)


def iu_subtract(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    return iu_intersect(a, iu_complement(b))


def iu_symdiff(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    return iu_union(iu_subtract(a, b), iu_subtract(b, a))


EMPTY_UNION = IntervalUnion()
UNIT_UNION = IntervalUnion([UNIT])


def as_union(x) -> IntervalUnion:
    if isinstance(x, IntervalUnion):
        return x
    if isinstance(x, Interval):
        return IntervalUnion([x])
    return IntervalUnion(x)


class IntervalSpace:
    """``[0, 1)`` with the algebra of finite interval unions and length measure.

    Shares the duck-typed surface of :class:`measure_engine.measure.MeasurableSpace`:
    ``unit``, ``empty``, ``mu``, membership and ``sort_key``.
    """

    unit = UNIT_UNION
    empty = EMPTY_UNION

    def __contains__(self, a) -> bool:
        return isinstance(a, IntervalUnion)

    def mu(self, a: IntervalUnion) -> Fraction:
        return as_union(a).length

    def sort_key(self, a: IntervalUnion):
        return a.sort_key()

    def format(self, a: IntervalUnion) -> str:
        return str(a)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSpace)

    def __hash__(self) -> int:
        return hash(IntervalSpace)

    def __repr__(self) -> str:
        return "IntervalSpace()"


INTERVAL_SPACE = IntervalSpace()


def semiring_axioms(a: Interval, b: Interval) -> list[str]:
    """Semiring axioms on one pair of intervals; returns the violated ones."""
    failures = []
    c = iv_intersect(a, b)
    if not (c.issubset(a) and c.issubset(b)):
        failures.append("intersection")
    if c.length != max(ZERO, min(a.hi, b.hi) - max(a.lo, b.lo)):
        failures.append("intersection")
    for whole in (a, b):
        exp = iv_subtract_expansion(whole, c)
        pieces = exp.pieces
        if exp.prefix_len and pieces[0] != c:
            failures.append("finite expansion")
        if IntervalUnion(pieces) != as_union(whole) or sum(p.length for p in pieces) != whole.length:
            failures.append("finite expansion")
        if len(pieces) > 3:
            failures.append("finite expansion")
    return failures


def parse_interval_union(text: str) -> IntervalUnion:
    """Parse ``"[0,1/4)+[1/2,1)"``; ``"{}"`` or ``""`` is the empty set."""
    text = text.strip()
    if text in ("", "{}", "∅"):
        return EMPTY_UNION
    pieces = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not (chunk.startswith("[") and chunk.endswith(")")):
            raise PreconditionError(f"interval {chunk!r} must look like [a,b)")
        lo, sep, hi = chunk[1:-1].partition(",")
        if not sep:
            raise PreconditionError(f"interval {chunk!r} must look like [a,b)")
        pieces.append(Interval(rat(lo), rat(hi)))
    return IntervalUnion(pieces)
