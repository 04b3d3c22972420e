"""Set systems over a small finite carrier.

Subsets are plain ``int`` bitmasks: bit ``i`` is set when the ``i``-th point of
the carrier belongs to the subset.  A :class:`SetSystem` is a carrier together
with a frozen set of such masks.  This module decides which closure class a
system falls in and runs the constructive expansion and generation algorithms
(finite expansions, common refinements, generated rings and algebras).

Whenever several expansions exist the one returned is the lexicographically
smallest when pieces are compared by ``(cardinality, mask)``; see :func:`key`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import EmptySystemError, NotASemiringError, PreconditionError

MAX_CARRIER = 16
MAX_EXHAUSTIVE = 8


def key(mask: int) -> tuple[int, int]:
    """Tie-break order on subsets: smaller sets first, then smaller masks."""
    return (mask.bit_count(), mask)


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def point_name(p) -> str:
    """Product points ``(x1, x2)`` print as ``x1:x2``."""
    if isinstance(p, tuple):
        return ":".join(point_name(q) for q in p)
    return str(p)


@dataclass(frozen=True)
class Carrier:
    """Ordered finite list of distinct points; the order fixes bit positions."""

    points: tuple[Hashable, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        if len(set(points)) != len(points):
            raise PreconditionError("carrier points must be pairwise distinct")
        if len(points) > MAX_CARRIER:
            raise PreconditionError(f"carrier has {len(points)} points; at most {MAX_CARRIER} supported")
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(points)})

    def __len__(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def index(self, point) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise PreconditionError(f"point {point!r} is not in the carrier") from None

    def mask(self, points: Iterable[Hashable]) -> int:
        m = 0
        for p in points:
            m |= 1 << self.index(p)
        return m

    def points_of(self, mask: int) -> tuple:
        if mask < 0 or mask >> len(self.points):
            raise PreconditionError("mask has bits outside the carrier")
        return tuple(self.points[i] for i in bits(mask))

    def format(self, mask: int) -> str:
        return "{" + ",".join(point_name(p) for p in self.points_of(mask)) + "}"

    def subsets(self, within: int | None = None) -> Iterator[int]:
        """All submasks of ``within`` (default: the whole carrier), ascending."""
        within = self.full if within is None else within
        for m in range(within + 1):
            if m & ~within == 0:
                yield m


class Kind(enum.IntEnum):
    NONE = 0
    SEMIRING = 1
    RING = 2
    ALGEBRA = 3
    SIGMA_ALGEBRA = 4

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class AxiomFailure:
    """Why a system misses a class: the violated axiom and the offending sets."""

    axiom: str
    sets: tuple[int, ...]

    def describe(self, carrier: Carrier) -> str:
        return f"{self.axiom}: " + ", ".join(carrier.format(s) for s in self.sets)


@dataclass(frozen=True)
class Classification:
    kind: Kind
    witness: AxiomFailure | None = None


@dataclass(frozen=True)
class SetSystem:
    carrier: Carrier
    members: frozenset[int]

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        full = self.carrier.full
        for m in members:
            if m < 0 or m & ~full:
                raise PreconditionError(f"mask {m} lies outside the carrier")

    @classmethod
    def from_sets(cls, carrier: Carrier, sets: Iterable[Iterable[Hashable]]) -> SetSystem:
        return cls(carrier, frozenset(carrier.mask(s) for s in sets))

    @classmethod
    def power_set(cls, carrier: Carrier, within: int | None = None) -> SetSystem:
        return cls(carrier, frozenset(carrier.subsets(within)))

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.ordered)

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def ordered(self) -> tuple[int, ...]:
        return tuple(sorted(self.members, key=key))

    @cached_property
    def nonempty(self) -> tuple[int, ...]:
        return tuple(m for m in self.ordered if m)

    @cached_property
    def union(self) -> int:
        u = 0
        for m in self.members:
            u |= m
        return u

    @property
    def unit(self) -> int | None:
        """The member containing every other member, if there is one."""
        return self.union if self.union in self.members else None

    @cached_property
    def kind(self) -> Kind:
        return classify(self).kind

    def format(self) -> str:
        return "{" + ", ".join(self.carrier.format(m) for m in self.ordered) + "}"

    def with_members(self, members: Iterable[int]) -> SetSystem:
        return SetSystem(self.carrier, frozenset(members))


@dataclass(frozen=True)
class Expansion:
    """A set written as an ordered disjoint union of pieces.

    The first ``prefix_len`` pieces are the ones the caller asked for.  Pieces
    are masks here; the interval module reuses the type with interval pieces.
    """

    whole: object
    pieces: tuple
    prefix_len: int = 0


def check_expansion(expansion: Expansion) -> bool:
    """Pairwise disjoint, union exact, no empty piece except the lone ``[∅]``."""
    if expansion.pieces == (0,):
        return expansion.whole == 0
    acc = 0
    for p in expansion.pieces:
        if p == 0 or p & acc:
            return False
        acc |= p
    return acc == expansion.whole


# --- exact covers -----------------------------------------------------------


def _exact_cover(candidates: Sequence[int], target: int) -> tuple[int, ...] | None:
    """First exact cover of ``target`` by pieces listed in ``candidates`` order.

    Pieces are taken in increasing candidate position, so with candidates
    sorted by :func:`key` the result is the lexicographically smallest cover.
    """
    cands = [c for c in candidates if c and c & ~target == 0]
    n = len(cands)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | cands[i]
    dead: set[tuple[int, int]] = set()

    def search(rem: int, start: int):
        if rem == 0:
            return ()
        if rem & ~suffix[start] or (rem, start) in dead:
            return None
        for j in range(start, n):
            c = cands[j]
            if c & ~rem:
                continue
            rest = search(rem & ~c, j + 1)
            if rest is not None:
                return (c,) + rest
        dead.add((rem, start))
        return None

    return search(target, 0)


def find_expansion(system: SetSystem, target: int, *, reverse: bool = False) -> tuple[int, ...] | None:
    """Disjoint members of ``system`` whose union is ``target``, or ``None``.

    ``reverse=True`` uses the reversed tie-break order (largest pieces first),
    which gives a second, independently chosen expansion when one exists.
    """
    if target == 0:
        return ()
    order = system.nonempty[::-1] if reverse else system.nonempty
    return _exact_cover(order, target)


def all_expansions(system: SetSystem, target: int) -> Iterator[tuple[int, ...]]:
    """Every expansion of ``target`` into nonempty members, each listed in key order."""
    cands = [c for c in system.nonempty if c & ~target == 0]

    def walk(rem: int):
        if rem == 0:
            yield ()
            return
        low = rem & -rem
        for c in cands:
            if c & low and c & ~rem == 0:
                for rest in walk(rem & ~c):
                    yield (c,) + rest

    for cover in walk(target):
        yield tuple(sorted(cover, key=key))


# --- classification ---------------------------------------------------------


def _semiring_failure(system: SetSystem) -> AxiomFailure | None:
    members = system.members
    if 0 not in members:
        return AxiomFailure("empty set", ())
    ordered = system.ordered
    for i, a in enumerate(ordered):
        for b in ordered[i:]:
            if a & b not in members:
                return AxiomFailure("intersection", (a, b))
    for whole in ordered:
        for part in ordered:
            if part and part != whole and is_subset(part, whole):
                if find_expansion(system, whole & ~part) is None:
                    return AxiomFailure("finite expansion", (whole, part))
    return None


def _ring_failure(system: SetSystem) -> AxiomFailure | None:
    members = system.members
    if 0 not in members:
        return AxiomFailure("empty set", ())
    ordered = system.ordered
    for i, a in enumerate(ordered):
        for b in ordered[i:]:
            if a & b not in members:
                return AxiomFailure("intersection", (a, b))
            if a ^ b not in members:
                return AxiomFailure("symmetric difference", (a, b))
    return None


def _algebra_failure(system: SetSystem) -> AxiomFailure | None:
    if system.unit is None:
        return AxiomFailure("unit", (system.union,))
    return None


def classify(system: SetSystem, requested: Kind | None = None) -> Classification:
    """Strongest class the system belongs to.

    On a finite carrier every countable union of members is a finite union, so
    a system is a sigma-algebra exactly when it is an algebra.  The witness
    explains the failure of the class just above the result, or of
    ``requested`` when the result falls short of it.
    """
    if not system.members:
        raise EmptySystemError()
    result = _classify(system)
    if requested is not None and result.kind >= requested:
        return Classification(result.kind, None)
    return result


def _classify(system: SetSystem) -> Classification:
    failure = _semiring_failure(system)
    if failure is not None:
        return Classification(Kind.NONE, failure)
    failure = _ring_failure(system)
    if failure is not None:
        return Classification(Kind.SEMIRING, failure)
    failure = _algebra_failure(system)
    if failure is not None:
        return Classification(Kind.RING, failure)
    return Classification(Kind.SIGMA_ALGEBRA, None)


def is_semiring(system: SetSystem) -> bool:
    return bool(system.members) and _semiring_failure(system) is None


def is_ring(system: SetSystem) -> bool:
    return bool(system.members) and _ring_failure(system) is None


def is_algebra(system: SetSystem) -> bool:
    return is_ring(system) and system.unit is not None


# --- expansions (semiring axiom 3, lemmas on finite expansions) -------------


def _require_member(system: SetSystem, mask: int, what: str = "set") -> None:
    if mask not in system.members:
        raise PreconditionError(f"{what} {system.carrier.format(mask)} is not a member of the system")


def subtract_expansion(system: SetSystem, whole: int, part: int) -> Expansion:
    """Write ``whole`` as ``part`` plus disjoint members of ``system``."""
    _require_member(system, whole, "whole")
    _require_member(system, part, "part")
    if not is_subset(part, whole):
        raise PreconditionError(
            f"{system.carrier.format(part)} is not contained in {system.carrier.format(whole)}"
        )
    if part == whole:
        return Expansion(whole, (whole,), 1)
    rest = find_expansion(system, whole & ~part)
    if rest is None:
        raise NotASemiringError(
            f"no finite expansion of {system.carrier.format(whole)} starting at {system.carrier.format(part)}",
            pair=(whole, part),
        )
    if part == 0:
        return Expansion(whole, rest, 0)
    return Expansion(whole, (part,) + rest, 1)


def _check_disjoint(sets: Sequence[int]) -> None:
    acc = 0
    for s in sets:
        if s & acc:
            raise PreconditionError("given sets overlap")
        acc |= s


def complete_expansion(system: SetSystem, whole: int, given: Sequence[int]) -> Expansion:
    """Extend disjoint members ``given`` inside ``whole`` to a full expansion.

    Follows the induction: expand ``whole`` around the first given set, then
    for each further set ``g`` cut every remaining piece ``b`` into ``b ∩ g``
    and an expansion of the rest of ``b``.  Empty given sets are dropped.
    """
    _require_member(system, whole, "whole")
    for g in given:
        _require_member(system, g, "given set")
        if not is_subset(g, whole):
            raise PreconditionError(f"{system.carrier.format(g)} is not contained in the whole set")
    _check_disjoint(given)
    given = [g for g in given if g]
    if not given:
        return Expansion(whole, (whole,), 0)
    rest = list(subtract_expansion(system, whole, given[0]).pieces[1:])
    for g in given[1:]:
        refined = []
        for b in rest:
            c = b & g
            if c == 0:
                refined.append(b)
            else:
                refined.extend(subtract_expansion(system, b, c).pieces[1:])
        rest = refined
    return Expansion(whole, tuple(given) + tuple(rest), len(given))


@dataclass(frozen=True)
class Refinement:
    """Disjoint pieces with, for each input set, the indices of its pieces."""

    pieces: tuple[int, ...]
    membership: tuple[frozenset[int], ...]


def common_refinement(system: SetSystem, sets: Sequence[int]) -> Refinement:
    """Disjoint members such that every input is a union of some of them.

    Inputs are absorbed one at a time: each existing piece is split into its
    intersection with the new set and an expansion of the remainder, and the
    new set is completed around the intersections.  Pieces come back in key
    order.
    """
    for s in sets:
        _require_member(system, s)
    owners: dict[int, set[int]] = {}
    for idx, a in enumerate(sets):
        if a == 0:
            continue
        if not owners:
            owners[a] = {idx}
            continue
        updated: dict[int, set[int]] = {}
        inside = []
        for b, who in owners.items():
            c = a & b
            if c == 0:
                updated[b] = who
                continue
            for p in subtract_expansion(system, b, c).pieces:
                updated[p] = set(who) | ({idx} if p == c else set())
            inside.append(c)
        inside.sort(key=key)
        completion = complete_expansion(system, a, inside)
        for p in completion.pieces[completion.prefix_len:]:
            updated[p] = {idx}
        owners = updated
    pieces = tuple(sorted(owners, key=key))
    position = {p: i for i, p in enumerate(pieces)}
    membership = tuple(
        frozenset(position[p] for p in pieces if idx in owners[p]) for idx in range(len(sets))
    )
    return Refinement(pieces, membership)


# --- generated rings and algebras -------------------------------------------


@dataclass(frozen=True)
class GeneratedRing:
    """A ring generated by a semiring, with one expansion per member."""

    ring: SetSystem
    witnesses: dict[int, Expansion] = field(compare=False)


def generate_ring_from_semiring(system: SetSystem) -> GeneratedRing:
    """All finite disjoint unions of semiring members.

    Breadth-first: every known union is extended by each disjoint nonempty
    member, and the first path reaching a set becomes its witness expansion.
    """
    if not is_semiring(system):
        raise NotASemiringError()
    atoms = system.nonempty
    paths: dict[int, tuple[int, ...]] = {0: ()}
    frontier = [0]
    while frontier:
        found = []
        for r in frontier:
            for s in atoms:
                if s & r:
                    continue
                u = r | s
                if u not in paths:
                    paths[u] = paths[r] + (s,)
                    found.append(u)
        frontier = sorted(found, key=key)
    witnesses = {u: Expansion(u, p or (0,), 0) for u, p in paths.items()}
    return GeneratedRing(system.with_members(paths), witnesses)


class MinimalityError(PreconditionError):
    pass


def generate_ring(system: SetSystem, candidates: Iterable[SetSystem] = ()) -> SetSystem:
    """Smallest ring containing ``system``: closure under ∩ and symmetric difference.

    Each ring in ``candidates`` that contains ``system`` must contain the
    result; otherwise :class:`MinimalityError` is raised.
    """
    if not system.members:
        raise EmptySystemError()
    members = set(system.members) | {0}
    work = list(members)
    while work:
        a = work.pop()
        for b in list(members):
            for c in (a & b, a ^ b):
                if c not in members:
                    members.add(c)
                    work.append(c)
    ring = system.with_members(members)
    for cand in candidates:
        if system.members <= cand.members and is_ring(cand) and not ring.members <= cand.members:
            raise MinimalityError("generated ring is not contained in a ring containing the system")
    return ring


def generate_algebra(system: SetSystem) -> SetSystem:
    """Smallest algebra with unit ``⋃system`` containing ``system``."""
    if not system.members:
        raise EmptySystemError()
    return generate_ring(system.with_members(system.members | {system.union}))


def intersect_systems(a: SetSystem, b: SetSystem) -> SetSystem:
    if a.carrier != b.carrier:
        raise PreconditionError("systems live on different carriers")
    return a.with_members(a.members & b.members)


def disjointify(sets: Sequence):
    """``A'_n = A_n minus (A_1 ∪ … ∪ A_{n-1})``.

    Works for masks and for any set type supporting ``&``, ``|`` and ``~``.
    """
    out = []
    acc = None
    for a in sets:
        if acc is None:
            out.append(a)
            acc = a
        else:
            out.append(a & ~acc)
            acc = acc | a
    return out


def atoms(system: SetSystem) -> tuple[int, ...]:
    """Atoms of the ring generated by ``system``: points grouped by which members contain them."""
    classes: dict[frozenset[int], int] = {}
    for i in bits(system.union):
        sig = frozenset(m for m in system.members if m >> i & 1)
        classes[sig] = classes.get(sig, 0) | (1 << i)
    return tuple(sorted(classes.values(), key=key))
