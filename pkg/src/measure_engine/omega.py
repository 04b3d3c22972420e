"""Normed Abelian Ω-groups over the rationals.

An Ω-group here is an Abelian group with a norm, an action of the rationals,
and extra finitary operations ``ω``, each declared with a constant ``|ω|``
such that ``‖ω(a1, …, an)‖ ≤ |ω| · ‖a1‖ ⋯ ‖an‖``.  Integrals of simple maps take
values in one of these.  Elements are plain immutable values (a
``Fraction`` or a tuple of them); the group object supplies the operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import PreconditionError
from .report import Report, fmt


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    apply: Callable
    bound: Fraction


def _rand_rat(rng: random.Random, size: int = 6) -> Fraction:
    if rng.random() < 0.15:
        return Fraction(0)
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


class OmegaGroup:
    name: str = ""
    zero = None
    operations: tuple[Operation, ...] = ()

    def add(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def norm(self, a) -> Fraction: raise NotImplementedError
    def scalar(self, q: Fraction, a): raise NotImplementedError
    def random(self, rng: random.Random): raise NotImplementedError
    def parse(self, raw): raise NotImplementedError
    def dump(self, a): raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sum(self, items):
        total = self.zero
        for x in items:
            total = self.add(total, x)
        return total

    def operation(self, name: str) -> Operation:
        for op in self.operations:
            if op.name == name:
                return op
        raise PreconditionError(f"{self.name} has no operation {name!r}")

    @property
    def mul(self) -> Operation:
        return self.operation("mul")

    def format(self, a) -> str:
        dumped = self.dump(a)
        return dumped if isinstance(dumped, str) else "(" + ", ".join(dumped) + ")"

    def __repr__(self):
        return f"{type(self).__name__}()"


class RatScalar(OmegaGroup):
    """ℚ with multiplication, ``|ω| = 1``, norm ``|·|``."""

    name = "ratscalar"
    zero = Fraction(0)
    one = Fraction(1)

    def __init__(self):
        self.operations = (Operation("mul", 2, lambda a, b: a * b, Fraction(1)),)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def norm(self, a):
        return abs(a)

    def scalar(self, q, a):
        return Fraction(q) * a

    def random(self, rng):
        return _rand_rat(rng)

    def parse(self, raw):
        from .interval import rat

        return rat(raw)

    def dump(self, a):
        return fmt(a)


class RatVec3(OmegaGroup):
    """ℚ³, componentwise product, ``|ω| = 1``, max-abs norm."""

    name = "ratvec3"
    zero = (Fraction(0),) * 3
    one = (Fraction(1),) * 3

    def __init__(self):
        self.operations = (
            Operation("mul", 2, lambda a, b: tuple(x * y for x, y in zip(a, b)), Fraction(1)),
        )

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def norm(self, a):
        return max(abs(x) for x in a)

    def scalar(self, q, a):
        q = Fraction(q)
        return tuple(q * x for x in a)

    def random(self, rng):
        return tuple(_rand_rat(rng) for _ in range(3))

    def parse(self, raw):
        from .interval import rat

        if not isinstance(raw, (list, tuple)) or len(raw) != 3:
            raise PreconditionError("ratvec3 value must be a list of 3 rationals")
        return tuple(rat(x) for x in raw)

    def dump(self, a):
        return [fmt(x) for x in a]


def _matmul(a, b):
    a11, a12, a21, a22 = a
    b11, b12, b21, b22 = b
    return (
        a11 * b11 + a12 * b21,
        a11 * b12 + a12 * b22,
        a21 * b11 + a22 * b21,
        a21 * b12 + a22 * b22,
    )


class RatMat2(OmegaGroup):
    """2×2 rational matrices (row-major tuples), matrix product, max-abs-entry norm.

    Each entry of a product is a sum of two entry products, hence ``|ω| = 2``.
    """

    name = "ratmat2"
    zero = (Fraction(0),) * 4
    one = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    def __init__(self):
        self.operations = (Operation("mul", 2, _matmul, Fraction(2)),)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def norm(self, a):
        return max(abs(x) for x in a)

    def scalar(self, q, a):
        q = Fraction(q)
        return tuple(q * x for x in a)

    def random(self, rng):
        return tuple(_rand_rat(rng) for _ in range(4))

    def parse(self, raw):
        from .interval import rat

        if isinstance(raw, (list, tuple)) and len(raw) == 2 and all(isinstance(r, (list, tuple)) for r in raw):
            raw = [x for row in raw for x in row]
        if not isinstance(raw, (list, tuple)) or len(raw) != 4:
            raise PreconditionError("ratmat2 value must be 4 rationals (row-major) or a 2x2 list")
        return tuple(rat(x) for x in raw)

    def dump(self, a):
        return [fmt(x) for x in a]


# ‖AB‖ = 2‖A‖‖B‖ for the all-ones matrix
RATMAT2_TIGHT_PAIR = ((Fraction(1),) * 4, (Fraction(1),) * 4)

GROUPS: dict[str, OmegaGroup] = {g.name: g for g in (RatScalar(), RatVec3(), RatMat2())}


def get_group(name: str) -> OmegaGroup:
    try:
        return GROUPS[name]
    except KeyError:
        raise PreconditionError(f"unknown omega group {name!r}; expected one of {sorted(GROUPS)}") from None


def _size(sample: Sequence) -> Fraction:
    total = Fraction(0)
    for x in sample:
        for q in (x if isinstance(x, tuple) else (x,)):
            total += abs(q.numerator) + q.denominator
    return total


def law_suite(group: OmegaGroup, samples: int = 200, seed: int = 0) -> Report:
    """Group, norm, operation-bound and scalar-action laws on random samples.

    A failing law reports its smallest counterexample among the samples.
    """
    rng = random.Random(seed)
    g = group
    laws: dict[str, Callable] = {
        "add commutative": lambda a, b, c, q, r: g.add(a, b) == g.add(b, a),
        "add associative": lambda a, b, c, q, r: g.add(g.add(a, b), c) == g.add(a, g.add(b, c)),
        "zero identity": lambda a, b, c, q, r: g.add(a, g.zero) == a,
        "inverse": lambda a, b, c, q, r: g.add(a, g.neg(a)) == g.zero,
        "norm nonnegative": lambda a, b, c, q, r: g.norm(a) >= 0,
        "norm zero iff zero": lambda a, b, c, q, r: (g.norm(a) == 0) == (a == g.zero),
        "norm triangle": lambda a, b, c, q, r: g.norm(g.add(a, b)) <= g.norm(a) + g.norm(b),
        "norm of negation": lambda a, b, c, q, r: g.norm(g.neg(a)) == g.norm(a),
        "scalar distributes over add": lambda a, b, c, q, r: g.scalar(q, g.add(a, b)) == g.add(g.scalar(q, a), g.scalar(q, b)),
        "scalar distributes over sum": lambda a, b, c, q, r: g.scalar(q + r, a) == g.add(g.scalar(q, a), g.scalar(r, a)),
        "scalar associative": lambda a, b, c, q, r: g.scalar(q * r, a) == g.scalar(q, g.scalar(r, a)),
        "scalar unit": lambda a, b, c, q, r: g.scalar(1, a) == a,
        "scalar norm": lambda a, b, c, q, r: g.norm(g.scalar(q, a)) == abs(q) * g.norm(a),
    }
    for op in g.operations:
        def bound(a, b, c, q, r, op=op):
            args = (a, b, c)[: op.arity]
            prod = Fraction(1)
            for x in args:
                prod *= g.norm(x)
            return g.norm(op.apply(*args)) <= op.bound * prod
        laws[f"{op.name} norm bound |ω|={fmt(op.bound)}"] = bound

    cases = []
    for _ in range(samples):
        cases.append((g.random(rng), g.random(rng), g.random(rng), _rand_rat(rng), _rand_rat(rng)))
    report = Report(f"laws-{g.name}")
    for name, law in laws.items():
        failing = [case for case in cases if not law(*case)]
        if failing:
            worst = min(failing, key=_size)
            report.add(name, False, anchor="omega.laws",
                       witness="; ".join(g.format(x) for x in worst[:3]) + f"; q={fmt(worst[3])}, r={fmt(worst[4])}")
        else:
            report.add(name, True, anchor="omega.laws", values={"samples": str(samples)})
    zero_norm = g.norm(g.zero) == 0
    report.add("norm(zero) = 0", zero_norm, anchor="omega.laws")
    return report
