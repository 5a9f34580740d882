"""Exact fixed-point arithmetic and constrained fractional dominating sets.

All invariant-bearing values are dyadic rationals: multiples of ``2**-iota``
where ``iota`` is the smallest exponent with ``2**-iota <= n**-10`` for the
ambient node count ``n``.  Such a value fits in a single O(log n)-bit message,
so it can be exchanged in one round.  Everything here is computed with
:class:`fractions.Fraction`; no floating point touches a correctness path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List

from .errors import DomainError

ZERO = Fraction(0)
ONE = Fraction(1)


def iota_for(n: int) -> int:
    """Smallest iota with 2**-iota <= 1/n**10, i.e. ceil(10*log2(n))."""
    if n < 1:
        raise DomainError(f"node count must be positive, got {n}")
    if n == 1:
        return 0
    # exact: smallest i with 2**i >= n**10
    target = n**10
    return (target - 1).bit_length()


class FixedPoint(Fraction):
    """A transmittable value: a multiple of 2**-iota in [0, 1].

    Behaves as a :class:`Fraction`; additionally remembers the scale exponent
    and exposes the unreduced numerator at that scale.
    """

    iota: int

    def __new__(cls, numerator: int, iota: int):
        if numerator < 0 or numerator > (1 << iota):
            raise DomainError(
                f"fixed-point numerator {numerator} out of [0, 2**{iota}]"
            )
        self = super().__new__(cls, numerator, 1 << iota)
        self.iota = iota
        return self

    @property
    def scaled_numerator(self) -> int:
        return int(self * (1 << self.iota))

    @classmethod
    def from_value(cls, value, iota: int) -> "FixedPoint":
        """Round *value* up to the next multiple of 2**-iota (capped at 1)."""
        frac = Fraction(value)
        if frac < 0 or frac > 1:
            raise DomainError(f"value {frac} outside [0, 1]")
        num = -((-frac.numerator << iota) // frac.denominator)  # ceil
        return cls(min(num, 1 << iota), iota)


def quantize_up(value, n: int) -> FixedPoint:
    """Smallest multiple of 2**-iota(n) that is >= value, capped at 1."""
    return FixedPoint.from_value(value, iota_for(n))


def ceil_to_multiple(value: Fraction, unit: Fraction) -> Fraction:
    """Smallest multiple of *unit* that is >= value."""
    q = value / unit
    return unit * (-((-q.numerator) // q.denominator))


def is_multiple_of(value: Fraction, unit: Fraction) -> bool:
    q = Fraction(value) / unit
    return q.denominator == 1


@dataclass
class CFDS:
    """A constrained fractional dominating set: per-node values and constraints.

    ``x`` maps every node to its fractional value and ``c`` to its constraint,
    both in [0, 1].  The pair is valid on a graph G when every node's
    inclusive-neighborhood x-sum reaches its constraint.
    """

    x: Dict[int, Fraction]
    c: Dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.x = {v: Fraction(val) for v, val in self.x.items()}
        if not self.c:
            self.c = {v: ONE for v in self.x}
        else:
            self.c = {v: Fraction(val) for v, val in self.c.items()}
        if set(self.c) != set(self.x):
            raise DomainError("x and c must be defined on the same node set")
        for v, val in self.x.items():
            if val < 0 or val > 1:
                raise DomainError(f"x({v}) = {val} outside [0, 1]")
        for v, val in self.c.items():
            if val < 0 or val > 1:
                raise DomainError(f"c({v}) = {val} outside [0, 1]")

    @property
    def size(self) -> Fraction:
        return sum(self.x.values(), ZERO)

    def nodes(self) -> Iterable[int]:
        return self.x.keys()

    def is_integral(self) -> bool:
        return all(val in (ZERO, ONE) for val in self.x.values())

    def support(self) -> List[int]:
        return [v for v, val in self.x.items() if val > 0]

    @classmethod
    def fds(cls, x: Dict[int, Fraction]) -> "CFDS":
        """FDS: all constraints equal 1."""
        return cls(x=dict(x), c={v: ONE for v in x})

    @classmethod
    def from_set(cls, nodes: Iterable[int], chosen: Iterable[int]) -> "CFDS":
        chosen = set(chosen)
        return cls.fds({v: (ONE if v in chosen else ZERO) for v in nodes})


def validate_cfds(graph, d: CFDS) -> List[int]:
    """Nodes whose inclusive-neighborhood x-sum falls short of their constraint.

    An empty list means the CFDS is valid.  Exact arithmetic throughout.
    """
    if set(d.x) != set(range(graph.n)):
        raise DomainError(
            f"CFDS node set does not match graph nodes 0..{graph.n - 1}"
        )
    violated = []
    for v in range(graph.n):
        total = d.x[v] + sum((d.x[u] for u in graph.adj[v]), ZERO)
        if total < d.c[v]:
            violated.append(v)
    return violated


def fractionality(d: CFDS) -> Fraction:
    """Minimum nonzero value; 1 for the all-zero map (vacuous minimum)."""
    nonzero = [val for val in d.x.values() if val > 0]
    return min(nonzero) if nonzero else ONE


def log_star(n: int) -> int:
    """Iterated logarithm: number of log2 applications until the value <= 1."""
    count = 0
    x = float(n)
    while x > 1.0:
        x = math.log2(x)
        count += 1
    return count


def ln_upper(value: int) -> Fraction:
    """An exact rational upper bound on ln(value), tight to ~1e-15."""
    if value < 1:
        raise DomainError(f"ln of non-positive value {value}")
    approx = math.log(value)
    up = math.nextafter(approx, math.inf)
    return Fraction(up)
