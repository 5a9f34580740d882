"""k-wise independent biased coins from short seeds.

A seed of K = k*b fair bits is read as k elements of GF(2^b), the
coefficients of a degree-(k-1) polynomial.  Evaluating the polynomial at a
node's distinct field point yields a b-bit value that is uniform and k-wise
independent across nodes; comparing it against p * 2^b turns it into a
biased coin with exact marginal p whenever p is a multiple of 2^-b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from .errors import DomainError, PrecisionError


def _gf_mul(a: int, b: int, modulus: int, width: int) -> int:
    res = 0
    top = 1 << width
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return res


@lru_cache(maxsize=None)
def irreducible_poly(width: int) -> int:
    """An irreducible degree-*width* polynomial over GF(2), found by search.

    Candidates are verified with the standard criterion: x^(2^width) == x
    in the quotient ring and x^(2^(width/q)) != x for prime divisors q.
    """
    if width < 1:
        raise DomainError(f"field width must be positive, got {width}")
    if width == 1:
        return 0b11  # x + 1

    def pow_x(exp_log: int, modulus: int) -> int:
        # computes x^(2^exp_log) mod modulus by repeated squaring of x
        val = 0b10
        for _ in range(exp_log):
            val = _gf_mul(val, val, modulus, width)
        return val

    primes = [q for q in range(2, width + 1) if width % q == 0 and _is_prime(q)]
    for cand in range((1 << width) + 1, 1 << (width + 1), 2):
        if pow_x(width, cand) != 0b10:
            continue
        if any(pow_x(width // q, cand) == 0b10 for q in primes):
            continue
        return cand
    raise DomainError(f"no irreducible polynomial of degree {width} found")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


@dataclass
class CoinSource:
    """Seeded family of k-wise independent b-bit uniform values.

    ``points`` assigns each node a distinct nonzero-or-zero field element
    (node ids are used directly); the seed is k field coefficients, stored
    MSB-first as K = k*b bits.
    """

    k: int
    b: int
    points: Dict[int, int]
    seed_bits: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"independence parameter k must be >= 1, got {self.k}")
        if self.b < 1:
            raise DomainError(f"field width b must be >= 1, got {self.b}")
        if len(set(self.points.values())) != len(self.points):
            raise DomainError("evaluation points must be distinct")
        for v, pt in self.points.items():
            if not 0 <= pt < (1 << self.b):
                raise DomainError(
                    f"evaluation point {pt} for node {v} outside GF(2^{self.b})"
                )
        if not self.seed_bits:
            self.seed_bits = [0] * self.K
        if len(self.seed_bits) != self.K:
            raise DomainError(
                f"seed must have K = {self.K} bits, got {len(self.seed_bits)}"
            )

    @property
    def K(self) -> int:
        return self.k * self.b

    def coefficients(self) -> List[int]:
        """The k field elements encoded by the seed, MSB-first per element."""
        coeffs = []
        for i in range(self.k):
            val = 0
            for j in range(self.b):
                val = (val << 1) | self.seed_bits[i * self.b + j]
            coeffs.append(val)
        return coeffs

    def evaluate(self, v: int) -> int:
        """Polynomial evaluation at node v's point (Horner), a b-bit value."""
        if v not in self.points:
            raise DomainError(f"node {v} has no evaluation point")
        pt = self.points[v]
        modulus = irreducible_poly(self.b)
        acc = 0
        for coeff in self.coefficients():
            acc = _gf_mul(acc, pt, modulus, self.b) ^ coeff
        return acc

    def with_seed(self, bits: Sequence[int]) -> "CoinSource":
        return CoinSource(
            k=self.k, b=self.b, points=dict(self.points), seed_bits=list(bits)
        )


def coin_threshold(p: Fraction, b: int) -> int:
    """p * 2^b as an integer; PrecisionError if p is not a multiple of 2^-b."""
    scaled = Fraction(p) * (1 << b)
    if scaled.denominator != 1:
        raise PrecisionError(f"probability {p} is not a multiple of 2**-{b}")
    t = int(scaled)
    if not 0 <= t <= (1 << b):
        raise DomainError(f"probability {p} outside [0, 1]")
    return t


def draw_coin(src: CoinSource, v: int, p: Fraction) -> int:
    """Coin for node v: 1 iff the b-bit evaluation, read as u in [0,1), is < p."""
    t = coin_threshold(p, src.b)
    if t == 0:
        return 0
    if t == 1 << src.b:
        return 1
    return 1 if src.evaluate(v) < t else 0


def make_coin_source(
    node_ids: Sequence[int], k: int, b: Optional[int] = None, n: Optional[int] = None
) -> CoinSource:
    """Coin source with node ids as evaluation points.

    Default width is ceil(log2(n**10)) capped at 16, where n defaults to the
    ambient node count implied by the ids; the field must be large enough to
    give every node a distinct point.
    """
    ids = sorted(set(node_ids))
    ambient = n if n is not None else (max(ids) + 1 if ids else 1)
    if b is None:
        b = min(16, max(1, (max(ambient, 2) ** 10 - 1).bit_length()))
    if ids and max(ids) >= (1 << b):
        b = max(ids).bit_length()
    return CoinSource(k=k, b=b, points={v: v for v in ids})
