"""Abstract randomized rounding and exact conditional-expectation oracles.

Phase 1 scales each node's value to x(v)/p(v) with probability p(v) (else 0);
phase 2 puts every node whose constraint is still unsatisfied at value 1.
Both derandomizers drive this process through :class:`PartialAssignment`
objects that pin down coins (or seed bits) one at a time while the engine
here computes exact conditional expectations by enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .coins import CoinSource, coin_threshold, draw_coin
from .errors import DomainError, EnumerationBudgetError, PrecisionError
from .graph import Graph
from .values import CFDS, ONE, ZERO, iota_for, is_multiple_of, ln_upper, quantize_up

#: sentinel for neighborhood sums that already reached the constraint
SAT = "sat"

DEFAULT_ENUM_BUDGET = 24


@dataclass
class RoundingInstance:
    """One rounding step: host graph plus per-node value, probability, constraint.

    ``ambient_n`` sets the fixed-point width for quantization (it may differ
    from ``graph.n`` when the host is an auxiliary graph standing in for a
    smaller original).
    """

    graph: Graph
    x: Dict[int, Fraction]
    p: Dict[int, Fraction]
    c: Dict[int, Fraction]
    ambient_n: int = 0

    def __post_init__(self):
        if self.ambient_n <= 0:
            self.ambient_n = self.graph.n
        self.x = {v: Fraction(val) for v, val in self.x.items()}
        self.p = {v: Fraction(val) for v, val in self.p.items()}
        self.c = {v: Fraction(val) for v, val in self.c.items()}
        nodes = set(range(self.graph.n))
        if set(self.x) != nodes or set(self.p) != nodes or set(self.c) != nodes:
            raise DomainError("x, p, c must cover exactly the host graph's nodes")
        unit = Fraction(1, 1 << iota_for(max(self.ambient_n, 2)))
        for v in nodes:
            if self.p[v] < self.x[v]:
                raise DomainError(f"p({v}) = {self.p[v]} < x({v}) = {self.x[v]}")
            for label, val in (("x", self.x[v]), ("p", self.p[v]), ("c", self.c[v])):
                if val < 0 or val > 1:
                    raise DomainError(f"{label}({v}) = {val} outside [0, 1]")
                if not is_multiple_of(val, unit):
                    raise PrecisionError(
                        f"{label}({v}) = {val} is not transmittable at width "
                        f"{iota_for(max(self.ambient_n, 2))}"
                    )

    def participating(self) -> List[int]:
        """Nodes with 0 < p < 1: the ones whose coin matters."""
        return [v for v in range(self.graph.n) if ZERO < self.p[v] < ONE]

    def ratio(self, v: int) -> Fraction:
        """The phase-1 success value x(v)/p(v), capped at 1 and quantized up."""
        if self.p[v] == 0:
            return ZERO
        val = self.x[v] / self.p[v]
        if val >= 1:
            return ONE
        return Fraction(quantize_up(val, max(self.ambient_n, 2)))

    def deterministic_value(self, v: int) -> Fraction:
        """Phase-1 value of a non-participating node (p in {0, 1})."""
        if self.p[v] == ONE:
            return self.ratio(v)
        return ZERO


def phase1(inst: RoundingInstance, coins: Dict[int, int]) -> Dict[int, Fraction]:
    """Apply the coin outcomes: X_v = x(v)/p(v) on success, 0 on failure."""
    X: Dict[int, Fraction] = {}
    for v in range(inst.graph.n):
        if inst.x[v] == 0:
            X[v] = ZERO
        elif inst.p[v] == ONE:
            X[v] = inst.ratio(v)
        elif inst.p[v] == ZERO:
            X[v] = ZERO
        else:
            if v not in coins:
                raise DomainError(f"participating node {v} has no coin")
            X[v] = inst.ratio(v) if coins[v] else ZERO
    return X


def phase2(inst: RoundingInstance, X: Dict[int, Fraction]) -> CFDS:
    """Raise every node with an unsatisfied constraint to value 1."""
    z: Dict[int, Fraction] = {}
    for v in range(inst.graph.n):
        total = X[v] + sum((X[u] for u in inst.graph.adj[v]), ZERO)
        z[v] = ONE if total < inst.c[v] else X[v]
    return CFDS(x=z, c=dict(inst.c))


def one_shot_instance(
    graph: Graph, xprime: CFDS, delta_tilde: Optional[int] = None, ambient_n: int = 0
) -> RoundingInstance:
    """Scale values by ln(max inclusive-neighborhood size) and set p = x."""
    if delta_tilde is None:
        delta_tilde = graph.delta_tilde
    if delta_tilde < 2:
        raise DomainError(
            f"one-shot rounding needs max inclusive neighborhood >= 2, got {delta_tilde}"
        )
    amb = ambient_n or graph.n
    ln_dt = ln_upper(delta_tilde)
    x: Dict[int, Fraction] = {}
    for v in range(graph.n):
        val = xprime.x[v] * ln_dt
        x[v] = ONE if val >= 1 else Fraction(quantize_up(val, max(amb, 2)))
    return RoundingInstance(
        graph=graph, x=x, p=dict(x), c=dict(xprime.c), ambient_n=amb
    )


def factor_two_instance(
    graph: Graph, xprime: CFDS, eps, r: int, ambient_n: int = 0
) -> RoundingInstance:
    """Scale values by (1+eps); nodes below 2/r double with probability 1/2."""
    if r < 1:
        raise DomainError(f"fractionality parameter r must be >= 1, got {r}")
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    amb = ambient_n or graph.n
    threshold = Fraction(2, r)
    x: Dict[int, Fraction] = {}
    p: Dict[int, Fraction] = {}
    for v in range(graph.n):
        val = (1 + eps) * xprime.x[v]
        x[v] = ONE if val >= 1 else Fraction(quantize_up(val, max(amb, 2)))
        p[v] = Fraction(1, 2) if x[v] < threshold else ONE
    return RoundingInstance(graph=graph, x=x, p=p, c=dict(xprime.c), ambient_n=amb)


# -- partial assignments and coin laws --------------------------------------


@dataclass
class PartialAssignment:
    """Which coins and seed bits are pinned; everything else stays free.

    ``coins`` fixes a node's coin outright (the color-ordered scheme);
    ``seed_bits`` fixes individual bits of a group's seed (the cluster
    scheme), keyed by the law's group key.
    """

    coins: Dict[int, int] = field(default_factory=dict)
    seed_bits: Dict[Hashable, Dict[int, int]] = field(default_factory=dict)

    def fix_coin(self, v: int, value: int) -> None:
        if self.coins.get(v, value) != value:
            raise DomainError(f"coin of node {v} already fixed differently")
        self.coins[v] = int(value)

    def fix_bit(self, key: Hashable, index: int, value: int) -> None:
        bits = self.seed_bits.setdefault(key, {})
        if bits.get(index, value) != value:
            raise DomainError(f"seed bit {index} of group {key!r} already fixed")
        bits[index] = int(value)

    def copy(self) -> "PartialAssignment":
        return PartialAssignment(
            coins=dict(self.coins),
            seed_bits={k: dict(b) for k, b in self.seed_bits.items()},
        )


class CoinLaw:
    """Joint distribution of the participating nodes' coins.

    Coins are organized in independent *groups* (one per node for fully
    independent coins, one per cluster for shared seeds); distinct groups are
    mutually independent, so neighborhood expectations combine group
    distributions by dynamic programming over capped sums.
    """

    def nodes(self) -> Sequence[int]:
        raise NotImplementedError

    def group_of(self, v: int) -> Hashable:
        raise NotImplementedError

    def group_members(self, key: Hashable) -> Sequence[int]:
        raise NotImplementedError

    def free_bits(self, key: Hashable, assignment: PartialAssignment) -> int:
        """Bits that exhaustive enumeration would have to range over."""
        raise NotImplementedError

    def distribution(
        self,
        key: Hashable,
        targets: Sequence[int],
        assignment: PartialAssignment,
    ) -> List[Tuple[Fraction, Dict[int, int]]]:
        """Exact joint law of the targets' coins given the assignment."""
        raise NotImplementedError

    def resolved_coin(
        self, v: int, assignment: PartialAssignment
    ) -> Optional[int]:
        """The coin of v if the assignment already determines it, else None."""
        dist = self.distribution(self.group_of(v), [v], assignment)
        if len(dist) == 1:
            return dist[0][1][v]
        return None

    def final_coins(self, assignment: PartialAssignment) -> Dict[int, int]:
        """All coins once the assignment determines every one of them."""
        out: Dict[int, int] = {}
        for v in self.nodes():
            coin = self.resolved_coin(v, assignment)
            if coin is None:
                raise DomainError(f"coin of node {v} is still undetermined")
            out[v] = coin
        return out


class IndependentCoinLaw(CoinLaw):
    """Fully independent coins, one private b-bit uniform string per node.

    A node's coin is 1 iff its string, read as a value in [0,1), is below
    p(v).  Fixing the string's bits most-significant first leaves a coin
    probability with a closed form, so conditional expectations never need
    bit enumeration here: an unresolved coin costs one budget unit.
    """

    def __init__(self, p: Dict[int, Fraction], b: int):
        self.p = {v: Fraction(val) for v, val in p.items()}
        self.b = b
        self.thresholds = {v: coin_threshold(val, b) for v, val in self.p.items()}

    def nodes(self) -> Sequence[int]:
        return sorted(self.p)

    def group_of(self, v: int) -> Hashable:
        return ("coin", v)

    def group_members(self, key: Hashable) -> Sequence[int]:
        return [key[1]]

    def _prefix(self, v: int, assignment: PartialAssignment) -> Tuple[int, int]:
        bits = assignment.seed_bits.get(("coin", v), {})
        j = 0
        val = 0
        while j in bits:
            val = (val << 1) | bits[j]
            j += 1
        if len(bits) != j:
            raise DomainError(
                f"seed bits of node {v} must be fixed most-significant first"
            )
        return j, val

    def marginal(self, v: int, assignment: PartialAssignment) -> Fraction:
        """Pr(coin_v = 1) given the fixed coin or string prefix."""
        if v in assignment.coins:
            return Fraction(assignment.coins[v])
        j, prefix = self._prefix(v, assignment)
        rem = self.b - j
        lo = prefix << rem
        width = 1 << rem
        good = min(max(self.thresholds[v] - lo, 0), width)
        return Fraction(good, width)

    def free_bits(self, key: Hashable, assignment: PartialAssignment) -> int:
        q = self.marginal(key[1], assignment)
        return 0 if q in (ZERO, ONE) else 1

    def distribution(self, key, targets, assignment):
        (v,) = targets
        q = self.marginal(v, assignment)
        out = []
        if q > 0:
            out.append((q, {v: 1}))
        if q < 1:
            out.append((1 - q, {v: 0}))
        return out

    def seed_length(self, v: int) -> int:
        return self.b


class SeededCoinLaw(CoinLaw):
    """Coins of one group extracted from a shared short seed.

    All coins of the group depend on every seed bit, so conditional
    expectations enumerate all completions of the free bits exactly.
    """

    def __init__(self, key: Hashable, source: CoinSource, p: Dict[int, Fraction]):
        unknown = set(p) - set(source.points)
        if unknown:
            raise DomainError(f"nodes {sorted(unknown)} have no evaluation point")
        self.key = key
        self.source = source
        self.p = {v: Fraction(val) for v, val in p.items()}

    def nodes(self) -> Sequence[int]:
        return sorted(self.p)

    def group_of(self, v: int) -> Hashable:
        return self.key

    def group_members(self, key: Hashable) -> Sequence[int]:
        return self.nodes()

    def _free_indices(self, assignment: PartialAssignment) -> List[int]:
        fixed = assignment.seed_bits.get(self.key, {})
        return [i for i in range(self.source.K) if i not in fixed]

    def free_bits(self, key: Hashable, assignment: PartialAssignment) -> int:
        return len(self._free_indices(assignment))

    def distribution(self, key, targets, assignment):
        fixed = assignment.seed_bits.get(self.key, {})
        free = self._free_indices(assignment)
        outcomes: Dict[Tuple[int, ...], Fraction] = {}
        weight = Fraction(1, 1 << len(free))
        for completion in itertools.product((0, 1), repeat=len(free)):
            bits = [0] * self.source.K
            for i, val in fixed.items():
                bits[i] = val
            for i, val in zip(free, completion):
                bits[i] = val
            src = self.source.with_seed(bits)
            vec = tuple(draw_coin(src, v, self.p[v]) for v in targets)
            outcomes[vec] = outcomes.get(vec, ZERO) + weight
        return [
            (prob, dict(zip(targets, vec)))
            for vec, prob in sorted(outcomes.items())
        ]

    def seed_length(self) -> int:
        return self.source.K


class CompositeCoinLaw(CoinLaw):
    """Disjoint union of independent sub-laws (e.g. one per cluster)."""

    def __init__(self, laws: Sequence[CoinLaw]):
        self.laws = list(laws)
        self._owner: Dict[int, CoinLaw] = {}
        for law in self.laws:
            for v in law.nodes():
                if v in self._owner:
                    raise DomainError(f"node {v} belongs to two coin laws")
                self._owner[v] = law
        self._group_owner: Dict[Hashable, CoinLaw] = {}
        for law in self.laws:
            for v in law.nodes():
                self._group_owner[law.group_of(v)] = law

    def nodes(self) -> Sequence[int]:
        return sorted(self._owner)

    def group_of(self, v: int) -> Hashable:
        return self._owner[v].group_of(v)

    def group_members(self, key: Hashable) -> Sequence[int]:
        return self._group_owner[key].group_members(key)

    def free_bits(self, key: Hashable, assignment: PartialAssignment) -> int:
        return self._group_owner[key].free_bits(key, assignment)

    def distribution(self, key, targets, assignment):
        return self._group_owner[key].distribution(key, targets, assignment)


# -- exact expectation engine ------------------------------------------------


def _neighborhood_states(
    inst: RoundingInstance,
    law: CoinLaw,
    center: int,
    assignment: PartialAssignment,
    budget: int,
) -> Dict[Tuple[Optional[int], Any], Fraction]:
    """Joint law of (center's coin, capped inclusive-neighborhood sum).

    Sums are tracked exactly up to c(center); anything at or above the
    constraint collapses into the ``SAT`` state.  Groups outside the closed
    neighborhood are irrelevant and never enumerated.
    """
    cap = inst.c[center]
    relevant = inst.graph.closed_neighbors(center)
    participating = set(law.nodes()) & set(relevant)
    base = ZERO
    for w in relevant:
        if w not in participating:
            base += inst.deterministic_value(w)

    group_targets: Dict[Hashable, List[int]] = {}
    for w in sorted(participating):
        group_targets.setdefault(law.group_of(w), []).append(w)
    keys = sorted(group_targets, key=repr)
    total_free = sum(law.free_bits(k, assignment) for k in keys)
    if total_free > budget:
        raise EnumerationBudgetError(
            f"neighborhood of node {center} needs {total_free} free bits "
            f"(budget {budget})"
        )

    def capped(s: Fraction):
        return SAT if s >= cap else s

    states: Dict[Tuple[Optional[int], Any], Fraction] = {(None, capped(base)): ONE}
    for key in keys:
        targets = group_targets[key]
        dist = law.distribution(key, targets, assignment)
        nxt: Dict[Tuple[Optional[int], Any], Fraction] = {}
        for (cc, s), prob in states.items():
            for dprob, coins in dist:
                add = sum(
                    (inst.ratio(w) for w in targets if coins[w]), ZERO
                )
                new_cc = coins[center] if center in coins else cc
                new_s = SAT if s == SAT else capped(s + add)
                state = (new_cc, new_s)
                nxt[state] = nxt.get(state, ZERO) + prob * dprob
        states = nxt
    return states


def exact_uncover_prob(
    inst: RoundingInstance,
    law: CoinLaw,
    v: int,
    assignment: Optional[PartialAssignment] = None,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Fraction:
    """Pr(v's inclusive-neighborhood phase-1 sum falls short of c(v))."""
    assignment = assignment or PartialAssignment()
    states = _neighborhood_states(inst, law, v, assignment, budget)
    return sum((prob for (cc, s), prob in states.items() if s != SAT), ZERO)


def conditional_expected_value(
    inst: RoundingInstance,
    law: CoinLaw,
    u: int,
    assignment: Optional[PartialAssignment] = None,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Fraction:
    """E[Z_u] where Z_u = 1 if u ends phase 1 uncovered, else X_u."""
    assignment = assignment or PartialAssignment()
    states = _neighborhood_states(inst, law, u, assignment, budget)
    fallback = inst.deterministic_value(u)
    total = ZERO
    for (cc, s), prob in states.items():
        if s != SAT:
            total += prob
        else:
            xu = fallback if cc is None else (inst.ratio(u) if cc else ZERO)
            total += prob * xu
    return total


def expected_output_size(
    inst: RoundingInstance,
    law: CoinLaw,
    assignment: Optional[PartialAssignment] = None,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Fraction:
    """Exact expected phase-2 output size: sum of E[Z_v] over all nodes."""
    return sum(
        (
            conditional_expected_value(inst, law, v, assignment, budget)
            for v in range(inst.graph.n)
        ),
        ZERO,
    )


def run_phases(
    inst: RoundingInstance, law: CoinLaw, assignment: PartialAssignment
) -> CFDS:
    """Phase 1 with fully determined coins, then phase 2."""
    coins = law.final_coins(assignment)
    return phase2(inst, phase1(inst, coins))
