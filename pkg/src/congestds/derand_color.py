"""Color-class-ordered derandomization and its degree-parameterized wrappers.

Nodes with undetermined coins are processed color class by color class over a
distance-2 coloring; each node compares the quantized conditional
expectations of its two coin branches and keeps the cheaper one.  Distance-2
separation makes same-colored decisions commute, so a class costs a constant
number of communication rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bipartite import (
    BipartiteRep,
    Coloring,
    bipartite_representation,
    coloring_round_cost,
    coloring_violations,
    greedy_distance2_coloring,
)
from .errors import DomainError, InvariantViolation, PreconditionError
from .graph import Graph
from .rounding import (
    DEFAULT_ENUM_BUDGET,
    CoinLaw,
    IndependentCoinLaw,
    PartialAssignment,
    RoundingInstance,
    conditional_expected_value,
    expected_output_size,
    factor_two_instance,
    one_shot_instance,
    phase1,
    phase2,
    run_phases,
)
from .values import (
    CFDS,
    ONE,
    ZERO,
    ceil_to_multiple,
    fractionality,
    iota_for,
    ln_upper,
    validate_cfds,
)


@dataclass
class DecisionRecord:
    """One node's branch comparison: keep the scaled value iff a1 < a0."""

    node: int
    color: int
    a0: Fraction
    a1: Fraction
    coin: int


@dataclass
class DerandOutcome:
    """Result of a derandomized rounding run plus its replayable decision log."""

    result: CFDS
    decisions: List[DecisionRecord]
    simulated_rounds: int
    initial_expectation: Optional[Fraction] = None
    expectation_log: List[Fraction] = field(default_factory=list)
    charged_rounds: int = 0


def _alpha_sum(
    inst: RoundingInstance,
    law: CoinLaw,
    nodes,
    assignment: PartialAssignment,
    unit: Fraction,
    budget: int,
) -> Fraction:
    total = ZERO
    for u in nodes:
        alpha = conditional_expected_value(inst, law, u, assignment, budget)
        total += ceil_to_multiple(alpha, unit) if alpha > 0 else ZERO
    return total


def derandomize_colorwise(
    inst: RoundingInstance,
    coloring: Coloring,
    budget: int = DEFAULT_ENUM_BUDGET,
    verify: bool = True,
    log_expectations: bool = False,
) -> DerandOutcome:
    """Fix every undetermined coin by conditional expectations, color by color.

    The coloring must cover exactly S = {v : p(v) not in {0, 1}} and be a
    proper distance-2 coloring in the host graph.  Per color class the run
    costs 3 simulated rounds (exchange fixed coins, branch expectations,
    decisions).  With ``verify`` the output size is checked against the
    exact initial expectation plus the quantization slack 1/n^7.
    """
    S = inst.participating()
    if set(coloring.color) != set(S):
        raise PreconditionError(
            "coloring must cover exactly the nodes with fractional p"
        )
    if coloring_violations(inst.graph, coloring):
        raise PreconditionError("coloring is not a proper distance-2 coloring")
    n = max(inst.ambient_n, 2)
    law = IndependentCoinLaw(
        {v: inst.p[v] for v in S}, b=iota_for(n)
    )
    unit = Fraction(1, n**10)
    assignment = PartialAssignment()
    initial = (
        expected_output_size(inst, law, assignment, budget) if verify else None
    )
    decisions: List[DecisionRecord] = []
    expectation_log: List[Fraction] = []
    for color_idx, members in enumerate(coloring.classes(), start=1):
        for v in members:
            affected = inst.graph.closed_neighbors(v)
            sums = {}
            for branch in (0, 1):
                trial = assignment.copy()
                trial.fix_coin(v, branch)
                sums[branch] = _alpha_sum(inst, law, affected, trial, unit, budget)
            coin = 1 if sums[1] < sums[0] else 0
            assignment.fix_coin(v, coin)
            decisions.append(
                DecisionRecord(
                    node=v, color=color_idx, a0=sums[0], a1=sums[1], coin=coin
                )
            )
            if log_expectations:
                expectation_log.append(
                    expected_output_size(inst, law, assignment, budget)
                )
    result = run_phases(inst, law, assignment)
    bad = validate_cfds(inst.graph, result)
    if bad:
        raise InvariantViolation(f"derandomized output violates constraints at {bad}")
    if verify and initial is not None:
        slack = Fraction(1, n**7)
        if result.size > initial + slack:
            raise InvariantViolation(
                f"output size {result.size} exceeds expectation {initial} + 1/n^7"
            )
    return DerandOutcome(
        result=result,
        decisions=decisions,
        simulated_rounds=3 * coloring.num_colors,
        initial_expectation=initial,
        expectation_log=expectation_log,
    )


# -- degree-parameterized wrappers ------------------------------------------


def _check_fractional(xprime: CFDS, r: int, label: str) -> None:
    for v, val in xprime.x.items():
        if val > 0 and val < Fraction(1, r):
            raise PreconditionError(
                f"{label}: x'({v}) = {val} below the required fractionality 1/{r}"
            )


def _covering_sets(graph: Graph, xprime: CFDS, cap: int) -> Dict[int, List[int]]:
    """Per node, a <= cap subset of its inclusive neighborhood with x'-mass >= 1."""
    out: Dict[int, List[int]] = {}
    for v in range(graph.n):
        candidates = sorted(
            graph.closed_neighbors(v), key=lambda u: (-xprime.x[u], u)
        )
        picked: List[int] = []
        mass = ZERO
        for u in candidates:
            if mass >= 1:
                break
            picked.append(u)
            mass += xprime.x[u]
        if mass < 1:
            raise PreconditionError(
                f"input is not a valid fractional dominating set at node {v}"
            )
        if len(picked) > cap:
            raise PreconditionError(
                f"covering set of node {v} needs {len(picked)} > {cap} picks"
            )
        out[v] = sorted(picked)
    return out


def delta_one_shot(
    graph: Graph,
    xprime: CFDS,
    F: int,
    budget: int = DEFAULT_ENUM_BUDGET,
    verify: bool = True,
) -> Tuple[CFDS, DerandOutcome]:
    """Deterministic one-shot rounding via the bipartite representation.

    Constraint-side degrees are first capped at F by keeping, per node, a
    covering set of at most F value copies (the 1/F-fractionality guarantees
    one exists).  The value side is then distance-2 colored and the scaled
    instance derandomized color by color; mapping each original node to the
    maximum over its copies yields an integral dominating set.
    """
    _check_fractional(xprime, F, "one-shot")
    dt = graph.delta_tilde
    if dt < 2:
        raise PreconditionError("one-shot rounding needs at least one edge")
    n = graph.n
    covering = _covering_sets(graph, xprime, F)
    edges = [(v, n + u) for v in range(n) for u in covering[v]]
    host = Graph(2 * n, edges)
    ln_dt = ln_upper(dt)
    x = {b: ZERO for b in range(2 * n)}
    p = {b: ZERO for b in range(2 * n)}
    c = {b: ZERO for b in range(2 * n)}
    from .values import quantize_up

    for v in range(n):
        val = xprime.x[v] * ln_dt
        scaled = ONE if val >= 1 else Fraction(quantize_up(val, 2 * n))
        x[n + v] = scaled
        p[n + v] = scaled
        c[v] = ONE
    inst = RoundingInstance(graph=host, x=x, p=p, c=c, ambient_n=2 * n)
    S = inst.participating()
    coloring = greedy_distance2_coloring(host, S)
    if coloring.num_colors > F * dt:
        raise InvariantViolation(
            f"value-side coloring used {coloring.num_colors} > F*Delta~ colors"
        )
    outcome = derandomize_colorwise(inst, coloring, budget=budget, verify=verify)
    delta_l = max((host.degree(v) for v in range(n)), default=0)
    delta_r = max((host.degree(b) for b in range(n, 2 * n)), default=0)
    outcome.charged_rounds = coloring_round_cost(delta_l, delta_r, n)
    mapped = {
        v: max(outcome.result.x[v], outcome.result.x[n + v]) for v in range(n)
    }
    result = CFDS.fds(mapped)
    if not result.is_integral():
        raise InvariantViolation("one-shot output is not integral")
    bad = validate_cfds(graph, result)
    if bad:
        raise InvariantViolation(f"one-shot output not dominating at {bad}")
    return result, outcome


def delta_factor_two(
    graph: Graph,
    xprime: CFDS,
    eps,
    r: int,
    budget: int = DEFAULT_ENUM_BUDGET,
    verify: bool = True,
) -> Tuple[CFDS, DerandOutcome]:
    """Deterministic factor-two rounding via constraint-node splitting.

    Nodes below 2/r after the (1+eps) scaling either double or drop to zero;
    constraint nodes split their participating edges into chunks of size
    [s, 2s) with s = ceil(64 * eps^-2 * ln Delta~) so that each split
    constraint sees enough independent mass.  Split constraints use
    c = min{1, sum of incident x'}.
    """
    from .bipartite import split_left_nodes
    from .values import quantize_up

    eps = Fraction(eps)
    if eps <= 0 or eps > 1:
        raise PreconditionError(f"eps must be in (0, 1], got {eps}")
    _check_fractional(xprime, r, "factor-two")
    dt = graph.delta_tilde
    if dt < 2:
        raise PreconditionError("factor-two rounding needs at least one edge")
    ln_dt = ln_upper(dt)
    if Fraction(r) < 256 * eps**-3 * ln_dt:
        raise PreconditionError(
            f"need r >= 256 * eps^-3 * ln Delta~ = {float(256 * eps**-3 * ln_dt):.1f}, got {r}"
        )
    n = graph.n
    threshold = Fraction(2, r)
    x_orig: Dict[int, Fraction] = {}
    p_orig: Dict[int, Fraction] = {}
    for v in range(n):
        val = (1 + eps) * xprime.x[v]
        x_orig[v] = ONE if val >= 1 else Fraction(quantize_up(val, 2 * n))
        p_orig[v] = Fraction(1, 2) if x_orig[v] < threshold else ONE
    part_nodes = {v for v in range(n) if p_orig[v] == Fraction(1, 2)}
    s = math.ceil(64 * eps**-2 * ln_dt)
    participating = {
        v: [u for u in graph.closed_neighbors(v) if u in part_nodes]
        for v in range(n)
    }
    kept = {
        v: [u for u in graph.closed_neighbors(v) if u not in part_nodes]
        for v in range(n)
    }
    split = split_left_nodes(graph, participating, kept, s)
    host = split.graph
    x = {b: ZERO for b in range(host.n)}
    p = {b: ZERO for b in range(host.n)}
    c = {b: ZERO for b in range(host.n)}
    for v in range(n):
        x[v] = x_orig[v]
        p[v] = p_orig[v]
    for b in split.left_origin:
        mass = sum((xprime.x[u] for u in host.adj[b]), ZERO)
        c[b] = min(ONE, mass)
    inst = RoundingInstance(graph=host, x=x, p=p, c=c, ambient_n=host.n)
    S = inst.participating()
    coloring = greedy_distance2_coloring(host, S)
    if coloring.num_colors > 2 * s * dt:
        raise InvariantViolation(
            f"split coloring used {coloring.num_colors} > 2*s*Delta~ colors"
        )
    outcome = derandomize_colorwise(inst, coloring, budget=budget, verify=verify)
    delta_l = max((host.degree(b) for b in split.left_origin), default=0)
    delta_r = max((host.degree(v) for v in range(n)), default=0)
    outcome.charged_rounds = coloring_round_cost(delta_l, delta_r, n)
    mapped: Dict[int, Fraction] = {}
    for v in range(n):
        best = outcome.result.x[v]
        for b in split.left_copies[v]:
            best = max(best, outcome.result.x[b])
        mapped[v] = best
    result = CFDS.fds(mapped)
    bad = validate_cfds(graph, result)
    if bad:
        raise InvariantViolation(f"factor-two output not dominating at {bad}")
    floor = min(threshold, Fraction(1, math.ceil(256 * eps**-3 * float(ln_dt))))
    if fractionality(result) < floor:
        raise InvariantViolation(
            f"factor-two output fractionality {fractionality(result)} below {floor}"
        )
    return result, outcome
