"""Initial fractional dominating sets via a centrally solved covering LP.

The distributed LP approximation this stands in for is cited work; here the
covering LP min sum(x) s.t. sum over inclusive neighborhoods >= 1 is solved
centrally and its round cost charged.  The float solution is repaired into
an exactly feasible rational one: scale up by the worst constraint slack,
cap at 1, quantize upward, validate with exact arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError, StructuralError
from .graph import Graph
from .sim import RoundStats, charge_oracle
from .values import CFDS, ONE, ZERO, quantize_up, validate_cfds


def lp_round_charge(tol: Fraction, delta: int) -> int:
    """Charged rounds of the cited distributed LP solver: tol^-4 * log2^2(Delta+2)."""
    return math.ceil(float(tol) ** -4 * math.log2(delta + 2) ** 2)


def lp_fractional_opt(
    graph: Graph, tol, stats: Optional[RoundStats] = None
) -> CFDS:
    """A fractional dominating set of size <= (1+tol)*OPT_frac.

    Exactly feasible by construction; the solver's float output is repaired
    upward, which can only grow the objective by a vanishing amount relative
    to tol at desk scale.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    n = graph.n
    if n == 0:
        raise DomainError("empty graph")
    if stats is not None:
        charge_oracle(stats, lp_round_charge(tol, graph.max_degree), "lp-solver")
    if graph.max_degree == 0:
        return CFDS.fds({v: ONE for v in range(n)})
    return CFDS.fds(dict(enumerate(_lp_solution(graph))))


@lru_cache(maxsize=65536)
def _lp_solution(graph: Graph) -> Tuple[Fraction, ...]:
    """Repaired, exactly feasible LP solution (depends only on the graph)."""
    n = graph.n
    A = np.zeros((n, n))
    for v in range(n):
        A[v, v] = 1.0
        for u in graph.adj[v]:
            A[v, u] = 1.0
    res = linprog(
        c=np.ones(n),
        A_ub=-A,
        b_ub=-np.ones(n),
        bounds=[(0.0, 1.0)] * n,
        method="highs",
    )
    if not res.success:
        raise StructuralError(f"covering LP failed: {res.message}")
    raw = [Fraction(min(max(float(val), 0.0), 1.0)) for val in res.x]
    min_sum = min(
        raw[v] + sum((raw[u] for u in graph.adj[v]), ZERO) for v in range(n)
    )
    if min_sum <= 0:
        raise StructuralError("LP produced an all-zero neighborhood")
    if min_sum < 1:
        raw = [min(ONE, val / min_sum) for val in raw]
    x = {v: Fraction(quantize_up(raw[v], n)) for v in range(n)}
    d = CFDS.fds(x)
    bad = validate_cfds(graph, d)
    if bad:
        raise StructuralError(f"repaired LP solution infeasible at {bad}")
    return tuple(d.x[v] for v in range(n))


def initial_fds(
    graph: Graph, eps, stats: Optional[RoundStats] = None
) -> CFDS:
    """An (1+eps)-approximate fractional dominating set, eps/(2*Delta)-fractional.

    Solves the LP at tolerance eps/2, then lifts every value below
    eps/(2*Delta) up to it so later rounding stages get the fractionality
    they need; the lift costs at most n * eps/(2*Delta) <= eps/2 * OPT extra.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    n = graph.n
    delta = graph.max_degree
    if delta == 0:
        return CFDS.fds({v: ONE for v in range(n)})
    base = lp_fractional_opt(graph, eps / 2, stats)
    floor = Fraction(quantize_up(min(ONE, eps / (2 * delta)), n))
    x = {v: max(base.x[v], floor) for v in range(n)}
    return CFDS.fds(x)
