"""Brute-force optima for small graphs, used as test oracles."""

from __future__ import annotations

from itertools import combinations
from typing import List, Tuple

from .errors import DomainError, PreconditionError
from .graph import Graph

MDS_CAP = 24
CDS_CAP = 20


def brute_force_mds(graph: Graph, cap: int = MDS_CAP) -> Tuple[int, List[int]]:
    """Exact minimum dominating set by subset enumeration, smallest first."""
    n = graph.n
    if n > cap:
        raise PreconditionError(f"brute force capped at {cap} nodes, got {n}")
    if n == 0:
        return 0, []
    masks = graph.closed_masks()
    full = (1 << n) - 1
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            covered = 0
            for v in subset:
                covered |= masks[v]
            if covered == full:
                return size, list(subset)
    raise DomainError("unreachable: the full node set always dominates")


def brute_force_cds(graph: Graph, cap: int = CDS_CAP) -> Tuple[int, List[int]]:
    """Exact minimum connected dominating set (connected input required)."""
    n = graph.n
    if n > cap:
        raise PreconditionError(f"brute force capped at {cap} nodes, got {n}")
    if not graph.is_connected():
        raise PreconditionError("connected dominating sets need a connected graph")
    if n == 0:
        return 0, []
    if n == 1:
        return 1, [0]
    masks = graph.closed_masks()
    full = (1 << n) - 1
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            covered = 0
            for v in subset:
                covered |= masks[v]
            if covered != full:
                continue
            if graph.subgraph_is_connected(subset):
                return size, list(subset)
    raise DomainError("unreachable: a connected graph's node set qualifies")
