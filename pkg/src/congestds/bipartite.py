"""Bipartite representation of a graph and distance-2 colorings.

Splitting each node into a constraint copy (left) and a value copy (right)
turns the domination constraints into a bipartite covering problem whose
square admits colorings with far fewer colors than the square of the original
graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError, PreconditionError
from .graph import Graph
from .values import CFDS, ZERO, log_star


@dataclass
class BipartiteRep:
    """Double cover of a graph: left ids 0..n-1 (constraints), right n..2n-1 (values).

    Edge (u_L, v_R) exists iff v is in u's inclusive neighborhood.  The CFDS
    carries x on the right side and c on the left side, zero elsewhere.
    """

    graph: Graph
    n_orig: int
    x: Dict[int, Fraction]
    c: Dict[int, Fraction]

    def left(self, v: int) -> int:
        return v

    def right(self, v: int) -> int:
        return self.n_orig + v

    def is_left(self, b: int) -> bool:
        return b < self.n_orig

    def orig(self, b: int) -> int:
        return b if b < self.n_orig else b - self.n_orig

    def left_nodes(self) -> range:
        return range(self.n_orig)

    def right_nodes(self) -> range:
        return range(self.n_orig, 2 * self.n_orig)

    def cfds(self) -> CFDS:
        return CFDS(x=dict(self.x), c=dict(self.c))


def bipartite_representation(graph: Graph, d: CFDS) -> BipartiteRep:
    """Build the bipartite representation of (graph, d)."""
    if set(d.x) != set(range(graph.n)):
        raise DomainError("CFDS node set must match the graph")
    n = graph.n
    edges = []
    for v in range(n):
        for u in graph.closed_neighbors(v):
            edges.append((v, n + u))  # v_L -- u_R
    bg = Graph(2 * n, edges)
    x = {b: ZERO for b in range(2 * n)}
    c = {b: ZERO for b in range(2 * n)}
    for v in range(n):
        x[n + v] = d.x[v]
        c[v] = d.c[v]
    return BipartiteRep(graph=bg, n_orig=n, x=x, c=c)


@dataclass
class Coloring:
    """A coloring of a node subset S with colors 1..num_colors."""

    color: Dict[int, int]
    num_colors: int

    @property
    def members(self) -> List[int]:
        return sorted(self.color)

    def classes(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.num_colors)]
        for v in sorted(self.color):
            out[self.color[v] - 1].append(v)
        return out


def greedy_distance2_coloring(
    graph: Graph, nodes: Iterable[int]
) -> Coloring:
    """Greedy distance-2 coloring of *nodes* within *graph*, ascending id order.

    Two colored nodes conflict when they are adjacent or share a neighbor.
    On the right side of a bipartite graph with side degrees D_L and D_R the
    greedy bound D_R*(D_L-1)+1 stays within the D_L*D_R color budget.
    """
    targets = sorted(set(nodes))
    if not targets:
        return Coloring(color={}, num_colors=0)
    color: Dict[int, int] = {}
    num_colors = 0
    for v in targets:
        used = set()
        # distance <= 2: direct neighbors and neighbors-of-neighbors
        for u in graph.adj[v]:
            if u in color:
                used.add(color[u])
            for w in graph.adj[u]:
                if w != v and w in color:
                    used.add(color[w])
        chosen = 1
        while chosen in used:
            chosen += 1
        color[v] = chosen
        num_colors = max(num_colors, chosen)
    return Coloring(color=color, num_colors=num_colors)


def coloring_side(bip: BipartiteRep, side: str) -> Coloring:
    """Distance-2 color one side ('left' or 'right') of a bipartite rep."""
    if side == "left":
        nodes: Sequence[int] = list(bip.left_nodes())
    elif side == "right":
        nodes = list(bip.right_nodes())
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if not nodes:
        raise PreconditionError("requested side is empty")
    return greedy_distance2_coloring(bip.graph, nodes)


def coloring_violations(graph: Graph, coloring: Coloring) -> List[Tuple[int, int]]:
    """Same-colored pairs at distance <= 2, found by a BFS oracle."""
    bad = []
    members = coloring.members
    for i, u in enumerate(members):
        near = graph.bfs_distances(u, limit=2)
        for v in members[i + 1 :]:
            if coloring.color[u] == coloring.color[v] and v in near:
                bad.append((u, v))
    return bad


def coloring_round_cost(
    delta_l: int, delta_r: int, n: int, cost_model: str = "congest"
) -> int:
    """Charged cost of the cited distributed distance-2 coloring algorithm."""
    if cost_model == "congest":
        return delta_l * delta_r + delta_l * log_star(n)
    if cost_model == "local":
        return delta_l * delta_r + log_star(n)
    raise DomainError(f"unknown cost model {cost_model!r}")


@dataclass
class SplitBipartite:
    """Bipartite graph whose left (constraint) nodes have been split.

    Right ids are 0..n-1 (one value copy per original node); left split
    copies follow.  ``left_origin[b] = (orig, copy_index)`` with copy index 0
    for the v_1 node carrying the non-participating edges.
    """

    graph: Graph
    n_orig: int
    s: int
    right_of: Dict[int, int]
    left_copies: Dict[int, List[int]]
    left_origin: Dict[int, Tuple[int, int]]
    x: Dict[int, Fraction] = field(default_factory=dict)
    c: Dict[int, Fraction] = field(default_factory=dict)
    p: Dict[int, Fraction] = field(default_factory=dict)

    def right_nodes(self) -> range:
        return range(self.n_orig)

    def left_nodes(self) -> range:
        return range(self.n_orig, self.graph.n)


def split_left_nodes(
    graph: Graph,
    participating: Dict[int, List[int]],
    kept: Dict[int, List[int]],
    s: int,
) -> SplitBipartite:
    """Split each constraint node's participating edges into chunks of size [s, 2s).

    *participating[v]* lists the original-graph neighbors of v (inclusive)
    whose value copies take part in the rounding; *kept[v]* lists the rest.
    The v_1 copy keeps all ``kept`` edges, plus the participating ones when
    there are fewer than s of them.  Otherwise the participating edges are
    divided, in ascending right-node order, into floor(m/s) chunks of
    near-equal size, one chunk per extra copy.
    """
    if s < 1:
        raise DomainError(f"split parameter s must be >= 1, got {s}")
    n = graph.n
    edges: List[Tuple[int, int]] = []
    right_of = {v: v for v in range(n)}
    left_copies: Dict[int, List[int]] = {}
    left_origin: Dict[int, Tuple[int, int]] = {}
    next_id = n
    for v in range(n):
        part = sorted(participating.get(v, []))
        keep = sorted(kept.get(v, []))
        chunks: List[List[int]]
        if len(part) < s:
            chunks = [keep + part]
        else:
            q = len(part) // s
            base, extra = divmod(len(part), q)
            sizes = [base + 1] * extra + [base] * (q - extra)
            chunks = [keep]
            pos = 0
            for size in sizes:
                chunks.append(part[pos : pos + size])
                pos += size
        ids = []
        for idx, chunk in enumerate(chunks):
            b = next_id
            next_id += 1
            ids.append(b)
            left_origin[b] = (v, idx)
            for u in chunk:
                edges.append((b, u))
        left_copies[v] = ids
    return SplitBipartite(
        graph=Graph(next_id, edges),
        n_orig=n,
        s=s,
        right_of=right_of,
        left_copies=left_copies,
        left_origin=left_origin,
    )
