"""Undirected simple graphs with dense integer ids and BFS utilities."""

from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import DomainError


class Graph:
    """Simple undirected graph on nodes 0..n-1 with sorted adjacency lists."""

    __slots__ = ("n", "adj", "_closed_masks")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]]):
        if n < 0:
            raise DomainError(f"negative node count {n}")
        adj: List[Set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DomainError(f"self-loop at node {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adj: List[List[int]] = [sorted(s) for s in adj]
        self._closed_masks: Optional[List[int]] = None

    # -- basic accessors ---------------------------------------------------

    def neighbors(self, v: int) -> List[int]:
        return self.adj[v]

    def closed_neighbors(self, v: int) -> List[int]:
        """Inclusive neighborhood, ascending."""
        out = list(self.adj[v])
        out.append(v)
        out.sort()
        return out

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def delta_tilde(self) -> int:
        """Maximum inclusive-neighborhood size (max degree + 1)."""
        return self.max_degree + 1 if self.n else 0

    def edges(self) -> Iterable[Tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def closed_masks(self) -> List[int]:
        """Bitmask of each node's inclusive neighborhood (nodes as bits)."""
        if self._closed_masks is None:
            masks = []
            for v in range(self.n):
                m = 1 << v
                for u in self.adj[v]:
                    m |= 1 << u
                masks.append(m)
            self._closed_masks = masks
        return self._closed_masks

    # -- traversal ---------------------------------------------------------

    def bfs_distances(self, src: int, limit: Optional[int] = None) -> Dict[int, int]:
        """Hop distances from src; nodes beyond *limit* are omitted."""
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if limit is not None and dist[u] >= limit:
                continue
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distance(self, u: int, v: int) -> float:
        d = self.bfs_distances(u)
        return d.get(v, float("inf"))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(self.bfs_distances(0)) == self.n

    def connected_components(self) -> List[List[int]]:
        seen: Set[int] = set()
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = sorted(self.bfs_distances(s))
            seen.update(comp)
            comps.append(comp)
        return comps

    def subgraph_is_connected(self, nodes: Sequence[int]) -> bool:
        """Connectivity of the induced subgraph on *nodes*."""
        node_set = set(nodes)
        if not node_set:
            return True
        start = next(iter(node_set))
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w in node_set and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(node_set)

    # -- equality / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, tuple(tuple(a) for a in self.adj)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


# -- file format -----------------------------------------------------------
#
# Plain text: one edge "u v" per line, 0-based ids, '#' starts a comment,
# blank lines ignored.  An optional header "n <count>" pins the node count
# so trailing isolated nodes survive a round trip.


def parse_graph(text: str) -> Graph:
    n_declared: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2:
                raise DomainError(f"line {lineno}: malformed header {raw!r}")
            n_declared = int(parts[1])
            continue
        if len(parts) != 2:
            raise DomainError(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        max_id = max(max_id, u, v)
    n = n_declared if n_declared is not None else max_id + 1
    if n < max_id + 1:
        raise DomainError(f"header n={n} smaller than max node id {max_id}")
    return Graph(n, edges)


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(graph: Graph) -> str:
    lines = [f"n {graph.n}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"
