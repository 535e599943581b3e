"""
Maximum bipartite matching and the Even/Odd/Unreachable classification.

Left vertices are 0..num_left-1, right vertices 0..num_right-1. Matchings are
dicts left -> right.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Deque, Dict, Iterable, List, Optional, Tuple

from popmatch.errors import InvalidMatchingError, NotMaximumMatchingError

log = logging.getLogger(__name__)

FAKE_INFINITY = -1


class Label(Enum):
    EVEN = "even"
    ODD = "odd"
    UNREACHABLE = "unreachable"


@dataclass
class BipartiteGraph:
    num_left: int
    num_right: int
    adj: List[List[int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.adj:
            self.adj = [[] for _ in range(self.num_left)]
        if len(self.adj) != self.num_left:
            raise ValueError(f"adjacency has {len(self.adj)} rows, expected {self.num_left}")
        for u, nbrs in enumerate(self.adj):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"left vertex {u}: duplicate edge")
            for v in nbrs:
                if not 0 <= v < self.num_right:
                    raise ValueError(f"left vertex {u}: right endpoint {v} out of range")

    @classmethod
    def from_edges(cls, num_left: int, num_right: int, edges: Iterable[Tuple[int, int]]) -> "BipartiteGraph":
        adj: List[List[int]] = [[] for _ in range(num_left)]
        for u, v in edges:
            adj[u].append(v)
        return cls(num_left, num_right, adj)

    @cached_property
    def right_adj(self) -> List[List[int]]:
        radj: List[List[int]] = [[] for _ in range(self.num_right)]
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                radj[v].append(u)
        return radj

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adj) for v in nbrs]

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self.adj)

    def max_left_degree(self) -> int:
        return max((len(n) for n in self.adj), default=0)

    def reversed_adjacency(self) -> "BipartiteGraph":
        """Same graph with every adjacency list reversed."""
        return BipartiteGraph(self.num_left, self.num_right, [list(reversed(n)) for n in self.adj])


@dataclass
class DmClassification:
    left: List[Label]
    right: List[Label]

    def right_with(self, label: Label) -> List[int]:
        return [v for v, lab in enumerate(self.right) if lab is label]

    def left_with(self, label: Label) -> List[int]:
        return [u for u, lab in enumerate(self.left) if lab is label]

    def counts(self) -> Dict[Label, int]:
        out = {lab: 0 for lab in Label}
        for lab in self.left + self.right:
            out[lab] += 1
        return out


# ============================================================================
# GENERAL MAXIMUM MATCHING
# ============================================================================

class HopcroftKarp:
    """Hopcroft-Karp on a BipartiteGraph, optionally warm-started from a matching.

    Augmenting paths never unmatch a vertex, so every vertex matched by the
    initial matching stays matched.
    """

    def __init__(self, graph: BipartiteGraph, initial: Optional[Dict[int, int]] = None,
                 left_order: Optional[List[int]] = None):
        self._graph = graph
        self._reference_distance: int = FAKE_INFINITY
        self._pair_left: Dict[int, int] = {}
        self._pair_right: Dict[int, int] = {}
        self._left: List[int] = list(range(graph.num_left) if left_order is None else left_order)
        self._dist_left: Dict[int, int] = {}
        for u, v in (initial or {}).items():
            if v not in graph.adj[u]:
                raise InvalidMatchingError(f"initial pair ({u},{v}) is not an edge")
            if v in self._pair_right:
                raise InvalidMatchingError(f"right vertex {v} matched twice")
            self._swap_lr(u, v)

    def run(self) -> Dict[int, int]:
        for u in self._left:
            self._dist_left[u] = FAKE_INFINITY
        while self._bfs():
            for u in self._left:
                if u not in self._pair_left:
                    self._dfs(u)
        return dict(self._pair_left)

    def _bfs(self) -> bool:
        queue: Deque[int] = deque()
        for u in self._left:
            if u not in self._pair_left:
                queue.append(u)
                self._dist_left[u] = 0
            else:
                self._dist_left[u] = FAKE_INFINITY
        self._reference_distance = FAKE_INFINITY
        while queue:
            u = queue.popleft()
            if self._dist_left[u] == self._reference_distance == FAKE_INFINITY:
                continue
            if self._dist_left[u] >= self._reference_distance != FAKE_INFINITY:
                continue
            for v in self._graph.adj[u]:
                if v not in self._pair_right:
                    if self._reference_distance == FAKE_INFINITY:
                        self._reference_distance = self._dist_left[u] + 1
                else:
                    w = self._pair_right[v]
                    if self._dist_left[w] == FAKE_INFINITY:
                        self._dist_left[w] = self._dist_left[u] + 1
                        queue.append(w)
        return self._reference_distance != FAKE_INFINITY

    def _swap_lr(self, u: int, v: int) -> None:
        self._pair_left[u] = v
        self._pair_right[v] = u

    def _dfs(self, u: int) -> bool:
        for v in self._graph.adj[u]:
            if v not in self._pair_right:
                if self._reference_distance == self._dist_left[u] + 1:
                    self._swap_lr(u, v)
                    return True
            else:
                w = self._pair_right[v]
                if self._dist_left[w] == self._dist_left[u] + 1 and self._dfs(w):
                    self._swap_lr(u, v)
                    return True
        self._dist_left[u] = FAKE_INFINITY
        return False


def augment(g: BipartiteGraph, m: Dict[int, int]) -> Dict[int, int]:
    """Extend m to a maximum matching of g without unmatching anything."""
    return HopcroftKarp(g, m).run()


# ============================================================================
# LINEAR-TIME MATCHING WHEN EVERY LEFT VERTEX HAS DEGREE <= 2
# ============================================================================

def max_matching_low_degree(g: BipartiteGraph) -> Dict[int, int]:
    """
    Maximum matching when every left vertex has degree at most 2, in O(n).

    Each left vertex is read as an edge between its right neighbors (a loop if
    it has one). Matching then means orienting edges so that every right vertex
    receives at most one. In each component, root a BFS tree and give every
    tree edge to its child; if the component has a non-tree edge (u, v), root
    the tree at u and give that edge to u, which saturates every right vertex.
    """
    if g.max_left_degree() > 2:
        raise ValueError("max_matching_low_degree needs left degree <= 2")

    # incident[v] = (edge id, other endpoint); a loop has other endpoint == v
    incident: List[List[Tuple[int, int]]] = [[] for _ in range(g.num_right)]
    for u, nbrs in enumerate(g.adj):
        if len(nbrs) == 1:
            incident[nbrs[0]].append((u, nbrs[0]))
        elif len(nbrs) == 2:
            x, y = nbrs
            incident[x].append((u, y))
            incident[y].append((u, x))

    matching: Dict[int, int] = {}
    seen = [False] * g.num_right

    def spanning_tree(root: int, skip: int) -> Tuple[List[Tuple[int, int]], Optional[Tuple[int, int]]]:
        """BFS tree edges as (edge id, child) plus one non-tree edge (edge id, endpoint) if any."""
        tree: List[Tuple[int, int]] = []
        extra: Optional[Tuple[int, int]] = None
        used = {skip}
        visited = {root}
        queue: Deque[int] = deque([root])
        while queue:
            x = queue.popleft()
            for e, y in incident[x]:
                if e in used:
                    continue
                used.add(e)
                if y in visited:
                    if extra is None:
                        extra = (e, x)
                    continue
                visited.add(y)
                tree.append((e, y))
                queue.append(y)
        for v in visited:
            seen[v] = True
        return tree, extra

    for start in range(g.num_right):
        if seen[start] or not incident[start]:
            continue
        tree, extra = spanning_tree(start, skip=-1)
        if extra is not None:
            e, root = extra
            tree, _ = spanning_tree(root, skip=e)
            matching[e] = root
        for e, child in tree:
            matching[e] = child
    return matching


def max_matching(g: BipartiteGraph) -> Dict[int, int]:
    if g.max_left_degree() <= 2:
        return max_matching_low_degree(g)
    return HopcroftKarp(g).run()


# ============================================================================
# CLASSIFICATION
# ============================================================================

def classify(g: BipartiteGraph, m: Dict[int, int]) -> DmClassification:
    """
    Label every vertex by the parity of alternating paths from unmatched vertices.

    One BFS seeded with every unmatched vertex of both sides: even vertices
    follow non-matching edges to odd vertices, odd vertices follow their
    matching edge back to an even vertex. A vertex that would get both labels,
    or an unmatched vertex reached as odd, means m has an augmenting path.
    """
    mate_left: List[Optional[int]] = [None] * g.num_left
    mate_right: List[Optional[int]] = [None] * g.num_right
    for u, v in m.items():
        if v not in g.adj[u]:
            raise InvalidMatchingError(f"pair ({u},{v}) is not an edge")
        if mate_right[v] is not None:
            raise InvalidMatchingError(f"right vertex {v} matched twice")
        mate_left[u] = v
        mate_right[v] = u

    # vertex key: (0, u) left, (1, v) right
    labels: Dict[Tuple[int, int], Label] = {}
    queue: Deque[Tuple[int, int]] = deque()
    for u in range(g.num_left):
        if mate_left[u] is None:
            labels[(0, u)] = Label.EVEN
            queue.append((0, u))
    for v in range(g.num_right):
        if mate_right[v] is None:
            labels[(1, v)] = Label.EVEN
            queue.append((1, v))

    while queue:
        side, x = queue.popleft()
        if side == 0:
            nbrs, mate_of_x, mates = g.adj[x], mate_left[x], mate_right
        else:
            nbrs, mate_of_x, mates = g.right_adj[x], mate_right[x], mate_left
        other = 1 - side
        for y in nbrs:
            if y == mate_of_x:
                continue
            lab = labels.get((other, y))
            if lab is Label.ODD:
                continue
            if lab is Label.EVEN:
                raise NotMaximumMatchingError("alternating paths meet with equal parity: matching is not maximum")
            labels[(other, y)] = Label.ODD
            z = mates[y]
            if z is None:
                raise NotMaximumMatchingError("augmenting path found: matching is not maximum")
            zlab = labels.get((side, z))
            if zlab is Label.ODD:
                raise NotMaximumMatchingError("alternating paths meet with equal parity: matching is not maximum")
            if zlab is None:
                labels[(side, z)] = Label.EVEN
                queue.append((side, z))

    return DmClassification(
        left=[labels.get((0, u), Label.UNREACHABLE) for u in range(g.num_left)],
        right=[labels.get((1, v), Label.UNREACHABLE) for v in range(g.num_right)],
    )
