"""Initial logical-to-position assignments for the line pattern.

The finishing cycle of a pruned pattern is fixed entirely by where each edge's
endpoints start, via the meeting table, so choosing the initial mapping is a
search over permutations scored by max edge meeting cycle.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import networkx as nx

from ctagsched.graphs import Mapping, ProblemGraph, random_initial_mapping
from ctagsched.pattern import _meet_table, meet_cycle

__all__ = [
    "MappingSearchNode",
    "PatternGraph",
    "astar_initial_mapping",
    "iso_initial_mapping",
    "pattern_graph",
    "random_initial_mapping",
]


@dataclass(frozen=True)
class MappingSearchNode:
    """Partial assignment in the mapping search; cost bounds the finish cycle."""

    partial_pi: tuple[int, ...]  # positions of the first k search vertices
    cost: int  # max meet index over edges mapped so far, -1 when none
    cycle_last: int

    def __post_init__(self):
        if self.cost < self.cycle_last:
            raise ValueError("cost must dominate the deepest scheduled cycle")


@dataclass(frozen=True)
class PatternGraph:
    """Position pairs whose pattern CPHASE fires before cycle horizon i."""

    i: int
    edges: frozenset[tuple[int, int]]


def pattern_graph(n: int, i: int) -> PatternGraph:
    if not 1 <= i <= 2 * n - 2:
        raise ValueError(f"horizon {i} out of range for n={n}")
    table = _meet_table(n)
    edges = frozenset(
        (a, b) for a in range(n) for b in range(a + 1, n) if table[a][b] < i
    )
    return PatternGraph(i, edges)


def astar_initial_mapping(
    g: ProblemGraph, beam: int | None = 8, tie_seed: int = 0
) -> tuple[Mapping, int]:
    """Assign vertices (highest degree first) to positions, keeping the best
    `beam` partial assignments per level by max meeting cycle.

    beam=1 is the greedy search, beam=None expands every branch and is exact.
    Returns the mapping and its finishing cycle count, which equals the depth
    of the pruned pattern under that mapping.
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    table = _meet_table(n)
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    vertex_level = {v: k for k, v in enumerate(order)}

    # partial_pi holds positions aligned with the `order` prefix
    frontier = [MappingSearchNode((), -1, -1)]
    salt = None
    if tie_seed:
        salt = random_initial_mapping(n, tie_seed).pi
    for level, v in enumerate(order):
        nbrs = [u for u in g.adj[v] if vertex_level[u] < level]
        children = []
        for node in frontier:
            used = set(node.partial_pi)
            for p in range(n):
                if p in used:
                    continue
                c = node.cost
                for u in nbrs:
                    m = table[p][node.partial_pi[vertex_level[u]]]
                    if m > c:
                        c = m
                children.append(MappingSearchNode(node.partial_pi + (p,), c, node.cost))
        if salt is not None:
            children.sort(key=lambda ch: (ch.cost, [salt[p] for p in ch.partial_pi]))
        else:
            children.sort(key=lambda ch: (ch.cost, ch.partial_pi))
        frontier = children if beam is None else children[:beam]

    best = frontier[0]
    pi = [0] * n
    for k, v in enumerate(order):
        pi[v] = best.partial_pi[k]
    return Mapping(tuple(pi)), best.cost + 1 if g.edges else 0


def iso_initial_mapping(
    g: ProblemGraph, timeout: float = 10.0
) -> tuple[Mapping, int] | None:
    """Smallest horizon i with g embeddable in pattern_graph(n, i), via VF2.

    Scans i upward from the max-degree lower bound (a vertex of degree d needs
    d execution cycles).  The wall clock is checked between horizon steps;
    None on timeout, and the caller falls back to the search above.
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    gx = nx.Graph()
    gx.add_nodes_from(range(n))
    gx.add_edges_from(g.edges)
    max_deg = max((g.degree(v) for v in range(n)), default=0)
    deadline = time.monotonic() + timeout
    for i in range(max(1, max_deg), 2 * n - 1):
        if time.monotonic() > deadline:
            return None
        px = nx.Graph()
        px.add_nodes_from(range(n))
        px.add_edges_from(pattern_graph(n, i).edges)
        matcher = nx.algorithms.isomorphism.GraphMatcher(px, gx)
        for mono in matcher.subgraph_monomorphisms_iter():
            # mono: position -> vertex, covering every vertex of g
            pi = [0] * n
            for pos, v in mono.items():
                pi[v] = pos
            return Mapping(tuple(pi)), i
    return None
