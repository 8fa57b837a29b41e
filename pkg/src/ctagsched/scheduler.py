"""Pattern-adapting heuristic scheduler for arbitrary coupling graphs.

Strategy names accepted by schedule():

  pattern-only   pruned line pattern under the natural mapping
  ctag-r         pruned line pattern under a seeded random mapping
  ctag-i-astar   pruned line pattern under the beam-searched mapping
  ctag-i-iso     like ctag-i-astar but tries subgraph isomorphism first
  ctag-h         partial pattern plus matching/swap-routing rounds

The line strategies need a chain of g.n coupled sites in the architecture.
ctag-h tries several chains and initial mappings, keeps the pruned pattern as
a fallback candidate, and falls back to a breadth-first placement with no
pattern prefix when no chain exists at all.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from ctagsched.embedding import (
    EmbeddingBudgetExceeded,
    device_embedding,
    hilbert_embedding,
    multi_embeddings,
)
from ctagsched.graphs import (
    Architecture,
    Edge,
    Mapping,
    ProblemGraph,
    identity_mapping,
    random_initial_mapping,
)
from ctagsched.initial_mapping import astar_initial_mapping, iso_initial_mapping
from ctagsched.pattern import (
    CPHASE,
    SWAP,
    Gate,
    ScheduledCircuit,
    _layer_stream,
    prune_pattern,
    to_text,
)

__all__ = [
    "STRATEGIES",
    "SchedulerConfig",
    "SchedulerState",
    "SwapStrategy",
    "enumerate_swap_strategies",
    "maximal_matching",
    "partial_pattern_cycles",
    "schedule",
    "score_strategy",
]

STRATEGIES = ("pattern-only", "ctag-r", "ctag-i-astar", "ctag-i-iso", "ctag-h")


@dataclass
class SchedulerConfig:
    """Knobs for schedule(); flat so it round-trips a config file unchanged."""

    strategy: str = "ctag-h"
    threshold: float = 0.5
    beam: int | None = 8
    max_paths: int = 4
    seed: int = 0
    timeout_ms: int = 10_000
    fallback_guard: bool = True
    exact_matching: bool = False
    num_embeddings: int = 2


@dataclass
class SchedulerState:
    """Mutable context threaded through the heuristic rounds."""

    g: ProblemGraph
    arch: Architecture
    mapping: Mapping
    remaining: set[Edge]
    circuit: list[list[Gate]]  # cycles built so far
    cycle_cursor: int = 0
    # per-cycle constraint sets, rebuilt each round
    busy: set[int] = field(default_factory=set)
    re_sites: set[int] = field(default_factory=set)
    protected: set[int] = field(default_factory=set)


@dataclass(frozen=True)
class SwapStrategy:
    """One way to bring an edge's endpoints adjacent along a shortest path.

    split (d1, d2) moves the first endpoint d1 hops and the second d2 hops
    with d1 + d2 = dist - 1; paths hold the site sequence each endpoint
    traverses (starting at its current site).
    """

    edge: Edge
    split: tuple[int, int]
    paths: tuple[tuple[int, ...], tuple[int, ...]]
    new_positions: tuple[int, int]


def partial_pattern_cycles(g: ProblemGraph, mapping: Mapping, threshold: float) -> int:
    """Length of the pattern prefix to keep before the heuristic takes over.

    Largest prefix ending right after an execution layer in which every
    execution layer fires at least threshold * floor(n/2) input CPHASEs.
    With threshold 0 the full pattern qualifies; an input too sparse for the
    first layer gives 0.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} not in [0, 1]")
    n = g.n
    if mapping.n != n or any(not 0 <= p < n for p in mapping.pi):
        raise ValueError("mapping must place g's vertices onto positions 0..n-1")
    bar = threshold * (n // 2)
    occ = [0] * n
    for l, p in enumerate(mapping.pi):
        occ[p] = l
    k = 0
    for t, (kind, pairs) in enumerate(_layer_stream(n)):
        if kind == SWAP:
            for a, b in pairs:
                occ[a], occ[b] = occ[b], occ[a]
            continue
        fired = 0
        for a, b in pairs:
            la, lb = occ[a], occ[b]
            if ((la, lb) if la < lb else (lb, la)) in g.edges:
                fired += 1
        if fired < bar:
            break
        k = t + 1
    return k


def maximal_matching(edges, mapping: Mapping, exact: bool = False) -> list[Edge]:
    """Site-disjoint subset of executable edges; greedy unless exact.

    Greedy picks by descending max endpoint degree within `edges`, ties by
    lowest edge id, so a path a-b-c-d keeps its two outer edges.  Exact mode
    computes a maximum-cardinality matching instead.
    """
    es = sorted(edges)
    if exact:
        gx = nx.Graph()
        gx.add_edges_from(es)
        mm = nx.max_weight_matching(gx, maxcardinality=True)
        return sorted((u, v) if u < v else (v, u) for u, v in mm)
    deg: dict[int, int] = {}
    for u, v in es:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    used: set[int] = set()
    out = []
    for u, v in sorted(es, key=lambda e: (-max(deg[e[0]], deg[e[1]]), e)):
        if mapping[u] in used or mapping[v] in used:
            continue
        used.add(mapping[u])
        used.add(mapping[v])
        out.append((u, v))
    return sorted(out)


def _shortest_paths(arch: Architecture, s: int, t: int, limit: int) -> list[tuple[int, ...]]:
    # first `limit` shortest s-t site paths in lexicographic order
    d = arch.dist
    out: list[tuple[int, ...]] = []

    def walk(p: int, prefix: list[int]) -> None:
        if len(out) >= limit:
            return
        if p == t:
            out.append(tuple(prefix))
            return
        for q in sorted(arch.adj[p]):
            if d[q][t] == d[p][t] - 1:
                prefix.append(q)
                walk(q, prefix)
                prefix.pop()

    walk(s, [s])
    return out


def _first_hops(ss: SwapStrategy) -> tuple[tuple[int, int], ...]:
    # the SWAPs a strategy contributes to the current cycle
    hops = []
    for path in ss.paths:
        if len(path) > 1:
            a, b = path[0], path[1]
            hops.append((a, b) if a < b else (b, a))
    return tuple(sorted(hops))


def enumerate_swap_strategies(
    edge: Edge, state: SchedulerState, max_paths: int = 4
) -> list[SwapStrategy]:
    """Feasible (path, split) strategies that bring `edge` adjacent.

    Only each strategy's first-cycle SWAPs are checked against the current
    cycle: they may not touch sites of gates already scheduled, of currently
    executable edges, or of endpoints parked by earlier strategies this
    round.  Later hops land in later cycles where the rules are re-evaluated.
    """
    u, v = edge
    pu, pv = state.mapping[u], state.mapping[v]
    dist = state.arch.dist[pu][pv]
    if dist < 2:
        raise ValueError("edge is already executable")
    blocked = state.busy | state.re_sites | state.protected
    out = []
    for path in _shortest_paths(state.arch, pu, pv, max_paths):
        for d1 in range(dist):
            d2 = dist - 1 - d1
            ss = SwapStrategy(
                edge,
                (d1, d2),
                (tuple(path[: d1 + 1]), tuple(reversed(path[d1 + 1 :]))),
                (path[d1], path[d1 + 1]),
            )
            hops = _first_hops(ss)
            sites = [s for h in hops for s in h]
            if len(set(sites)) < len(sites):  # the two hops collide
                continue
            if any(s in blocked for s in sites):
                continue
            out.append(ss)
    return out


def score_strategy(ss: SwapStrategy, state: SchedulerState) -> int:
    """Sum of distances from each endpoint's final site to its unscheduled
    neighbors; the routed edge itself does not count.  Lower is better."""
    dist = state.arch.dist
    score = 0
    for end, newpos in zip(ss.edge, ss.new_positions):
        for x, y in state.remaining:
            if (x, y) == ss.edge:
                continue
            if x == end:
                nb = y
            elif y == end:
                nb = x
            else:
                continue
            score += dist[newpos][state.mapping[nb]]
    return score


def _bystander_delta(ss: SwapStrategy, state: SchedulerState) -> int:
    # distance change over other remaining edges whose qubits get carried
    # along by the strategy's SWAPs; breaks score ties toward strategies that
    # park bystanders closer to their own partners
    u, v = ss.edge
    inv = state.mapping.inverse()
    moved: dict[int, int] = {}
    for path in ss.paths:
        for k in range(1, len(path)):
            l = inv.get(path[k])
            if l is not None:
                moved[l] = path[k - 1]
    moved.pop(u, None)
    moved.pop(v, None)
    if not moved:
        return 0
    dist = state.arch.dist
    delta = 0
    for x, y in state.remaining:
        if (x, y) == ss.edge or x in (u, v) or y in (u, v):
            continue
        if x not in moved and y not in moved:
            continue
        px0, py0 = state.mapping[x], state.mapping[y]
        delta += dist[moved.get(x, px0)][moved.get(y, py0)] - dist[px0][py0]
    return delta


def _apply_swaps(mapping: Mapping, hops) -> Mapping:
    pos = list(mapping.pi)
    inv = {p: l for l, p in enumerate(pos)}
    for a, b in hops:
        la, lb = inv.get(a), inv.get(b)
        if la is not None:
            pos[la] = b
        if lb is not None:
            pos[lb] = a
        inv = {p: l for l, p in enumerate(pos)}
    return Mapping(tuple(pos))


def _run_rounds(state: SchedulerState, cfg: SchedulerConfig) -> None:
    """One cycle per round: a maximal matching of the executable edges plus
    the first SWAPs of the best-scored strategy for each distant edge."""
    dist = state.arch.dist
    while state.remaining:
        mp = state.mapping
        re = sorted(e for e in state.remaining if dist[mp[e[0]]][mp[e[1]]] == 1)
        re_set = set(re)
        matching = maximal_matching(re, mp, cfg.exact_matching)
        cycle: list[Gate] = []
        state.busy = set()
        state.protected = set()
        state.re_sites = {mp[x] for e in re for x in e}
        for u, v in matching:
            a, b = mp[u], mp[v]
            cycle.append(Gate(CPHASE, min(a, b), max(a, b), (u, v)))
            state.busy |= {a, b}
            state.remaining.discard((u, v))
        start_d = {e: dist[mp[e[0]]][mp[e[1]]] for e in state.remaining}
        for e in sorted(
            (e for e in state.remaining if e not in re_set),
            key=lambda e: (start_d[e], e),
        ):
            if dist[state.mapping[e[0]]][state.mapping[e[1]]] < 2:
                continue  # earlier swaps this round already parked it adjacent
            strategies = enumerate_swap_strategies(e, state, cfg.max_paths)
            if not strategies:
                continue  # deferred; constraints reset next cycle
            best = min(
                strategies,
                key=lambda ss: (
                    score_strategy(ss, state),
                    _bystander_delta(ss, state),
                    ss.split[0] + ss.split[1],
                    _first_hops(ss),
                    ss.split,
                    ss.paths,
                ),
            )
            hops = _first_hops(best)
            for a, b in hops:
                cycle.append(Gate(SWAP, a, b))
                state.busy |= {a, b}
            state.mapping = _apply_swaps(state.mapping, hops)
            state.protected |= {state.mapping[e[0]], state.mapping[e[1]]}
        assert cycle, "scheduler round made no progress"
        state.circuit.append(cycle)
        state.cycle_cursor += 1


def _grid_shape(arch: Architecture) -> tuple[int, int] | None:
    if arch.name.startswith("grid:"):
        rows, _, cols = arch.name[5:].partition("x")
        try:
            return int(rows), int(cols)
        except ValueError:
            return None
    return None


def _line_orders(arch: Architecture, n: int, cfg: SchedulerConfig) -> list[tuple[int, ...]]:
    """Chains of n coupled sites to lay the pattern along, best first."""
    want = max(1, cfg.num_embeddings)
    out: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()

    def add(order) -> None:
        if order is None or len(order) < n:
            return
        sl = tuple(order[:n])
        key = min(sl, tuple(reversed(sl)))
        if key not in seen:
            seen.add(key)
            out.append(sl)

    if arch.name.startswith("linear:"):
        add(tuple(range(arch.q)))
    shape = _grid_shape(arch)
    if shape is not None:
        if min(shape) >= 2:
            add(hilbert_embedding(*shape).order)
        else:
            # a 1xN grid is already a line
            add(tuple(range(arch.q)))
    if arch.name in ("ibm20", "ibm27"):
        add(device_embedding(arch.name).order)
    if len(out) < want:
        try:
            for le in multi_embeddings(arch, want, seed=cfg.seed, length=n):
                add(le.order)
        except EmbeddingBudgetExceeded:
            pass
    return out[:want]


def _relabel(circ: ScheduledCircuit, order, arch: Architecture) -> ScheduledCircuit:
    """Send a virtual-line circuit onto the chain `order` inside `arch`."""
    cycles = []
    for cyc in circ.cycles:
        gates = []
        for g in cyc:
            a, b = order[g.a], order[g.b]
            gates.append(g._replace(a=min(a, b), b=max(a, b)))
        cycles.append(tuple(gates))
    init = Mapping(tuple(order[p] for p in circ.init.pi))
    return ScheduledCircuit(tuple(cycles), init, arch)


def _pattern_candidate(
    g: ProblemGraph, arch: Architecture, order, m0: Mapping
) -> ScheduledCircuit:
    return _relabel(prune_pattern(g, m0, g.n), order, arch)


def _ctag_h_run(
    g: ProblemGraph, arch: Architecture, order, m0: Mapping, cfg: SchedulerConfig
) -> ScheduledCircuit:
    n = g.n
    k = partial_pattern_cycles(g, m0, cfg.threshold)
    prefix = prune_pattern(g, m0, n).cycles[:k]
    inv = [0] * n
    for l, p in enumerate(m0.pi):
        inv[p] = l
    executed = set()
    for cyc in prefix:
        for gate in cyc:
            if gate.kind == CPHASE:
                executed.add(gate.logical)
        for gate in cyc:
            if gate.kind == SWAP:
                inv[gate.a], inv[gate.b] = inv[gate.b], inv[gate.a]
    phys = [0] * n
    for p, l in enumerate(inv):
        phys[l] = order[p]
    init = Mapping(tuple(order[p] for p in m0.pi))
    relabeled = _relabel(
        ScheduledCircuit(tuple(prefix), m0, arch), order, arch
    )
    state = SchedulerState(
        g,
        arch,
        Mapping(tuple(phys)),
        set(g.edges) - executed,
        [list(cyc) for cyc in relabeled.cycles],
        cycle_cursor=len(prefix),
    )
    _run_rounds(state, cfg)
    return ScheduledCircuit(
        tuple(tuple(cyc) for cyc in state.circuit), init, arch
    )


def _bfs_placement(arch: Architecture, n: int) -> Mapping:
    # logical i on the i-th site of a breadth-first sweep from site 0
    order = []
    seen = [False] * arch.q
    seen[0] = True
    dq = deque([0])
    while dq:
        p = dq.popleft()
        order.append(p)
        for q in sorted(arch.adj[p]):
            if not seen[q]:
                seen[q] = True
                dq.append(q)
    return Mapping(tuple(order[:n]))


def _circuit_key(c: ScheduledCircuit):
    return (c.depth, c.cphase_count + c.swap_count, to_text(c))


def schedule(
    g: ProblemGraph, arch: Architecture, cfg: SchedulerConfig | None = None
) -> ScheduledCircuit:
    """Schedule g's CPHASE layer onto arch per cfg.strategy.

    The returned circuit always passes verify(c, g, arch).  Among the
    candidates a strategy produces, the shallowest wins; ties go to fewer
    gates, then to the lexicographically smallest text form.
    """
    if cfg is None:
        cfg = SchedulerConfig()
    if cfg.strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {cfg.strategy!r}")
    if arch.q < g.n:
        raise ValueError(f"{arch.name} has {arch.q} qubits, input needs {g.n}")
    n = g.n
    orders = _line_orders(arch, n, cfg)

    if cfg.strategy != "ctag-h":
        if not orders:
            raise ValueError(f"no chain of {n} coupled sites in {arch.name}")
        order = orders[0]
        if cfg.strategy == "pattern-only":
            m0 = identity_mapping(n)
        elif cfg.strategy == "ctag-r":
            m0 = random_initial_mapping(n, cfg.seed)
        elif cfg.strategy == "ctag-i-astar":
            m0, _ = astar_initial_mapping(g, cfg.beam, cfg.seed)
        else:  # ctag-i-iso
            found = iso_initial_mapping(g, cfg.timeout_ms / 1000.0)
            m0 = found[0] if found else astar_initial_mapping(g, cfg.beam, cfg.seed)[0]
        return _pattern_candidate(g, arch, order, m0)

    candidates = []
    if orders:
        inits = [astar_initial_mapping(g, cfg.beam, cfg.seed)[0]]
        ident = identity_mapping(n)
        if ident.pi != inits[0].pi:
            inits.append(ident)
        for order in orders:
            for m0 in inits:
                candidates.append(_ctag_h_run(g, arch, order, m0, cfg))
                if cfg.fallback_guard:
                    candidates.append(_pattern_candidate(g, arch, order, m0))
    else:
        placement = _bfs_placement(arch, n)
        state = SchedulerState(g, arch, placement, set(g.edges), [], 0)
        _run_rounds(state, cfg)
        candidates.append(
            ScheduledCircuit(tuple(tuple(c) for c in state.circuit), placement, arch)
        )
    return min(candidates, key=_circuit_key)
