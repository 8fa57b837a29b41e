"""CTAG schedule patterns on a linear chain.

The clique pattern alternates two CPHASE layers with two SWAP layers so that
every qubit pair becomes adjacent, and executes, exactly once within 2n-2
cycles.  This module generates that pattern, its pruned variant for sparse
input graphs, the closed-form position model used to reason about it, and the
2xN grid variant that drops every second SWAP layer.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from ctagsched.graphs import (
    Architecture,
    Mapping,
    ProblemGraph,
    grid,
    identity_mapping,
    linear,
)

CPHASE = "cphase"
SWAP = "swap"


class Gate(NamedTuple):
    kind: str
    a: int
    b: int
    # logical pair executed by a CPHASE, carried for provenance only; the
    # verifier recomputes it independently
    logical: tuple[int, int] | None = None


@dataclass(frozen=True)
class ScheduledCircuit:
    """Cycle-by-cycle schedule; each cycle holds qubit-disjoint gates."""

    cycles: tuple[tuple[Gate, ...], ...]
    init: Mapping
    arch: Architecture

    @property
    def depth(self) -> int:
        return len(self.cycles)

    @property
    def cphase_count(self) -> int:
        return sum(1 for cyc in self.cycles for g in cyc if g.kind == CPHASE)

    @property
    def swap_count(self) -> int:
        return sum(1 for cyc in self.cycles for g in cyc if g.kind == SWAP)


@dataclass(frozen=True)
class PatternPosition:
    """Where a pattern qubit sits after t outer loops, with its cyclic rank."""

    n: int
    t: int
    pos: int
    cyclic_rank: int

    def __post_init__(self):
        if not (0 <= self.pos < self.n and 0 <= self.cyclic_rank < self.n):
            raise ValueError("position or rank out of range")


def _pairs(start: int, n: int) -> tuple[tuple[int, int], ...]:
    return tuple((p, p + 1) for p in range(start, n - 1, 2))


def _layer_stream(n: int):
    """Untrimmed (kind, pairs) stream of the clique pattern.

    Even n: ceil(n/2) repetitions of [E0 E1 S1 S0].  Odd n drops the final S0
    of the second-to-last repetition and ends on a lone E0 layer: a trailing
    S0 would only permute within the pairs that E0 executes, so the same pairs
    meet without it and the 2n-2 bound still holds.
    """
    e0, e1 = _pairs(0, n), _pairs(1, n)
    if n % 2 == 0:
        for _ in range(n // 2):
            yield CPHASE, e0
            yield CPHASE, e1
            yield SWAP, e1
            yield SWAP, e0
    else:
        for _ in range((n - 1) // 2 - 1):
            yield CPHASE, e0
            yield CPHASE, e1
            yield SWAP, e1
            yield SWAP, e0
        yield CPHASE, e0
        yield CPHASE, e1
        yield SWAP, e1
        yield CPHASE, e0


def generate_clique_pattern(n: int) -> ScheduledCircuit:
    """Clique schedule on linear(n) with the natural-order initial mapping.

    Abstract depth is 2n-2 for n >= 3 and 1 for n=2; every unordered pair
    executes exactly once.
    """
    if n < 2:
        raise ValueError(f"pattern needs n >= 2, got {n}")
    occ = list(range(n))  # occ[position] = logical qubit
    cycles = []
    for kind, pairs in _layer_stream(n):
        gates = []
        for a, b in pairs:
            if kind == CPHASE:
                la, lb = occ[a], occ[b]
                gates.append(Gate(CPHASE, a, b, (la, lb) if la < lb else (lb, la)))
            else:
                gates.append(Gate(SWAP, a, b))
        if kind == SWAP:
            for a, b in pairs:
                occ[a], occ[b] = occ[b], occ[a]
        cycles.append(tuple(gates))
    return ScheduledCircuit(_trim(cycles), identity_mapping(n), linear(n))


def _trim(cycles) -> tuple[tuple[Gate, ...], ...]:
    # drop everything after the last cycle that still executes a CPHASE
    last = -1
    for i, cyc in enumerate(cycles):
        if any(g.kind == CPHASE for g in cyc):
            last = i
    return tuple(tuple(c) for c in cycles[: last + 1])


def prune_circuit(circ: ScheduledCircuit, g: ProblemGraph) -> ScheduledCircuit:
    """Drop CPHASEs whose logical pair is not an edge of g; keep SWAP layers.

    Execution cycles emptied by pruning stay as empty cycles (the SWAP cadence
    around them is unchanged), but everything after the last surviving CPHASE
    is removed.  Works for any circuit whose init covers g's vertices.
    """
    occ = {p: l for l, p in enumerate(circ.init.pi)}  # site -> logical
    out = []
    for cyc in circ.cycles:
        kept = []
        for gate in cyc:
            if gate.kind == SWAP:
                kept.append(gate)
                continue
            la, lb = occ.get(gate.a), occ.get(gate.b)
            if la is None or lb is None:
                continue
            pair = (la, lb) if la < lb else (lb, la)
            if pair in g.edges:
                kept.append(gate._replace(logical=pair))
        for gate in cyc:
            if gate.kind == SWAP:
                va, vb = occ.pop(gate.a, None), occ.pop(gate.b, None)
                if va is not None:
                    occ[gate.b] = va
                if vb is not None:
                    occ[gate.a] = vb
        out.append(tuple(kept))
    return ScheduledCircuit(_trim(out), circ.init, circ.arch)


def prune_pattern(g: ProblemGraph, init: Mapping, n: int) -> ScheduledCircuit:
    """Clique pattern on linear(n) restricted to g's edges under init."""
    if g.n != n:
        raise ValueError(f"graph has {g.n} vertices, pattern needs {n}")
    if init.n != n or any(not 0 <= p < n for p in init.pi):
        raise ValueError("init must map g's vertices onto positions 0..n-1")
    base = generate_clique_pattern(n)
    return prune_circuit(
        ScheduledCircuit(base.cycles, init, base.arch), g
    )


def _loop_step(n: int, p: int) -> int:
    # one outer loop (S1 then S0): odd positions drift up 2, even drift down
    # 2, with direction flips at the chain ends
    if p == 0:
        return 1
    if n % 2 == 0 and p == n - 1:
        return n - 2
    if n % 2 == 1 and p == n - 2:
        return n - 1
    return p - 2 if p % 2 == 0 else p + 2


def position_at(n: int, start_pos: int, t: int) -> int:
    """Position of the qubit starting at start_pos after t outer loops."""
    if not 0 <= start_pos < n:
        raise ValueError(f"position {start_pos} out of range for n={n}")
    if t < 0:
        raise ValueError("t must be non-negative")
    p = start_pos
    for _ in range(t % n):  # the loop permutation is a single n-cycle
        p = _loop_step(n, p)
    return p


def cyclic_rank_shift(n: int) -> tuple[int, ...]:
    """Position permutation of one outer loop; asserted to be one n-cycle."""
    if n < 2:
        raise ValueError("need n >= 2")
    perm = tuple(_loop_step(n, p) for p in range(n))
    seen = set()
    p = 0
    for _ in range(n):
        if p in seen:
            raise AssertionError(f"loop permutation for n={n} is not a single cycle")
        seen.add(p)
        p = perm[p]
    return perm


@lru_cache(maxsize=None)
def _rank_start_positions(n: int) -> tuple[int, ...]:
    # start position of the rank-k qubit: C_0 starts at P1 and consecutive
    # ranks follow the loop permutation, so pos0(C_k) = step^k(1)
    perm = cyclic_rank_shift(n)
    out = []
    p = 1 % n
    for _ in range(n):
        out.append(p)
        p = perm[p]
    return tuple(out)


@lru_cache(maxsize=None)
def _rank_of_start(n: int) -> tuple[int, ...]:
    inv = [0] * n
    for k, p in enumerate(_rank_start_positions(n)):
        inv[p] = k
    return tuple(inv)


def pattern_position(n: int, start_pos: int, t: int) -> PatternPosition:
    return PatternPosition(
        n, t, position_at(n, start_pos, t), _rank_of_start(n)[start_pos]
    )


def interaction_ranks(n: int, i: int, t: int) -> frozenset[int]:
    """Cyclic ranks the rank-i qubit executes with during full loop t.

    Closed form over the two streams: a qubit whose rank-start position j is
    even meets ranks i+j-2t and i+j-2t+1 (mod n); odd j mirrors through the
    chain end and meets i+n-j-2t and i+n-j-2t-1.  A value equal to i itself
    marks the boundary cycle where that qubit idles for one layer.
    """
    if not 0 <= i < n:
        raise ValueError(f"rank {i} out of range for n={n}")
    j = _rank_start_positions(n)[i]
    if j % 2 == 0:
        cand = ((i + j - 2 * t) % n, (i + j - 2 * t + 1) % n)
    else:
        cand = ((i + n - j - 2 * t) % n, (i + n - j - 2 * t - 1) % n)
    return frozenset(c for c in cand if c != i)


@lru_cache(maxsize=None)
def _meet_table(n: int) -> tuple[tuple[int, ...], ...]:
    table = [[-1] * n for _ in range(n)]
    for c, cyc in enumerate(generate_clique_pattern(n).cycles):
        for g in cyc:
            if g.kind == CPHASE:
                u, v = g.logical
                table[u][v] = table[v][u] = c
    return tuple(tuple(row) for row in table)


def meet_cycle(n: int, pos_a: int, pos_b: int) -> int:
    """0-based cycle at which the qubits starting at pos_a and pos_b execute."""
    if pos_a == pos_b:
        raise ValueError("positions must differ")
    if not (0 <= pos_a < n and 0 <= pos_b < n):
        raise ValueError(f"positions out of range for n={n}")
    return _meet_table(n)[pos_a][pos_b]


def _boustrophedon(cols: int) -> list[int]:
    # column-major snake over grid(2, cols): top-bottom, bottom-top, ...
    chain = []
    for c in range(cols):
        top, bottom = c, cols + c
        chain.extend((top, bottom) if c % 2 == 0 else (bottom, top))
    return chain


def generate_2xn_pattern(n: int) -> ScheduledCircuit:
    """Clique schedule on grid(2, ceil(n/2)) in 3n/2-1 cycles (even n).

    The chain is laid in boustrophedon order, so every even-odd SWAP layer of
    the line pattern only flips columns; flipping a bookkeeping bit realizes
    it for free, which removes one cycle per loop.  Odd n keeps one grid site
    empty (the last chain slot) and pays one real SWAP per flip to carry the
    lone last-column qubit across; that SWAP shares a cycle with the next
    CPHASE layer, which never touches the last column, so the depth is
    3(n-1)/2+1.
    """
    if n < 4:
        raise ValueError(f"2xN pattern needs n >= 4, got {n}")
    cols = (n + 1) // 2
    arch = grid(2, cols)
    odd = n % 2 == 1

    def site(slot: int, o: int) -> int:
        # virtual chain slot -> grid site under orientation flag o
        c = slot // 2
        row = (slot & 1) ^ (c & 1) ^ o
        return row * cols + c

    occ = list(range(n))  # occ[virtual slot] = logical
    o = 0
    pending = None  # corrective SWAP riding in the next cycle (odd n)
    cycles = []

    def emit(kind: str, slots) -> None:
        nonlocal pending
        gates = []
        if pending is not None:
            gates.append(pending)
            pending = None
        for j in slots:
            a, b = site(j, o), site(j + 1, o)
            if kind == CPHASE:
                la, lb = occ[j], occ[j + 1]
                gates.append(Gate(CPHASE, a, b, (la, lb) if la < lb else (lb, la)))
            else:
                gates.append(Gate(SWAP, a, b))
                occ[j], occ[j + 1] = occ[j + 1], occ[j]
        cycles.append(tuple(gates))

    def flip() -> None:
        nonlocal o, pending
        for j in range(0, n - 1, 2):
            occ[j], occ[j + 1] = occ[j + 1], occ[j]
        if odd:
            # last slot keeps its virtual place but its address flips rows
            pending = Gate(SWAP, site(n - 1, o), site(n - 1, o ^ 1))
        o ^= 1

    e0 = range(0, n - 1, 2)
    e1 = range(1, n - 1, 2)
    if not odd:
        for _ in range(n // 2):
            emit(CPHASE, e0)
            emit(CPHASE, e1)
            emit(SWAP, e1)
            flip()
    else:
        for _ in range((n - 1) // 2 - 1):
            emit(CPHASE, e0)
            emit(CPHASE, e1)
            emit(SWAP, e1)
            flip()
        emit(CPHASE, e0)
        emit(CPHASE, e1)
        emit(SWAP, e1)
        emit(CPHASE, e0)

    init = Mapping(tuple(site(slot, 0) for slot in range(n)))
    return ScheduledCircuit(_trim(cycles), init, arch)


def to_text(circ: ScheduledCircuit) -> str:
    """One line per cycle: "t: CPHASE(a,b) SWAP(c,d) ..."."""
    lines = []
    for t, cyc in enumerate(circ.cycles):
        ops = " ".join(f"{g.kind.upper()}({g.a},{g.b})" for g in cyc)
        lines.append(f"{t}: {ops}".rstrip())
    return "\n".join(lines) + "\n"


def to_json_dict(circ: ScheduledCircuit) -> dict:
    return {
        "arch": circ.arch.name,
        "q": circ.arch.q,
        "init": list(circ.init.pi),
        "cycles": [
            [
                {"kind": g.kind, "a": g.a, "b": g.b}
                | ({"logical": list(g.logical)} if g.logical else {})
                for g in cyc
            ]
            for cyc in circ.cycles
        ],
    }


def from_json_dict(doc: dict, arch: Architecture) -> ScheduledCircuit:
    try:
        init = Mapping(tuple(int(p) for p in doc["init"]))
        cycles = tuple(
            tuple(
                Gate(
                    str(g["kind"]),
                    int(g["a"]),
                    int(g["b"]),
                    tuple(g["logical"]) if g.get("logical") else None,
                )
                for g in cyc
            )
            for cyc in doc["cycles"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed schedule document: {exc}") from None
    for cyc in cycles:
        for g in cyc:
            if g.kind not in (CPHASE, SWAP):
                raise ValueError(f"unknown gate kind {g.kind!r}")
    return ScheduledCircuit(cycles, init, arch)
