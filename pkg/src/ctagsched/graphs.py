"""Problem graphs, hardware coupling graphs, and qubit mappings."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from importlib import resources

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised when a graph or architecture file is malformed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ProblemGraph:
    """Undirected simple graph whose edges are the CPHASE gates to execute."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one vertex, got n={self.n}")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                raise ValueError(f"edge ({u}, {v}) not normalized")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    def degree(self, v: int) -> int:
        return len(self.adj[v])


def make_problem_graph(n: int, edges) -> ProblemGraph:
    """Build a ProblemGraph from an iterable of (u, v) pairs."""
    norm = set()
    for u, v in edges:
        e = _norm_edge(int(u), int(v))
        if e in norm:
            raise ValueError(f"duplicate edge {e}")
        norm.add(e)
    return ProblemGraph(n, frozenset(norm))


def clique(n: int) -> ProblemGraph:
    """Complete graph on n vertices (density-1 workload)."""
    if n < 2:
        raise ValueError(f"clique needs n >= 2, got {n}")
    return ProblemGraph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def density(g: ProblemGraph) -> float:
    """Fraction of all possible edges present in g."""
    total = g.n * (g.n - 1) // 2
    return g.m / total if total else 0.0


class SplitMix64:
    """Portable integer-only PRNG (SplitMix64).

    Used for random graphs and random mappings so that seeded results are
    identical across platforms and Python versions; float-driven generators
    are deliberately avoided.
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next64()
            if x < limit:
                return x % bound

    def shuffle(self, xs: list) -> None:
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]


def _edge_count(n: int, dens) -> int:
    # Exact decimal arithmetic: float 0.3 * 1225 rounds down to 367,
    # while the intended value of round(0.3 * 1225) is 368 (half-up).
    d = Fraction(str(dens)) if not isinstance(dens, Fraction) else dens
    if not 0 < d <= 1:
        raise ValueError(f"density must be in (0, 1], got {dens}")
    total = n * (n - 1) // 2
    m = int(d * total + Fraction(1, 2))
    return m


def random_graph(n: int, dens, seed: int) -> ProblemGraph:
    """Seeded uniform random graph with m = round(density * n(n-1)/2) edges.

    m is computed by round-half-up on the exact decimal value of the density,
    and the m edges are a uniform sample (Floyd's algorithm over the
    lexicographic edge enumeration) driven by SplitMix64.
    """
    if n < 2:
        raise ValueError(f"random_graph needs n >= 2, got {n}")
    total = n * (n - 1) // 2
    m = _edge_count(n, dens)
    if m == 0:
        raise ValueError(f"density {dens} rounds to zero edges for n={n}")
    rng = SplitMix64(seed)
    chosen: set[int] = set()
    for j in range(total - m, total):
        t = rng.below(j + 1)
        chosen.add(t if t not in chosen else j)
    # lexicographic rank -> (u, v)
    edges = []
    starts = []  # starts[u] = rank of edge (u, u+1)
    acc = 0
    for u in range(n - 1):
        starts.append(acc)
        acc += n - 1 - u
    for r in sorted(chosen):
        u = 0
        while u + 1 < n - 1 and starts[u + 1] <= r:
            u += 1
        v = u + 1 + (r - starts[u])
        edges.append((u, v))
    return ProblemGraph(n, frozenset(edges))


@dataclass(frozen=True)
class Architecture:
    """Hardware coupling graph: q physical qubits, undirected couplings."""

    q: int
    couplings: frozenset[Edge]
    name: str = "custom"

    def __post_init__(self):
        for a, b in self.couplings:
            if a == b or not (0 <= a < self.q and 0 <= b < self.q):
                raise ValueError(f"bad coupling ({a}, {b}) for q={self.q}")
            if a > b:
                raise ValueError(f"coupling ({a}, {b}) not normalized")
        if self.q > 1 and not self._connected():
            raise ValueError(f"architecture {self.name!r} is not connected")

    def _connected(self) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(self.q)}
        for a, b in self.couplings:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.q

    @cached_property
    def adj(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in range(self.q)}
        for a, b in self.couplings:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    @cached_property
    def dist(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs hop distances (BFS from every qubit)."""
        rows = []
        for s in range(self.q):
            d = [-1] * self.q
            d[s] = 0
            frontier = [s]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in self.adj[x]:
                        if d[y] < 0:
                            d[y] = d[x] + 1
                            nxt.append(y)
                frontier = nxt
            rows.append(tuple(d))
        return tuple(rows)

    def coupled(self, a: int, b: int) -> bool:
        return _norm_edge(a, b) in self.couplings


def shortest_dist(arch: Architecture, a: int, b: int) -> int:
    """Hop distance between two physical qubits."""
    return arch.dist[a][b]


def linear(n: int) -> Architecture:
    """Linear nearest-neighbor chain of n qubits."""
    if n < 1:
        raise ValueError("linear architecture needs n >= 1")
    return Architecture(n, frozenset((i, i + 1) for i in range(n - 1)), f"linear:{n}")


def grid(rows: int, cols: int) -> Architecture:
    """rows x cols lattice, row-major qubit ids."""
    if rows < 1 or cols < 1:
        raise ValueError("grid needs positive dimensions")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.add((i, i + 1))
            if r + 1 < rows:
                edges.add((i, i + cols))
    return Architecture(rows * cols, frozenset(edges), f"grid:{rows}x{cols}")


def _load_coupling_file(text: str, name: str) -> Architecture:
    q = None
    m = None
    edges = []
    count = 0
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if q is None:
            if len(parts) != 2:
                raise GraphFormatError("expected header 'q m'", ln)
            try:
                q, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad header {line!r}", ln) from None
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'a b', got {line!r}", ln)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer endpoint in {line!r}", ln) from None
        edges.append(_norm_edge(a, b))
        count += 1
    if q is None:
        raise GraphFormatError("empty architecture file", 1)
    if count != m:
        raise GraphFormatError(f"header promised {m} couplings, found {count}", 1)
    return Architecture(q, frozenset(edges), name)


def _packaged(relpath: str) -> str:
    return resources.files("ctagsched.data").joinpath(relpath).read_text()


def ibm20() -> Architecture:
    """20-qubit device coupling map (4x5 lattice with sparse verticals)."""
    return _load_coupling_file(_packaged("ibm20.txt"), "ibm20")


def ibm27() -> Architecture:
    """27-qubit heavy-hex device coupling map."""
    return _load_coupling_file(_packaged("ibm27.txt"), "ibm27")


def make_architecture(spec: str) -> Architecture:
    """Build an architecture from a spec string.

    Grammar: ``linear:N`` | ``grid:RxC`` | ``ibm20`` | ``ibm27`` | ``file:PATH``.
    """
    spec = spec.strip()
    if spec == "ibm20":
        return ibm20()
    if spec == "ibm27":
        return ibm27()
    if spec.startswith("linear:"):
        return linear(int(spec.split(":", 1)[1]))
    if spec.startswith("grid:"):
        dims = spec.split(":", 1)[1].lower().split("x")
        if len(dims) != 2:
            raise ValueError(f"bad grid spec {spec!r}, expected grid:RxC")
        return grid(int(dims[0]), int(dims[1]))
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        with open(path) as fh:
            return _load_coupling_file(fh.read(), path)
    raise ValueError(f"unknown architecture spec {spec!r}")


def load_problem_graph(path: str) -> ProblemGraph:
    """Read the 'n m' + edge-list format; raises GraphFormatError with a line number."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    n = None
    m = None
    edges = []
    for ln, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2:
                raise GraphFormatError("expected header 'n m'", ln)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad header {line!r}", ln) from None
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", ln)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", ln) from None
        if u == v:
            raise GraphFormatError(f"self-loop on vertex {u}", ln)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in {line!r}", ln)
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("empty graph file", 1)
    if len(edges) != m:
        raise GraphFormatError(f"header promised {m} edges, found {len(edges)}", 1)
    try:
        return make_problem_graph(n, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc), 1) from None


def save_problem_graph(g: ProblemGraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in sorted(g.edges):
            fh.write(f"{u} {v}\n")


@dataclass(frozen=True)
class Mapping:
    """Injective placement of logical qubits onto physical qubits: pi[logical] = physical."""

    pi: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.pi)) != len(self.pi):
            raise ValueError("mapping is not injective")

    @property
    def n(self) -> int:
        return len(self.pi)

    def __getitem__(self, logical: int) -> int:
        return self.pi[logical]

    def inverse(self) -> dict[int, int]:
        return {p: l for l, p in enumerate(self.pi)}


def identity_mapping(n: int) -> Mapping:
    return Mapping(tuple(range(n)))


def random_initial_mapping(n: int, seed: int) -> Mapping:
    """Uniform random permutation of n positions from the seeded portable PRNG."""
    perm = list(range(n))
    SplitMix64(seed).shuffle(perm)
    return Mapping(tuple(perm))


def load_mapping(path: str) -> Mapping:
    pairs = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh.read().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(f"expected 'logical physical', got {line!r}", ln)
            try:
                l, p = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"non-integer in {line!r}", ln) from None
            if l in pairs:
                raise GraphFormatError(f"duplicate logical qubit {l}", ln)
            pairs[l] = p
    if sorted(pairs) != list(range(len(pairs))):
        raise GraphFormatError("logical qubits must be 0..n-1", 1)
    return Mapping(tuple(pairs[l] for l in range(len(pairs))))


def save_mapping(mp: Mapping, path: str) -> None:
    with open(path, "w") as fh:
        for l, p in enumerate(mp.pi):
            fh.write(f"{l} {p}\n")
