"""Line embeddings: ordered chains of consecutively-coupled physical qubits.

Grids get a deterministic generalized Hilbert traversal; everything else goes
through a budgeted backtracking search for Hamiltonian (sub)paths.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ctagsched.graphs import Architecture, SplitMix64


class EmbeddingBudgetExceeded(RuntimeError):
    """Search budget ran out before finding a path or proving none exists."""


@dataclass(frozen=True)
class LineEmbedding:
    order: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise ValueError("embedding repeats a qubit")

    def __len__(self) -> int:
        return len(self.order)

    def canonical(self) -> tuple[int, ...]:
        # forward and reverse traversals are the same embedding
        rev = tuple(reversed(self.order))
        return min(self.order, rev)


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _gilbert(x, y, ax, ay, bx, by, out):
    # rectangle-splitting recursion for generalized Hilbert curves, after
    # Cerveny's gilbert2d (github.com/jakubcerveny/gilbert, BSD-2)
    w = abs(ax + ay)
    h = abs(bx + by)
    dax, day = _sgn(ax), _sgn(ay)
    dbx, dby = _sgn(bx), _sgn(by)
    if h == 1:
        for _ in range(w):
            out.append((x, y))
            x, y = x + dax, y + day
        return
    if w == 1:
        for _ in range(h):
            out.append((x, y))
            x, y = x + dbx, y + dby
        return
    ax2, ay2 = ax // 2, ay // 2
    bx2, by2 = bx // 2, by // 2
    w2 = abs(ax2 + ay2)
    h2 = abs(bx2 + by2)
    if 2 * w > 3 * h:
        if w2 % 2 and w > 2:
            ax2, ay2 = ax2 + dax, ay2 + day
        _gilbert(x, y, ax2, ay2, bx, by, out)
        _gilbert(x + ax2, y + ay2, ax - ax2, ay - ay2, bx, by, out)
    else:
        if h2 % 2 and h > 2:
            bx2, by2 = bx2 + dbx, by2 + dby
        _gilbert(x, y, bx2, by2, ax2, ay2, out)
        _gilbert(x + bx2, y + by2, ax, ay, bx - bx2, by - by2, out)
        _gilbert(
            x + (ax - dax) + (bx2 - dbx),
            y + (ay - day) + (by2 - dby),
            -bx2,
            -by2,
            -(ax - ax2),
            -(ay - ay2),
            out,
        )


def hilbert_embedding(rows: int, cols: int) -> LineEmbedding:
    """Deterministic Hilbert-style Hamiltonian path over grid(rows, cols).

    The rectangle-splitting recursion covers any grid with an even side with
    unit steps; an odd-by-odd grid gets its first row peeled off and walked
    left to right, with the recursion covering the even remainder from the
    cell below the row's end.
    """
    if rows < 2 or cols < 2:
        raise ValueError("need at least a 2x2 grid")

    def run(w, h):
        # the recursion only guarantees unit steps when the major axis is
        # even, so an odd side must ride along the minor axis
        out: list[tuple[int, int]] = []
        if w % 2 == 0 and (h % 2 == 1 or w >= h):
            _gilbert(0, 0, w, 0, 0, h, out)
        else:
            _gilbert(0, 0, 0, h, w, 0, out)
        return out

    if rows % 2 == 1 and cols % 2 == 1:
        # no even side to lead with: peel the first row, cover the even
        # remainder starting under the peeled row's last cell
        prefix = [(c, 0) for c in range(cols)]
        sub = run(cols, rows - 1)
        cells = prefix + [(cols - 1 - c, r + 1) for c, r in sub]
    else:
        cells = run(cols, rows)
    return LineEmbedding(tuple(r * cols + c for c, r in cells))


def find_line_embedding(
    arch: Architecture,
    seed: int = 0,
    length: int | None = None,
    budget: int = 10**6,
) -> LineEmbedding | None:
    """Backtracking search for a chain of `length` distinct coupled qubits.

    length defaults to arch.q (a full Hamiltonian path).  Neighbors are tried
    fewest-onward-moves first (Warnsdorff); the seed only perturbs tie order.
    Returns None when the exhausted search proves no such chain exists; raises
    EmbeddingBudgetExceeded after `budget` node expansions, which is an
    "unknown" outcome rather than a proof.
    """
    q = arch.q
    target = q if length is None else length
    if not 1 <= target <= q:
        raise ValueError(f"length {target} out of range for {q} qubits")
    if target == 1:
        return LineEmbedding((0,))
    if target == q and sum(1 for v in range(q) if len(arch.adj[v]) == 1) > 2:
        # more than two pendant vertices cannot all be path endpoints
        return None

    rng = SplitMix64(seed)
    salt = list(range(q))
    rng.shuffle(salt)
    starts = sorted(range(q), key=lambda v: (len(arch.adj[v]), salt[v]))

    expansions = 0
    path: list[int] = []
    on_path = [False] * q
    free_deg = [len(arch.adj[v]) for v in range(q)]

    def dfs(v: int) -> bool:
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            raise EmbeddingBudgetExceeded(f"budget {budget} exhausted")
        path.append(v)
        on_path[v] = True
        for u in arch.adj[v]:
            free_deg[u] -= 1
        if len(path) == target:
            return True
        nbrs = sorted(
            (u for u in arch.adj[v] if not on_path[u]),
            key=lambda u: (free_deg[u], salt[u]),
        )
        for u in nbrs:
            if dfs(u):
                return True
        path.pop()
        on_path[v] = False
        for u in arch.adj[v]:
            free_deg[u] += 1
        return False

    for s in starts:
        if dfs(s):
            return LineEmbedding(tuple(path))
    return None


def multi_embeddings(
    arch: Architecture,
    k: int,
    seed: int = 0,
    length: int | None = None,
    budget: int = 10**6,
) -> list[LineEmbedding]:
    """Up to k distinct embeddings from re-seeded searches (reverses dedup)."""
    if k < 1:
        raise ValueError("k must be positive")
    found: list[LineEmbedding] = []
    seen = set()
    for attempt in range(8 * k + 16):
        try:
            emb = find_line_embedding(arch, seed + attempt, length, budget)
        except EmbeddingBudgetExceeded:
            continue
        if emb is None:
            break
        key = emb.canonical()
        if key not in seen:
            seen.add(key)
            found.append(emb)
        if len(found) == k:
            break
    return found


def load_embedding(path: str) -> LineEmbedding:
    with open(path) as fh:
        return LineEmbedding(tuple(int(tok) for tok in fh.read().split()))


def save_embedding(emb: LineEmbedding, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(" ".join(str(v) for v in emb.order) + "\n")


def device_embedding(name: str) -> LineEmbedding:
    """Cached chain for a shipped device topology (ibm20 full path, ibm27 the
    longest chain it admits; six pendants rule out a full Hamiltonian path)."""
    text = resources.files("ctagsched.data").joinpath(f"embeddings/{name}.txt").read_text()
    return LineEmbedding(tuple(int(tok) for tok in text.split()))
