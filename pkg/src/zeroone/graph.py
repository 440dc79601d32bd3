"""Simple undirected graphs, seeded G(n,p) sampling and exact graph properties.

A :class:`Graph` stores a read-only dense ``uint8`` adjacency matrix; row
``v`` doubles as the neighbourhood bitset of ``v``.  Random graphs draw one
uniform double per unordered pair ``i < j`` in row-major order from
``numpy.random.Generator(PCG64(SeedSequence([master_seed, stream_index])))``
and keep the pair when the draw is ``< p``.  The stream can be consumed in
any chunking, so golden graphs are reproducible from ``(seed, stream)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapExceeded

K = _kernels.K


@dataclass(frozen=True)
class Caps:
    """Limits for the exponential solvers and enumerations."""

    chromatic_n: int = 64
    ham_n: int = 64
    tuple_domain: int = 20_000
    search_budget: int = 5_000_000


DEFAULT_CAPS = Caps()


class Graph:
    __slots__ = ("adj", "_deg")

    def __init__(self, adj):
        a = np.ascontiguousarray(adj, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if a.size and (a.max() > 1 or np.any(np.diagonal(a)) or not np.array_equal(a, a.T)):
            raise ValueError("adjacency must be 0/1, symmetric and loop-free")
        a.setflags(write=False)
        self.adj = a
        self._deg = None

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        a = np.zeros((n, n), np.uint8)
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v}) for n={n}")
            a[u, v] = a[v, u] = 1
        return cls(a)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), np.uint8))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(1 - np.eye(n, dtype=np.uint8))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        if self._deg is None:
            self._deg = self.adj.sum(axis=1, dtype=np.int64)
        return self._deg

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def neighbors(self, v: int) -> frozenset:
        return frozenset(np.flatnonzero(self.adj[v]).tolist())

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adj, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def complement(self) -> "Graph":
        return Graph((1 - self.adj) * (1 - np.eye(self.n, dtype=np.uint8)))

    def induced(self, vertices) -> "Graph":
        idx = np.asarray(sorted(vertices), dtype=np.int64)
        return Graph(self.adj[np.ix_(idx, idx)])

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges())})"

    # --- IO --------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges()]})

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        data = json.loads(text)
        n = int(data["n"])
        seen = set()
        for u, v in data["edges"]:
            if not (0 <= u < v < n):
                raise ValueError(f"edge [{u}, {v}] violates 0 <= u < v < n")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge [{u}, {v}]")
            seen.add((u, v))
        return cls.from_edges(n, seen)

    def to_matrix_text(self) -> str:
        return "".join("".join(map(str, row)) + "\n" for row in self.adj.tolist())

    @classmethod
    def from_matrix_text(cls, text: str) -> "Graph":
        rows = [ln.replace(" ", "") for ln in text.splitlines() if ln.strip()]
        return cls(np.array([[int(c) for c in r] for r in rows], np.uint8).reshape(len(rows), len(rows)))


# --- sampling --------------------------------------------------------------

@dataclass(frozen=True)
class RngSpec:
    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(
            np.random.SeedSequence([self.master_seed & (2**64 - 1), self.stream_index & (2**64 - 1)])))


def _check_p(p):
    if not (0.0 < p < 1.0):
        raise ValueError(f"edge probability must lie in (0, 1), got {p}")


def sample_gnp(n: int, p: float, rng: RngSpec) -> Graph:
    """G(n,p) with one draw per pair i<j in row-major order."""
    _check_p(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    gen = rng.generator()
    if n <= 4000:
        return Graph(K.gnp_upper(gen.random(n * (n - 1) // 2), n, p))
    # row-by-row consumption of the same stream keeps memory at one matrix
    a = np.zeros((n, n), np.uint8)
    for i in range(n - 1):
        a[i, i + 1:] = gen.random(n - 1 - i) < p
    a |= a.T
    return Graph(a)



class PackedGnp:
    """G(n,p) kept as bit-packed upper-triangle rows.

    Consumes the generator exactly as :func:`sample_gnp` does, so the same
    RngSpec yields the same graph; memory is n^2/8 bytes instead of n^2.
    """

    def __init__(self, n: int, p: float, rng: RngSpec):
        _check_p(p)
        self.n, self.p = n, p
        gen = rng.generator()
        self.bits = np.zeros((n, (n + 7) // 8), np.uint8)
        deg = np.zeros(n, np.int64)
        row = np.zeros(n, bool)
        block = gen.random(n * (n - 1) // 2) if n <= 4000 else None
        k = 0
        for i in range(n - 1):
            if block is None:
                r = gen.random(n - 1 - i) < p
            else:
                r = block[k:k + n - 1 - i] < p
                k += n - 1 - i
            row[:] = False
            row[i + 1:] = r
            self.bits[i] = np.packbits(row)
            deg[i] += int(r.sum())
            deg[i + 1:] += r
        self.degrees = deg

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        u, v = min(u, v), max(u, v)
        return bool(self.bits[u, v >> 3] >> (7 - (v & 7)) & 1)

    def row(self, v: int) -> np.ndarray:
        upper = np.unpackbits(self.bits[v], count=self.n).astype(bool)
        col = (self.bits[:, v >> 3] >> (7 - (v & 7)) & 1).astype(bool)
        col[v:] = False
        return upper | col

    def induced(self, vertices) -> Graph:
        vs = sorted(vertices)
        a = np.zeros((len(vs), len(vs)), np.uint8)
        for i, u in enumerate(vs):
            for j in range(i + 1, len(vs)):
                a[i, j] = a[j, i] = self.has_edge(u, vs[j])
        return Graph(a)

    def to_graph(self) -> Graph:
        a = np.unpackbits(self.bits, axis=1, count=self.n)
        return Graph(a | a.T)


# --- properties ------------------------------------------------------------

def is_connected(g: Graph) -> bool:
    return bool(K.is_connected(g.adj))


def is_bipartite(g: Graph) -> bool:
    return bool(K.is_bipartite(g.adj))


def _search(result: int, what: str) -> bool:
    if result < 0:
        raise CapExceeded(f"{what}: search budget exhausted")
    return bool(result)


def chromatic_number(g: Graph, caps: Caps = DEFAULT_CAPS) -> int:
    """Exact chromatic number by DSATUR-ordered search between clique and greedy bounds."""
    n = g.n
    if n == 0:
        return 0
    if not g.adj.any():
        return 1
    if K.is_bipartite(g.adj):
        return 2
    if n > caps.chromatic_n:
        raise CapExceeded(f"chromatic number: n={n} exceeds cap {caps.chromatic_n}")
    lo = max(3, int(K.max_clique_greedy(g.adj)))
    hi = int(K.dsatur_greedy(g.adj))
    for k in range(lo, hi):
        if _search(K.k_colorable(g.adj, k, caps.search_budget), "chromatic number"):
            return k
    return hi


def has_chromatic_number(adj: np.ndarray, k: int, caps: Caps = DEFAULT_CAPS) -> bool:
    """chi(adj) == k, using polynomial certificates before any exact search.

    Beyond the size cap only certificates are used (edgeless, bipartite, a
    greedy clique of size k+1); anything they cannot settle raises CapExceeded.
    """
    n = adj.shape[0]
    if n == 0:
        return k == 0
    if k <= 0:
        return False
    edgeless = not adj.any()
    if edgeless or k == 1:
        return edgeless and k == 1
    bip = bool(K.is_bipartite(adj))
    if k == 2 or bip:
        return bip and k == 2
    if K.clique_at_least(adj, k + 1):
        return False
    if n > caps.chromatic_n:
        raise CapExceeded(f"chromatic number: n={n} exceeds cap {caps.chromatic_n}")
    if not _search(K.k_colorable(adj, k, caps.search_budget), "chromatic number"):
        return False
    return not _search(K.k_colorable(adj, k - 1, caps.search_budget), "chromatic number")


def hamiltonian_adj(adj: np.ndarray, caps: Caps = DEFAULT_CAPS) -> bool:
    n = adj.shape[0]
    if n < 3:
        return False
    deg = adj.sum(axis=1)
    if deg.min() < 2:
        return False
    if 2 * deg.min() >= n:  # Dirac
        return True
    if not K.is_connected(adj):
        return False
    if n > caps.ham_n:
        raise CapExceeded(f"Hamiltonicity: n={n} exceeds cap {caps.ham_n}")
    return _search(K.hamiltonian(adj, caps.search_budget), "Hamiltonicity")


def is_hamiltonian(g: Graph, caps: Caps = DEFAULT_CAPS) -> bool:
    """Hamilton cycle test; graphs with fewer than 3 vertices are not Hamiltonian."""
    return hamiltonian_adj(g.adj, caps)


def hamiltonian_search(g: Graph, budget: int = 10**8) -> bool:
    """Plain backtracking without the Dirac shortcut (used to cross-check it)."""
    return _search(K.hamiltonian(g.adj, budget), "Hamiltonicity")


# --- degrees -----------------------------------------------------------------

def degree(g: Graph, v: int) -> int:
    return int(g.degrees[v])


def codegree(g: Graph, u: int, v: int) -> int:
    return int(np.count_nonzero(g.adj[u] & g.adj[v]))


def neighborhood_in(g: Graph, v: int, S) -> frozenset:
    return frozenset(s for s in S if g.adj[v, s])


def degree_class(g: Graph, m: int) -> frozenset:
    """D(m): the vertices of degree exactly m."""
    return frozenset(np.flatnonzero(g.degrees == m).tolist())


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class DegreeTarget:
    """m = round(np + h) with h = sqrt(n(ln n / 2 - ln ln ln n + alpha) 2p(1-p))."""

    n: int
    p: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.n <= 16:
            raise ValueError(f"DegreeTarget needs n >= 17 (ln ln ln n), got n={self.n}")
        _check_p(self.p)
        if self.inner < 0:
            raise ValueError("n(ln n / 2 - ln ln ln n + alpha) is negative")

    @property
    def inner(self) -> float:
        n = self.n
        return 0.5 * math.log(n) - math.log(math.log(math.log(n))) + self.alpha

    @property
    def h(self) -> float:
        return math.sqrt(self.n * self.inner * 2 * self.p * (1 - self.p))

    @property
    def m(self) -> int:
        return round_half_up(self.n * self.p + self.h)

    @property
    def eps(self) -> float:
        lln = math.log(math.log(self.n))
        return math.log(lln) / math.sqrt(lln)
