"""Maximum-clique instances: graphs, QUBO encoding, an exact reference
enumerator, random graphs and the clique sampler fed to :func:`enumerate_opt`."""

from __future__ import annotations

import math
import time
from collections import Counter
from fractions import Fraction
from typing import Iterable

import numpy as np

from ._validation import check_int, check_random_state, check_real
from .enumeration import SamplerExhausted, Solution
from .ising import AnnealSchedule, QuboModel, _anneal, qubo_to_ising

__all__ = [
    "Graph",
    "is_clique",
    "max_clique_qubo",
    "enumerate_max_cliques_exact",
    "ExactBudgetExceeded",
    "erdos_renyi",
    "er_edge_count",
    "make_clique_sampler",
    "CliqueSampler",
    "key_to_vertices",
    "vertices_to_key",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Undirected simple graph on vertices ``0..n-1`` with bitset adjacency rows."""

    __slots__ = ("n_vertices", "_adj")

    def __init__(self, n_vertices: int, edges: Iterable = ()):
        self.n_vertices = check_int(n_vertices, "n_vertices", min_value=1)
        adj = [0] * self.n_vertices
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.n_vertices} vertices")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._adj = tuple(adj)

    @classmethod
    def from_adjacency(cls, matrix) -> "Graph":
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {a.shape}")
        if np.any(np.diag(a) != 0):
            raise ValueError("adjacency matrix has self-loops")
        if not np.array_equal(a != 0, (a != 0).T):
            raise ValueError("adjacency matrix must be symmetric")
        rows, cols = np.nonzero(np.triu(a != 0, k=1))
        return cls(a.shape[0], zip(rows.tolist(), cols.tolist()))

    @property
    def adjacency(self) -> tuple:
        """Neighbour bitmask of each vertex."""
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def neighbors(self, v: int) -> list:
        return list(_bits(self._adj[v]))

    def edges(self) -> list:
        return [(u, v) for u in range(self.n_vertices) for v in _bits(self._adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list:
        full = (1 << self.n_vertices) - 1
        out = []
        for u in range(self.n_vertices):
            missing = ~self._adj[u] & full & ~((1 << (u + 1)) - 1)
            out.extend((u, v) for v in _bits(missing))
        return out

    @property
    def n_edges(self) -> int:
        return sum(a.bit_count() for a in self._adj) // 2

    @property
    def density(self) -> float:
        pairs = math.comb(self.n_vertices, 2)
        return self.n_edges / pairs if pairs else 0.0

    def to_adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=np.int8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n_vertices == other.n_vertices and self._adj == other._adj

    def __hash__(self):
        return hash((self.n_vertices, self._adj))

    def __repr__(self):
        return f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"


def _mask_of(g: Graph, vertices) -> int:
    mask = 0
    for v in vertices:
        v = int(v)
        if not 0 <= v < g.n_vertices:
            raise ValueError(f"vertex {v} out of range for {g.n_vertices} vertices")
        mask |= 1 << v
    return mask


def _is_clique_mask(adj, mask: int) -> bool:
    rest = mask
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        if rest & ~adj[v]:
            return False
    return True


def is_clique(g: Graph, vertices) -> bool:
    """True iff every pair of ``vertices`` is adjacent (empty sets and singletons count)."""
    return _is_clique_mask(g.adjacency, _mask_of(g, vertices))


def vertices_to_key(vertices, n: int) -> str:
    chars = ["0"] * n
    for v in vertices:
        chars[v] = "1"
    return "".join(chars)


def key_to_vertices(key: str) -> tuple:
    return tuple(i for i, c in enumerate(key) if c == "1")


def max_clique_qubo(g: Graph, penalty: float = 2.0) -> QuboModel:
    """``-sum_v x_v + penalty * sum_{non-adjacent u<v} x_u x_v``; argmin = maximum cliques iff penalty > 1."""
    penalty = check_real(penalty, "penalty")
    if penalty <= 1.0:
        raise ValueError(f"penalty must exceed 1 for the encoding to be exact, got {penalty}")
    quadratic = {pair: penalty for pair in g.non_edges()}
    return QuboModel(g.n_vertices, quadratic, -np.ones(g.n_vertices))


class ExactBudgetExceeded(RuntimeError):
    """The exact enumerator ran past its time budget."""


class _MaxCliqueSearch:
    def __init__(self, adj, budget_seconds):
        self.adj = adj
        self.best = 0
        self.found = []
        self.nodes = 0
        self.deadline = None if budget_seconds is None else time.perf_counter() + budget_seconds

    def expand(self, size, r, p, x):
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 0 and time.perf_counter() > self.deadline:
            raise ExactBudgetExceeded(f"exact search exceeded its budget after {self.nodes} nodes")
        if not p:
            if not x and size >= self.best:
                if size > self.best:
                    self.best = size
                    self.found = []
                self.found.append(r)
            return
        if size + p.bit_count() < self.best:
            return
        adj = self.adj
        # Tomita pivot: the vertex of P | X with the most neighbours in P
        pivot, most = -1, -1
        for u in _bits(p | x):
            k = (p & adj[u]).bit_count()
            if k > most:
                pivot, most = u, k
        for v in _bits(p & ~adj[pivot]):
            bit = 1 << v
            self.expand(size + 1, r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit
            if size + p.bit_count() < self.best:
                return


def enumerate_max_cliques_exact(g: Graph, budget_seconds: float | None = None) -> list:
    """Every maximum clique of ``g`` as a sorted tuple of vertices, in sorted order.

    Bron-Kerbosch with Tomita pivoting, pruned whenever the current clique plus
    all remaining candidates cannot reach the incumbent size.  Raises
    :class:`ExactBudgetExceeded` when ``budget_seconds`` runs out.
    """
    search = _MaxCliqueSearch(g.adjacency, budget_seconds)
    search.expand(0, 0, (1 << g.n_vertices) - 1, 0)
    return sorted(tuple(_bits(mask)) for mask in search.found)


def er_edge_count(n: int, density: float) -> int:
    """``C(n, 2) * density`` rounded to the nearest integer, halves rounded up."""
    exact = math.comb(n, 2) * Fraction(density)
    return math.floor(exact + Fraction(1, 2))


def erdos_renyi(n: int, density: float, seed=None) -> Graph:
    """Random graph with exactly ``er_edge_count(n, density)`` edges, uniform without replacement."""
    n = check_int(n, "n", min_value=1)
    density = check_real(density, "density", low=0.0, high=1.0)
    rng = check_random_state(seed)
    iu, ju = np.triu_indices(n, k=1)
    chosen = np.sort(rng.choice(iu.shape[0], size=er_edge_count(n, density), replace=False))
    return Graph(n, zip(iu[chosen].tolist(), ju[chosen].tolist()))


class CliqueSampler:
    """Feasible-solution sampler for the maximum-clique QUBO.

    Each :meth:`draw` anneals the Ising image of the QUBO, decodes spins to a
    vertex set and redraws until the set is a clique.  Draws are keyed by
    the 0/1 membership string and cost ``-size``.  ``counts`` tallies every
    yielded clique key.
    """

    def __init__(self, g: Graph, penalty=2.0, schedule=None, seed=None, max_redraws=None):
        self.graph = g
        self.qubo = max_clique_qubo(g, penalty)
        self.ising = qubo_to_ising(self.qubo)
        self.schedule = AnnealSchedule() if schedule is None else schedule
        self.max_redraws = max_redraws
        self._betas = self.schedule.betas()
        self._rng = check_random_state(seed)
        self.n_raw = 0
        self.n_rejected = 0
        self.counts = Counter()

    def draw(self) -> Solution:
        adj = self.graph.adjacency
        tries = 0
        while True:
            spins = _anneal(self.ising, self.schedule, self._rng, self._betas)
            self.n_raw += 1
            members = np.flatnonzero(spins < 0)
            mask = 0
            for v in members.tolist():
                mask |= 1 << v
            if _is_clique_mask(adj, mask):
                key = vertices_to_key(members.tolist(), self.graph.n_vertices)
                self.counts[key] += 1
                return Solution(key, -float(members.shape[0]))
            self.n_rejected += 1
            tries += 1
            if self.max_redraws is not None and tries >= self.max_redraws:
                raise SamplerExhausted(f"no clique after {tries} annealing reads")


def make_clique_sampler(g: Graph, penalty=2.0, schedule=None, seed=None, max_redraws=None) -> CliqueSampler:
    return CliqueSampler(g, penalty, schedule, seed, max_redraws)
