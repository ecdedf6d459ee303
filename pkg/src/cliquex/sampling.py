"""Seeded G(n, p) and G^(r)(n, p) instances, maximal-clique censuses, Monte Carlo.

Vertices are ``0..n-1`` in memory and ``1..n`` in edge-list fixtures.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernels
from .exact_engine import ModelParams
from .hypergraph import HyperModelParams
from .numerics import DomainError, ResourceCapError, to_fraction

CLIQUE_LIMIT = 10**7
NAIVE_MAX_N = 15
NAIVE_HYPER_MAX_N = 12
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: np.ndarray = field(repr=False)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.shape != (self.n, self.n):
            raise DomainError(f"adjacency must be {self.n}x{self.n}, got {adj.shape}")
        if adj.diagonal().any():
            raise DomainError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise DomainError("adjacency must be symmetric")
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = True
        return cls(n, adj)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    def neighbor_masks(self) -> list[int]:
        return [sum(1 << int(v) for v in np.flatnonzero(row)) for row in self.adjacency]

    def bitrows(self) -> np.ndarray:
        if self.n > _kernels.MAX_GRAPH_BITS:
            raise ResourceCapError(f"bitset enumeration supports n <= {_kernels.MAX_GRAPH_BITS}, got {self.n}")
        return np.array(self.neighbor_masks(), dtype=np.uint64).reshape(self.n)


@dataclass(frozen=True)
class Hypergraph:
    n: int
    r: int
    edges: frozenset

    def __post_init__(self):
        if self.r < 2:
            raise DomainError(f"r must be >= 2, got {self.r}")
        clean = set()
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(set(e)) != self.r or e[0] < 0 or e[-1] >= self.n:
                raise DomainError(f"bad hyperedge {e} for n={self.n}, r={self.r}")
            clean.add(e)
        object.__setattr__(self, "edges", frozenset(clean))

    def flags(self) -> np.ndarray:
        """One flag per r-subset in colex order (the sampler's draw order)."""
        flags = np.zeros(math.comb(self.n, self.r), dtype=bool)
        for e in self.edges:
            flags[sum(math.comb(v, i + 1) for i, v in enumerate(e))] = True
        return flags

    def to_graph(self) -> Graph:
        if self.r != 2:
            raise DomainError("only 2-uniform hypergraphs are graphs")
        return Graph.from_edges(self.n, self.edges)


@dataclass
class CliqueCensus:
    histogram: dict[int, int]
    total: int
    cliques: list[frozenset] | None = None

    @classmethod
    def from_hist(cls, hist, cliques=None) -> CliqueCensus:
        histogram = {int(s): int(c) for s, c in enumerate(hist) if c}
        return cls(histogram, sum(histogram.values()), cliques)

    def __eq__(self, other):
        if not isinstance(other, CliqueCensus):
            return NotImplemented
        return self.histogram == other.histogram and self.total == other.total


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    trials: int
    master_seed: int


def _seed(seed: int) -> np.uint64:
    return np.uint64(int(seed) & SEED_MASK)


def _check_sampler_p(p) -> float:
    q = to_fraction(p) if not isinstance(p, str) else Fraction(p)
    if not 0 <= q <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return float(q)


def sample_gnp(n: int, p, seed: int) -> Graph:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return Graph(n, _kernels.sample_graph_matrix(n, _check_sampler_p(p), _seed(seed)))


def sample_hypergraph(n: int, r: int, p, seed: int) -> Hypergraph:
    if not 2 <= r <= n:
        raise DomainError(f"need 2 <= r <= n, got n={n}, r={r}")
    count = math.comb(n, r)
    flags = _kernels.sample_hyper_flags(n, r, _check_sampler_p(p), _seed(seed), count)
    combos = sorted(itertools.combinations(range(n), r), key=lambda c: c[::-1])
    return Hypergraph(n, r, frozenset(c for c, f in zip(combos, flags) if f))


def _members(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def maximal_cliques(g: Graph, limit: int = CLIQUE_LIMIT, witness: bool = False) -> CliqueCensus:
    """Pivoting Bron-Kerbosch census; ``witness=True`` also returns the cliques."""
    rows = g.bitrows()
    hist, count = _kernels.bk_census(rows, g.n, limit, False, np.zeros(1, dtype=np.uint64))
    if count < 0:
        raise ResourceCapError(f"more than {limit} maximal cliques")
    if not witness:
        return CliqueCensus.from_hist(hist)
    # second pass now that the output size is known
    out = np.zeros(max(count, 1), dtype=np.uint64)
    _kernels.bk_census(rows, g.n, limit, True, out)
    return CliqueCensus.from_hist(hist, [_members(int(m)) for m in out[:count]])


def naive_census_masks(n: int, nbrs: list[int]) -> list[int]:
    """Histogram of maximal cliques from neighbor bitmasks, by checking all 2^n subsets."""
    size = 1 << n
    complete = bytearray(size)
    complete[0] = 1
    hist = [0] * (n + 1)
    for s in range(1, size):
        v = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        complete[s] = complete[rest] and (rest & ~nbrs[v]) == 0
    for s in range(1, size):
        if not complete[s]:
            continue
        common = ~0
        t = s
        while t:
            v = (t & -t).bit_length() - 1
            common &= nbrs[v]
            t &= t - 1
        if common & ~s & (size - 1) == 0:
            hist[bin(s).count("1")] += 1
    return hist


def maximal_cliques_naive(g: Graph) -> CliqueCensus:
    if g.n > NAIVE_MAX_N:
        raise ResourceCapError(f"naive enumeration supports n <= {NAIVE_MAX_N}, got {g.n}")
    return CliqueCensus.from_hist(naive_census_masks(g.n, g.neighbor_masks()))


def maximal_hypercliques(h: Hypergraph, limit: int = CLIQUE_LIMIT) -> CliqueCensus:
    if h.n > _kernels.MAX_HYPER_BITS:
        raise ResourceCapError(f"hyperclique enumeration supports n <= {_kernels.MAX_HYPER_BITS}, got {h.n}")
    hist, count = _kernels.hyper_census(h.flags(), h.n, h.r, limit)
    if count < 0:
        raise ResourceCapError(f"more than {limit} maximal cliques")
    return CliqueCensus.from_hist(hist)


def naive_hyper_census(n: int, r: int, edge_masks: set[int]) -> list[int]:
    """Histogram of maximal complete vertex sets, checking all 2^n subsets."""
    size = 1 << n
    complete = bytearray(size)
    hist = [0] * (n + 1)
    for s in range(size):
        k = bin(s).count("1")
        if k < r:
            complete[s] = 1
        elif k == r:
            complete[s] = s in edge_masks
        else:
            # every r-subset of s lies in some s minus one vertex
            t, ok = s, True
            while t and ok:
                low = t & -t
                ok = complete[s ^ low]
                t ^= low
            complete[s] = ok
    for s in range(size):
        if complete[s] and all(not complete[s | (1 << w)] for w in range(n) if not s >> w & 1):
            hist[bin(s).count("1")] += 1
    return hist


def maximal_hypercliques_naive(h: Hypergraph) -> CliqueCensus:
    if h.n > NAIVE_HYPER_MAX_N:
        raise ResourceCapError(f"naive hyperclique enumeration supports n <= {NAIVE_HYPER_MAX_N}")
    masks = {sum(1 << v for v in e) for e in h.edges}
    return CliqueCensus.from_hist(naive_hyper_census(h.n, h.r, masks))


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    step = -(-trials // workers)
    return [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]


def mc_estimate(params, trials: int, master_seed: int, workers: int = 1, limit: int = CLIQUE_LIMIT) -> MCEstimate:
    """Sample mean and standard error of the maximal-clique count.

    Trial ``i`` uses a seed derived from ``(master_seed, i)`` only, and the
    per-trial counts are summed exactly in trial order, so the estimate does
    not depend on ``workers``.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    if not isinstance(params, (ModelParams, HyperModelParams)):
        raise TypeError(f"expected ModelParams or HyperModelParams, got {type(params).__name__}")
    master = _seed(master_seed)
    p = _check_sampler_p(params.p)

    if isinstance(params, HyperModelParams):
        if params.n > _kernels.MAX_HYPER_BITS:
            raise ResourceCapError(f"hypergraph simulation supports n <= {_kernels.MAX_HYPER_BITS}")

        def run(lo, hi):
            return _kernels.mc_hyper_totals(params.n, params.r, p, master, lo, hi, limit)

    else:
        if params.n > _kernels.MAX_GRAPH_BITS:
            raise ResourceCapError(f"graph simulation supports n <= {_kernels.MAX_GRAPH_BITS}")

        def run(lo, hi):
            return _kernels.mc_graph_totals(params.n, p, master, lo, hi, limit)

    ranges = _chunks(trials, workers)
    if workers == 1:
        parts = [run(lo, hi) for lo, hi in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: run(*r), ranges))
    totals = np.concatenate(parts)
    if (totals < 0).any():
        raise ResourceCapError(f"a trial exceeded {limit} maximal cliques")

    values = [int(v) for v in totals]
    s1 = sum(values)
    s2 = sum(v * v for v in values)
    mean = Fraction(s1, trials)
    if trials > 1:
        var = Fraction(trials * s2 - s1 * s1, trials * (trials - 1))
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return MCEstimate(mean=float(mean), stderr=stderr, trials=trials, master_seed=int(master_seed) & SEED_MASK)


# ---------------------------------------------------------------- fixtures


def write_edge_list(obj, path) -> None:
    """``n <count>`` header, then one 1-indexed edge per line."""
    edges = obj.edges() if isinstance(obj, Graph) else sorted(obj.edges)
    lines = [f"n {obj.n}"] + [" ".join(str(v + 1) for v in e) for e in edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path, r: int | None = None):
    """Parse an edge-list fixture; a Graph for pairs, a Hypergraph when ``r`` is given."""
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split()[0] != "n":
        raise DomainError("edge list must start with 'n <count>'")
    n = int(lines[0].split()[1])
    edges = [tuple(int(t) - 1 for t in ln.split()) for ln in lines[1:]]
    width = r if r is not None else 2
    for e in edges:
        if len(e) != width or min(e) < 0 or max(e) >= n:
            raise DomainError(f"bad edge {tuple(v + 1 for v in e)} for n={n}")
    if r is None:
        return Graph.from_edges(n, edges)
    return Hypergraph(n, r, frozenset(edges))
