"""Exhaustive expectation over every labeled graph or hypergraph on a few vertices.

Edge subsets are visited as integer bitmasks in increasing order and each
instance is censused with the naive subset enumerator only, so this path
shares no code with the Bron-Kerbosch kernel it is used to check.  Counts
are accumulated per edge count and weighted by ``p^e (1-p)^(m-e)`` at the
end, all in exact rationals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .numerics import DomainError, ResourceCapError, check_open_probability, to_fraction
from .sampling import naive_census_masks, naive_hyper_census

MAX_GRAPH_N = 6
MAX_HYPER_EDGES = 20


@dataclass(frozen=True)
class RationalExpectation:
    n: int
    p: Fraction
    total: Fraction
    per_size: dict[int, Fraction]
    r: int = 2
    total_probability: Fraction = Fraction(1)


def _weigh(by_edges: list[list[int]], seen: list[int], m: int, p: Fraction, n: int, r: int) -> RationalExpectation:
    q = 1 - p
    weights = [p**e * q ** (m - e) for e in range(m + 1)]
    per_size = {}
    for k in range(1, n + 1):
        value = sum((weights[e] * row[k] for e, row in enumerate(by_edges) if row[k]), Fraction(0))
        if value:
            per_size[k] = value
    # instances actually visited, not the binomial theorem
    total_probability = sum((seen[e] * weights[e] for e in range(m + 1)), Fraction(0))
    return RationalExpectation(
        n=n,
        p=p,
        total=sum(per_size.values(), Fraction(0)),
        per_size=per_size,
        r=r,
        total_probability=total_probability,
    )


def exhaustive_expected_cliques(n: int, p, max_n: int = MAX_GRAPH_N) -> RationalExpectation:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > max_n:
        raise ResourceCapError(f"exhaustive enumeration is limited to n <= {max_n}, got {n}")
    check_open_probability(p)
    p = to_fraction(p)
    pairs = list(itertools.combinations(range(n), 2))
    m = len(pairs)
    by_edges = [[0] * (n + 1) for _ in range(m + 1)]
    seen = [0] * (m + 1)
    for mask in range(1 << m):
        nbrs = [0] * n
        for bit, (u, v) in enumerate(pairs):
            if mask >> bit & 1:
                nbrs[u] |= 1 << v
                nbrs[v] |= 1 << u
        e = bin(mask).count("1")
        seen[e] += 1
        row = by_edges[e]
        for size, count in enumerate(naive_census_masks(n, nbrs)):
            row[size] += count
    return _weigh(by_edges, seen, m, p, n, 2)


def exhaustive_expected_hypercliques(n: int, r: int, p, max_edges: int = MAX_HYPER_EDGES) -> RationalExpectation:
    if not 2 <= r <= n:
        raise DomainError(f"need 2 <= r <= n, got n={n}, r={r}")
    m = math.comb(n, r)
    if m > max_edges:
        raise ResourceCapError(f"C(n, r) = {m} exceeds the exhaustive bound {max_edges}")
    check_open_probability(p)
    p = to_fraction(p)
    subsets = [sum(1 << v for v in c) for c in itertools.combinations(range(n), r)]
    by_edges = [[0] * (n + 1) for _ in range(m + 1)]
    seen = [0] * (m + 1)
    for mask in range(1 << m):
        edges = {s for bit, s in enumerate(subsets) if mask >> bit & 1}
        seen[len(edges)] += 1
        row = by_edges[len(edges)]
        for size, count in enumerate(naive_hyper_census(n, r, edges)):
            row[size] += count
    return _weigh(by_edges, seen, m, p, n, r)
