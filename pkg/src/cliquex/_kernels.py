"""Inner loops: seeded sampling, bitset clique enumeration, log-term arrays.

Bitsets are ``uint64`` words, so the enumerators handle at most 64 vertices
(62 for hypergraphs, where Gosper's hack needs two spare bits).  Every
sampler draws from one splitmix64 stream in colex pair/subset order, which
makes ``sample_hypergraph(n, 2, p, seed)`` and ``sample_gnp(n, p, seed)``
the same graph.
"""

import math

import numpy as np
from scipy.special import gammaln

from ._accel import JIT_ENABLED, kernel

MAX_GRAPH_BITS = 64
MAX_HYPER_BITS = 62

ZERO = np.uint64(0)
ONE = np.uint64(1)
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
M1 = np.uint64(0x5555555555555555)
M2 = np.uint64(0x3333333333333333)
M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
H01 = np.uint64(0x0101010101010101)
INV_2_53 = 1.0 / 9007199254740992.0
LN2 = 0.6931471805599453


# ---------------------------------------------------------------- rng


@kernel
def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


@kernel
def derive_seed(master, index):
    """Seed of trial ``index``: the index-th output of splitmix64 keyed by ``master``."""
    return mix64(np.uint64(master) + np.uint64(index + 1) * GOLDEN)


@kernel
def sample_graph_bits(n, p, seed):
    rows = np.zeros(n, dtype=np.uint64)
    state = np.uint64(seed)
    for j in range(n):
        for i in range(j):
            state = state + GOLDEN
            u = np.float64(mix64(state) >> np.uint64(11)) * INV_2_53
            if u < p:
                rows[i] |= ONE << np.uint64(j)
                rows[j] |= ONE << np.uint64(i)
    return rows


@kernel
def sample_graph_matrix(n, p, seed):
    adj = np.zeros((n, n), dtype=np.bool_)
    state = np.uint64(seed)
    for j in range(n):
        for i in range(j):
            state = state + GOLDEN
            u = np.float64(mix64(state) >> np.uint64(11)) * INV_2_53
            if u < p:
                adj[i, j] = True
                adj[j, i] = True
    return adj


@kernel
def sample_hyper_flags(n, r, p, seed, count):
    # one flag per r-subset, indexed by colex rank
    flags = np.zeros(count, dtype=np.bool_)
    state = np.uint64(seed)
    for idx in range(count):
        state = state + GOLDEN
        u = np.float64(mix64(state) >> np.uint64(11)) * INV_2_53
        if u < p:
            flags[idx] = True
    return flags


# ---------------------------------------------------------------- bits


@kernel
def popcount64(x):
    x = x - ((x >> ONE) & M1)
    x = (x & M2) + ((x >> np.uint64(2)) & M2)
    x = (x + (x >> np.uint64(4))) & M4
    return np.int64((x * H01) >> np.uint64(56))


@kernel
def lowest_index(x):
    low = x & (~x + ONE)
    return popcount64(low - ONE)


@kernel
def full_mask(n):
    if n >= 64:
        return ~ZERO
    return (ONE << np.uint64(n)) - ONE


# ---------------------------------------------------------------- graphs


@kernel
def choose_pivot(rows, cand, excl):
    pool = cand | excl
    best = -1
    pivot = 0
    while pool != ZERO:
        u = lowest_index(pool)
        pool = pool & (pool - ONE)
        c = popcount64(cand & rows[u])
        if c > best:
            best = c
            pivot = u
    return pivot


@kernel
def bk_census(rows, n, limit, record, out):
    """Tomita-style pivoting Bron-Kerbosch, iterative.

    Returns ``(hist, count)`` where ``hist[s]`` counts maximal cliques of
    size ``s``; ``count`` is -1 once more than ``limit`` cliques are found.
    With ``record`` the clique masks are written to ``out``.
    """
    hist = np.zeros(n + 1, dtype=np.int64)
    if n == 0:
        return hist, 0
    cand = np.zeros(n + 1, dtype=np.uint64)
    excl = np.zeros(n + 1, dtype=np.uint64)
    todo = np.zeros(n + 1, dtype=np.uint64)
    clique = np.zeros(n + 1, dtype=np.uint64)
    cand[0] = full_mask(n)
    todo[0] = cand[0] & ~rows[choose_pivot(rows, cand[0], excl[0])]
    count = 0
    depth = 0
    while depth >= 0:
        t = todo[depth]
        if t == ZERO:
            depth -= 1
            continue
        low = t & (~t + ONE)
        todo[depth] = t ^ low
        nbrs = rows[popcount64(low - ONE)]
        new_cand = cand[depth] & nbrs
        new_excl = excl[depth] & nbrs
        cand[depth] = cand[depth] ^ low
        excl[depth] = excl[depth] | low
        if new_cand == ZERO:
            if new_excl == ZERO:
                if count >= limit:
                    return hist, -1
                hist[depth + 1] += 1
                if record:
                    out[count] = clique[depth] | low
                count += 1
            continue
        clique[depth + 1] = clique[depth] | low
        depth += 1
        cand[depth] = new_cand
        excl[depth] = new_excl
        todo[depth] = new_cand & ~rows[choose_pivot(rows, new_cand, new_excl)]
    return hist, count


@kernel
def mc_graph_totals(n, p, master, lo, hi, limit):
    totals = np.empty(hi - lo, dtype=np.int64)
    scratch = np.zeros(1, dtype=np.uint64)
    for t in range(lo, hi):
        rows = sample_graph_bits(n, p, derive_seed(master, t))
        _, count = bk_census(rows, n, limit, False, scratch)
        totals[t - lo] = count
    return totals


# ---------------------------------------------------------------- hypergraphs


@kernel
def binom_table(n, r):
    table = np.zeros((n + 1, r + 1), dtype=np.int64)
    for a in range(n + 1):
        table[a, 0] = 1
        for b in range(1, min(a, r) + 1):
            table[a, b] = table[a - 1, b - 1] + (table[a - 1, b] if b <= a - 1 else 0)
    return table


@kernel
def colex_rank(mask, table):
    rank = 0
    i = 0
    while mask != ZERO:
        v = lowest_index(mask)
        mask = mask & (mask - ONE)
        i += 1
        rank += table[v, i]
    return rank


@kernel
def can_extend(flags, table, r, members, size, w):
    """True when the complete set ``members[:size]`` stays complete with ``w``."""
    if size + 1 < r:
        return True
    wbit = ONE << np.uint64(w)
    k = r - 1
    sel = (ONE << np.uint64(k)) - ONE
    stop = ONE << np.uint64(size)
    while sel < stop:
        verts = wbit
        rest = sel
        while rest != ZERO:
            verts |= ONE << np.uint64(members[lowest_index(rest)])
            rest = rest & (rest - ONE)
        if not flags[colex_rank(verts, table)]:
            return False
        low = sel & (~sel + ONE)
        ripple = sel + low
        sel = (((ripple ^ sel) >> np.uint64(2)) // low) | ripple
    return True


@kernel
def hyper_census(flags, n, r, limit):
    """Ordered extension search over complete vertex sets.

    Each complete set is reached once (members added in increasing order)
    and counted when no outside vertex extends it.
    """
    table = binom_table(n, r)
    hist = np.zeros(n + 1, dtype=np.int64)
    members = np.zeros(n + 1, dtype=np.int64)
    inside = np.zeros(n, dtype=np.bool_)
    nxt = np.zeros(n + 2, dtype=np.int64)
    count = 0
    depth = 0
    while depth >= 0:
        v = nxt[depth]
        if v >= n:
            depth -= 1
            if depth >= 0:
                inside[members[depth]] = False
            continue
        nxt[depth] = v + 1
        if not can_extend(flags, table, r, members, depth, v):
            continue
        members[depth] = v
        inside[v] = True
        depth += 1
        nxt[depth] = v + 1
        maximal = True
        for w in range(n):
            if not inside[w] and can_extend(flags, table, r, members, depth, w):
                maximal = False
                break
        if maximal:
            if count >= limit:
                return hist, -1
            hist[depth] += 1
            count += 1
    return hist, count


@kernel
def mc_hyper_totals(n, r, p, master, lo, hi, limit):
    count = binom_table(n, r)[n, r]
    totals = np.empty(hi - lo, dtype=np.int64)
    for t in range(lo, hi):
        flags = sample_hyper_flags(n, r, p, derive_seed(master, t), count)
        _, c = hyper_census(flags, n, r, limit)
        totals[t - lo] = c
    return totals


# ---------------------------------------------------------------- log terms


@kernel
def log1m_exp_scalar(y):
    if y > -LN2:
        return math.log(-math.expm1(y))
    return math.log1p(-math.exp(y))


@kernel
def comb_float(k, j):
    if j > k or j < 0:
        return 0.0
    c = 1.0
    for i in range(j):
        c = c * (k - i) / (i + 1)
    return c


@kernel
def _graph_log_terms_loop(n, logp):
    out = np.empty(n, dtype=np.float64)
    lgn = math.lgamma(n + 1.0)
    for k in range(1, n + 1):
        t = lgn - (math.lgamma(k + 1.0) + math.lgamma(n - k + 1.0))
        t += 0.5 * k * (k - 1) * logp
        if k < n:
            t += (n - k) * log1m_exp_scalar(k * logp)
        out[k - 1] = t
    return out


@kernel
def _hyper_log_terms_loop(n, r, logp):
    out = np.empty(n, dtype=np.float64)
    lgn = math.lgamma(n + 1.0)
    for k in range(1, n + 1):
        t = lgn - (math.lgamma(k + 1.0) + math.lgamma(n - k + 1.0))
        t += comb_float(k, r) * logp
        if k < n:
            inner = comb_float(k, r - 1)
            if inner == 0.0:
                t = -np.inf
            else:
                t += (n - k) * log1m_exp_scalar(inner * logp)
        out[k - 1] = t
    return out


def _log1m_exp_array(y):
    out = np.empty_like(y)
    near = y > -LN2
    out[near] = np.log(-np.expm1(y[near]))
    out[~near] = np.log1p(-np.exp(y[~near]))
    return out


def _log_binomial_array(n, k):
    return gammaln(n + 1.0) - (gammaln(k + 1.0) + gammaln(n - k + 1.0))


def _graph_log_terms_numpy(n, logp):
    k = np.arange(1, n + 1, dtype=np.float64)
    out = _log_binomial_array(n, k) + 0.5 * k * (k - 1) * logp
    out[:-1] += (n - k[:-1]) * _log1m_exp_array(k[:-1] * logp)
    return out


def _comb_array(k, j):
    c = np.ones_like(k)
    for i in range(j):
        c = c * (k - i) / (i + 1)
    return np.where(k >= j, c, 0.0)


def _hyper_log_terms_numpy(n, r, logp):
    k = np.arange(1, n + 1, dtype=np.float64)
    out = _log_binomial_array(n, k) + _comb_array(k, r) * logp
    inner = _comb_array(k[:-1], r - 1)
    tail = np.full(n - 1, -np.inf)
    live = inner > 0
    tail[live] = (n - k[:-1][live]) * _log1m_exp_array(inner[live] * logp)
    out[:-1] += tail
    return out


if JIT_ENABLED:
    graph_log_terms = _graph_log_terms_loop
    hyper_log_terms = _hyper_log_terms_loop
else:
    graph_log_terms = _graph_log_terms_numpy
    hyper_log_terms = _hyper_log_terms_numpy
