"""Maximal cliques of the random r-uniform hypergraph.

The expected number of maximal cliques on k vertices is
``C(n,k) p^C(k,r) (1 - p^C(k,r-1))^(n-k)`` with ``C(a,b) = 0`` for ``a < b``,
so sizes below ``r - 1`` contribute nothing unless ``k = n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import _kernels
from .exact_engine import RATIONAL_MAX_N, TERM_CAP, refine_peak
from .numerics import (
    NEG_INF,
    DomainError,
    ResourceCapError,
    check_open_probability,
    log1m_exp,
    log_binomial,
    log_probability,
    precision,
    resolve_precision,
    to_fraction,
    to_real,
)


@dataclass(frozen=True)
class HyperModelParams:
    n: int
    r: int
    p: object

    def __post_init__(self):
        if self.r < 2:
            raise DomainError(f"r must be >= 2, got {self.r}")
        if self.n < self.r:
            raise DomainError(f"need r <= n, got n={self.n}, r={self.r}")
        check_open_probability(self.p)


def hyper_term_log(params: HyperModelParams, k: int, prec: int | None = None) -> mpmath.mpf:
    n, r = params.n, params.r
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, n], got k={k}")
    inner = math.comb(k, r - 1)
    if k < n and inner == 0:
        return NEG_INF
    logp = log_probability(params.p, prec)
    with precision(prec):
        value = log_binomial(n, k, prec) + math.comb(k, r) * logp
        if k < n:
            value += (n - k) * log1m_exp(inner * logp, prec)
        return value


def hyper_term_rational(params: HyperModelParams, k: int) -> Fraction:
    n, r = params.n, params.r
    p = to_fraction(params.p)
    return math.comb(n, k) * p ** math.comb(k, r) * (1 - p ** math.comb(k, r - 1)) ** (n - k)


def hyper_expectation_rational(params: HyperModelParams, max_n: int = RATIONAL_MAX_N) -> Fraction:
    if params.n > max_n:
        raise ResourceCapError(f"exact hypergraph expectation is limited to n <= {max_n}")
    return sum((hyper_term_rational(params, k) for k in range(1, params.n + 1)), Fraction(0))


def hyper_log_terms(params: HyperModelParams, prec: int | None = None):
    """Double-precision ln of every term, ``-inf`` where the term vanishes."""
    return _kernels.hyper_log_terms(params.n, params.r, float(log_probability(params.p, prec)))


def hyper_expectation_log(params: HyperModelParams, prec: int | None = None, term_cap: int = TERM_CAP) -> mpmath.mpf:
    prec = resolve_precision(prec)
    if params.n > term_cap:
        raise ResourceCapError(f"n={params.n} exceeds the term-count cap {term_cap}")
    terms = hyper_log_terms(params, prec)
    log_total, _, _ = refine_peak(terms, lambda k: hyper_term_log(params, k, prec), prec, params.n)
    return log_total


def conjecture_exponent(params: HyperModelParams, constant=0, prec: int | None = None) -> mpmath.mpf:
    """``(ln n/(-ln p))^(1/(r-1)) ((1 - 1/r!) ln n - ln ln n/(r-1) + constant)``."""
    if params.n < 3:
        raise DomainError(f"conjecture_exponent needs n >= 3, got {params.n}")
    r = params.r
    logp = log_probability(params.p, prec)
    with precision(prec):
        logn = mpmath.log(params.n)
        scale = (logn / -logp) ** (mpmath.mpf(1) / (r - 1))
        inner = (1 - mpmath.mpf(1) / math.factorial(r)) * logn - mpmath.log(logn) / (r - 1) + to_real(constant)
        return scale * inner


def lower_term_size(params: HyperModelParams) -> int:
    """``floor(ln n / (-ln p))``, decided in exact arithmetic: largest k with (1/p)^k <= n."""
    q = 1 / to_fraction(params.p)
    with precision(resolve_precision(None)):
        k = int(mpmath.floor(mpmath.log(params.n) / mpmath.log(to_real(q))))
    k = max(k, 0)
    while k > 0 and q**k > params.n:
        k -= 1
    while q ** (k + 1) <= params.n:
        k += 1
    return k


def conjecture_lower_term_log(params: HyperModelParams, prec: int | None = None) -> mpmath.mpf:
    k = lower_term_size(params)
    if k < 1:
        raise DomainError(f"floor(ln n / -ln p) is 0 for n={params.n}, p={params.p}")
    if k > params.n:
        # C(n, k) = 0
        return NEG_INF
    return hyper_term_log(params, k, prec)
