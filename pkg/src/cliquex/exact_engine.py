"""Expected number of maximal cliques in G(n, p).

The per-size expectation is ``F_n(k) = C(n,k) p^C(k,2) (1 - p^k)^(n-k)`` and
the total is its sum over ``k = 1..n``.  Log-domain profiles fill the whole
term array in double precision with the compiled kernel, then re-evaluate
the terms near the peak at the working precision; everything outside that
window is below the working precision relative to the total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import _kernels
from .numerics import (
    DomainError,
    ResourceCapError,
    check_open_probability,
    log1m_exp,
    log_binomial,
    log_probability,
    log_sum_exp,
    precision,
    resolve_precision,
    to_fraction,
)

RATIONAL_MAX_N = 40
TERM_CAP = 10**7
MODES = ("log_domain", "rational")


@dataclass(frozen=True)
class ModelParams:
    n: int
    p: object
    mode: str = "log_domain"

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise DomainError(f"n must be an integer, got {self.n!r}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        check_open_probability(self.p)
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "rational":
            if not isinstance(self.p, Fraction):
                raise DomainError("rational mode needs p as a Fraction")
            if self.n > RATIONAL_MAX_N:
                raise ResourceCapError(f"rational mode is limited to n <= {RATIONAL_MAX_N}")


@dataclass
class ExpectationProfile:
    """Per-size log terms, log of the total, and the most popular size.

    ``log_terms[k - 1]`` holds ln F_n(k) as a double; ``peak_log_term`` and
    ``log_total`` are at the working precision.
    """

    n: int
    p: object
    log_terms: np.ndarray
    log_total: mpmath.mpf
    argmax_k: int
    peak_log_term: mpmath.mpf
    precision_bits: int
    exact_terms: list[Fraction] | None = field(default=None, repr=False)

    def log_term(self, k: int) -> float:
        return float(self.log_terms[k - 1])


def _check_term_args(n, k) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, n], got k={k}, n={n}")


def clique_term_log(n: int, k: int, p, prec: int | None = None) -> mpmath.mpf:
    """ln F_n(k) at the working precision."""
    _check_term_args(n, k)
    logp = log_probability(p, prec)
    with precision(prec):
        value = log_binomial(n, k, prec) + mpmath.mpf(k * (k - 1) // 2) * logp
        if k < n:
            value += (n - k) * log1m_exp(k * logp, prec)
        return value


def clique_term_rational(n: int, k: int, p: Fraction) -> Fraction:
    """F_n(k) as an exact rational."""
    _check_term_args(n, k)
    p = to_fraction(p)
    return math.comb(n, k) * p ** (k * (k - 1) // 2) * (1 - p**k) ** (n - k)


def exact_rational_expectation(n: int, p, max_n: int = RATIONAL_MAX_N) -> Fraction:
    """E[X_{n,p}] as an exact rational."""
    if n > max_n:
        raise ResourceCapError(f"exact rational expectation is limited to n <= {max_n}, got {n}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    check_open_probability(p)
    p = to_fraction(p)
    return sum((clique_term_rational(n, k, p) for k in range(1, n + 1)), Fraction(0))


def refine_peak(float_terms: np.ndarray, term_fn, prec: int, n: int):
    """Working-precision log-total and argmax from a double-precision profile.

    Terms further than ``prec*ln2 + ln n`` (plus margin) below the double
    maximum cannot move the total at ``prec`` bits and are left out.
    Returns ``(log_total, argmax_k, peak_log_term)``.
    """
    top = float(np.max(float_terms))
    if top == -np.inf:
        raise DomainError("every term is zero")
    cutoff = prec * math.log(2) + math.log(n) + 40.0
    # 1e-6 relative slack covers the double-precision error of the kernel terms
    window = np.flatnonzero(float_terms >= top - cutoff - 1e-6 * max(1.0, abs(top))) + 1
    best_k, best = 0, None
    values = []
    for k in window:
        v = term_fn(int(k))
        values.append(v)
        if best is None or v > best:
            best_k, best = int(k), v
    return log_sum_exp(values, prec), best_k, best


def expectation_profile(params: ModelParams, prec: int | None = None, term_cap: int = TERM_CAP) -> ExpectationProfile:
    prec = resolve_precision(prec)
    n, p = params.n, params.p
    if n > term_cap:
        raise ResourceCapError(f"n={n} exceeds the term-count cap {term_cap}")

    if params.mode == "rational":
        exact = [clique_term_rational(n, k, p) for k in range(1, n + 1)]
        argmax = max(range(n), key=lambda i: (exact[i], -i)) + 1
        with precision(prec):
            logs = [_log_fraction(t) for t in exact]
            total = _log_fraction(sum(exact, Fraction(0)))
        return ExpectationProfile(
            n=n,
            p=p,
            log_terms=np.array([float(v) for v in logs]),
            log_total=total,
            argmax_k=argmax,
            peak_log_term=logs[argmax - 1],
            precision_bits=prec,
            exact_terms=exact,
        )

    logp = float(log_probability(p, prec))
    terms = _kernels.graph_log_terms(n, logp)
    log_total, argmax, peak = refine_peak(terms, lambda k: clique_term_log(n, k, p, prec), prec, n)
    return ExpectationProfile(
        n=n,
        p=p,
        log_terms=terms,
        log_total=log_total,
        argmax_k=argmax,
        peak_log_term=peak,
        precision_bits=prec,
    )


def _log_fraction(q: Fraction) -> mpmath.mpf:
    if q == 0:
        return mpmath.ninf
    return mpmath.log(q.numerator) - mpmath.log(q.denominator)


def sandwich_bounds(profile: ExpectationProfile) -> tuple[mpmath.mpf, mpmath.mpf]:
    """``(ln F_n(k~), ln n + ln F_n(k~))``, which bracket ``profile.log_total``."""
    with precision(profile.precision_bits):
        lower = profile.peak_log_term
        return lower, lower + mpmath.log(profile.n)
