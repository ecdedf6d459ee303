"""Continuous log-expectation and the functions that bound it from above.

With ``c = 1/(-ln p)``:

* ``f(x) = ln C(n,x) + x(x-1)/2 ln p + (n-x) ln(1 - p^x)`` (log-gamma binomial)
* ``a(x) = x ln n + x(x-1)/2 ln p``
* ``b(x) = -x ln x - (n-x) ln(1 - x/n)``
* ``g(x) = a(x) + b(x)``, an upper bound for ``f`` on ``0 < x < n``
* ``h(x) = x ln n - x ln x + x(x-1)/2 ln p``, maximized where
  ``x = W(-n ln p / (e sqrt p)) / (-ln p)``

``n`` may be a real number in this module so that closed-form cases such as
``n = e^{3/2}`` can be evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .numerics import (
    DomainError,
    check_open_probability,
    lambert_w0,
    log1m_exp,
    log_binomial,
    log_probability,
    precision,
    resolve_precision,
    to_real,
)


@dataclass(frozen=True)
class AsymptoticParams:
    n: object
    p: object
    precision_bits: int | None = None

    def __post_init__(self):
        check_open_probability(self.p)
        with precision(self.precision_bits):
            if to_real(self.n) < 1:
                raise DomainError(f"n must be >= 1, got {self.n}")

    @property
    def prec(self) -> int:
        return resolve_precision(self.precision_bits)

    def log_p(self) -> mpmath.mpf:
        return log_probability(self.p, self.prec)

    def c(self) -> mpmath.mpf:
        with precision(self.prec):
            return -1 / self.log_p()

    def n_real(self) -> mpmath.mpf:
        with precision(self.prec):
            return to_real(self.n)

    def log_n(self) -> mpmath.mpf:
        with precision(self.prec):
            return mpmath.log(to_real(self.n))


@dataclass(frozen=True)
class EnvelopeEval:
    x: mpmath.mpf
    f: mpmath.mpf
    g: mpmath.mpf
    a: mpmath.mpf
    b: mpmath.mpf
    h: mpmath.mpf


def f_continuous(params: AsymptoticParams, x) -> mpmath.mpf:
    prec = params.prec
    with precision(prec):
        n, x = params.n_real(), to_real(x)
        if not 0 < x <= n:
            raise DomainError(f"f_continuous needs 0 < x <= n, got x={x}")
        logp = params.log_p()
        value = log_binomial(n, x, prec) + x * (x - 1) / 2 * logp
        if x < n:
            value += (n - x) * log1m_exp(x * logp, prec)
        return value


def envelope(params: AsymptoticParams, x) -> EnvelopeEval:
    with precision(params.prec):
        n, x = params.n_real(), to_real(x)
        if not 0 < x < n:
            raise DomainError(f"envelope needs 0 < x < n, got x={x}")
        logp, logn = params.log_p(), params.log_n()
        quad = x * (x - 1) / 2 * logp
        xlogx = x * mpmath.log(x)
        tail = (n - x) * mpmath.log1p(-x / n)
        a = x * logn + quad
        b = -xlogx - tail
        g = x * logn - xlogx - tail + quad
        h = x * logn - xlogx + quad
        return EnvelopeEval(x=x, f=f_continuous(params, x), g=g, a=a, b=b, h=h)


def a_prime(params: AsymptoticParams, x) -> mpmath.mpf:
    with precision(params.prec):
        return params.log_n() + (to_real(x) - mpmath.mpf(1) / 2) * params.log_p()


def b_prime(params: AsymptoticParams, x) -> mpmath.mpf:
    with precision(params.prec):
        x = to_real(x)
        return -mpmath.log(x) + mpmath.log1p(-x / params.n_real())


def h_prime(params: AsymptoticParams, x) -> mpmath.mpf:
    with precision(params.prec):
        x, logp = to_real(x), params.log_p()
        return params.log_n() - mpmath.log(x) - 1 + x * logp - logp / 2


def h_second(params: AsymptoticParams, x) -> mpmath.mpf:
    with precision(params.prec):
        return -1 / to_real(x) + params.log_p()


def h_stationary_point(params: AsymptoticParams) -> mpmath.mpf:
    """Unique zero of h' via the principal Lambert W branch."""
    prec = params.prec
    with precision(prec):
        if params.n_real() < 2:
            raise DomainError(f"h_stationary_point needs n >= 2, got {params.n}")
        logp = params.log_p()
        p = mpmath.exp(logp)
        arg = -params.n_real() * logp / (mpmath.e * mpmath.sqrt(p))
        return lambert_w0(arg, prec) / -logp


def theorem_residual(params: AsymptoticParams, log_total) -> mpmath.mpf:
    """``(-2 ln p) log_total / ln n - ln n + 2 ln ln n``; bounded if the growth law holds."""
    with precision(params.prec):
        if params.n_real() < 3:
            raise DomainError(f"theorem_residual needs n >= 3, got {params.n}")
        logn = params.log_n()
        return -2 * params.log_p() * to_real(log_total) / logn - logn + 2 * mpmath.log(logn)


def markov_threshold_log(params: AsymptoticParams) -> mpmath.mpf:
    """ln of ``n^(ln n / (-2 ln p))``."""
    with precision(params.prec):
        if params.n_real() < 2:
            raise DomainError(f"markov_threshold_log needs n >= 2, got {params.n}")
        logn = params.log_n()
        return logn * logn / (-2 * params.log_p())


def envelope_points(params: AsymptoticParams, offsets=(-1, 0, 1)) -> list[tuple[mpmath.mpf, mpmath.mpf]]:
    """``(x, f(x))`` at ``x = c ln n + delta`` for each offset inside ``(0, n]``."""
    out = []
    with precision(params.prec):
        center = params.c() * params.log_n()
        for delta in offsets:
            x = center + delta
            if 0 < x <= params.n_real():
                out.append((x, f_continuous(params, x)))
    return out
