"""High-precision scalar kernels.

Values are :class:`mpmath.mpf` computed at a caller-chosen mantissa width
(default 128 bits, overridable with ``CLIQUEX_PRECISION_BITS``).  The log of
a zero probability is the sentinel :data:`NEG_INF`, never an exception.
"""

from __future__ import annotations

import contextlib
import os
import threading
from fractions import Fraction

import mpmath

__all__ = [
    "NEG_INF",
    "DEFAULT_PRECISION",
    "DomainError",
    "ResourceCapError",
    "ConvergenceError",
    "precision",
    "resolve_precision",
    "to_real",
    "to_fraction",
    "parse_probability",
    "log_probability",
    "log_binomial",
    "log1m_exp",
    "log_sum_exp",
    "lambert_w0",
]

NEG_INF = mpmath.ninf


def _env_precision() -> int:
    raw = os.environ.get("CLIQUEX_PRECISION_BITS")
    if not raw:
        return 128
    bits = int(raw)
    if bits < 53:
        raise ValueError(f"CLIQUEX_PRECISION_BITS must be >= 53, got {bits}")
    return bits


DEFAULT_PRECISION = _env_precision()


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceCapError(RuntimeError):
    """A configured size or count bound was exceeded."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap."""


# mpmath keeps its working precision in one global context; serialize access.
_LOCK = threading.RLock()


def resolve_precision(prec: int | None) -> int:
    if prec is None:
        return DEFAULT_PRECISION
    if prec < 53:
        raise DomainError(f"precision must be at least 53 bits, got {prec}")
    return int(prec)


@contextlib.contextmanager
def precision(prec: int | None = None):
    """Hold the mpmath context at ``prec`` bits for the duration of the block."""
    with _LOCK, mpmath.workprec(resolve_precision(prec)):
        yield


def to_real(x) -> mpmath.mpf:
    """Convert int, float, Fraction, decimal string or mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational value of a binary or rational number."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, mpmath.mpf):
        man, exp = mpmath.libmp.to_man_exp(x._mpf_)
        return Fraction(man) * (Fraction(2) ** exp)
    return Fraction(x)


def parse_probability(text: str):
    """``"a/b"`` becomes an exact Fraction, anything else a high-precision real.

    Decimal strings are kept as strings so each consumer rounds them at its
    own precision.
    """
    text = text.strip()
    if "/" in text:
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational probability: {text!r}") from exc
    else:
        try:
            value = Fraction(text)
        except ValueError as exc:
            raise DomainError(f"not a probability: {text!r}") from exc
        value = text
    return value


def _probability_value(p) -> Fraction:
    if isinstance(p, str):
        return Fraction(p)
    return to_fraction(p)


def check_open_probability(p) -> None:
    q = _probability_value(p)
    if not 0 < q < 1:
        raise DomainError(f"p must lie in the open interval (0, 1), got {p}")


def log_probability(p, prec: int | None = None) -> mpmath.mpf:
    """ln p for p in (0, 1)."""
    check_open_probability(p)
    with precision(prec):
        if isinstance(p, Fraction):
            return mpmath.log(p.numerator) - mpmath.log(p.denominator)
        return mpmath.log(to_real(p))


def log_binomial(n, k, prec: int | None = None) -> mpmath.mpf:
    """ln C(n, k) through log-gamma, valid for real 0 <= k <= n."""
    with precision(prec):
        n_, k_ = to_real(n), to_real(k)
        if k_ < 0 or k_ > n_:
            raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
        # grouping the two subtrahends makes the result symmetric in k <-> n-k
        return mpmath.loggamma(n_ + 1) - (mpmath.loggamma(k_ + 1) + mpmath.loggamma(n_ - k_ + 1))


def log1m_exp(y, prec: int | None = None) -> mpmath.mpf:
    """ln(1 - e^y) for y <= 0; y = 0 gives NEG_INF."""
    with precision(prec):
        y_ = to_real(y)
        if y_ > 0:
            raise DomainError(f"log1m_exp needs y <= 0, got {y}")
        if y_ == 0:
            return NEG_INF
        if y_ == NEG_INF:
            return mpmath.mpf(0)
        if y_ > -mpmath.ln2:
            return mpmath.log(-mpmath.expm1(y_))
        return mpmath.log1p(-mpmath.exp(y_))


def log_sum_exp(values, prec: int | None = None) -> mpmath.mpf:
    with precision(prec):
        vals = [to_real(v) for v in values]
        if not vals:
            raise ValueError("log_sum_exp of an empty sequence")
        top = max(vals)
        if top == NEG_INF:
            return NEG_INF
        acc = mpmath.fsum(mpmath.exp(v - top) for v in vals if v != NEG_INF)
        return top + mpmath.log(acc)


def lambert_w0(x, prec: int | None = None, max_iter: int = 200) -> mpmath.mpf:
    """Principal branch of Lambert W for real x >= -1/e.

    Halley iteration on ``w e^w - x`` kept inside a shrinking bracket; any
    step that leaves the bracket falls back to bisection.  Iterates until the
    step is at the working precision.
    """
    with precision(prec):
        x_ = to_real(x)
        branch = -mpmath.exp(-1)
        # values within rounding of the branch point count as the branch point
        slack = mpmath.eps * 8
        if x_ < branch - slack:
            raise DomainError(f"lambert_w0 needs x >= -1/e, got {x}")
        if x_ <= branch + slack:
            return mpmath.mpf(-1)
        if x_ == 0:
            return mpmath.mpf(0)

        if x_ > 0:
            lo, hi = mpmath.mpf(0), mpmath.log1p(x_)
        else:
            lo, hi = mpmath.mpf(-1), mpmath.mpf(0)

        if x_ > mpmath.e:
            lx = mpmath.log(x_)
            w = lx - mpmath.log(lx)
        elif x_ < -0.25:
            # branch-point series in sqrt(2(ex + 1))
            s = mpmath.sqrt(2 * (mpmath.e * x_ + 1))
            w = -1 + s - s * s / 3
        elif x_ < 0:
            w = x_
        else:
            w = mpmath.log1p(x_) * 0.75
        w = min(max(w, lo), hi)

        for _ in range(max_iter):
            ew = mpmath.exp(w)
            f = w * ew - x_
            if f == 0:
                return w
            if f > 0:
                hi = w
            else:
                lo = w
            wp1 = w + 1
            denom = ew * wp1 - (w + 2) * f / (2 * wp1)
            new = w - f / denom if denom != 0 else (lo + hi) / 2
            if not lo < new < hi:
                new = (lo + hi) / 2
            if abs(new - w) <= 4 * mpmath.eps * max(abs(new), 1) or hi - lo <= 4 * mpmath.eps * max(abs(hi), 1):
                return new
            w = new
        raise ConvergenceError(f"lambert_w0 did not converge for x={x}")
