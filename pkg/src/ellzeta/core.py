"""Numeric core shared by every series evaluator in the package.

Provides the precision policy, the (value, err_bound, terms_used) result
envelope, the error taxonomy, and the tail-bound machinery that turns
truncated series into results with certified truncation bounds.

All err_bound fields bound the truncation error only, never floating-point
rounding.  Evaluators run in machine doubles by default; a policy with
digits > 0 switches the same algorithms to mpmath working precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp


class DomainError(ValueError):
    """Argument outside the mathematical domain of the operation."""


class PoleError(ArithmeticError):
    """Evaluation at, or within threshold of, a pole.

    Carries the indices of the offending factor when they are known.
    """

    def __init__(self, message: str, indices: tuple[int, ...] | None = None):
        super().__init__(message)
        self.indices = indices


class TruncationError(RuntimeError):
    """Series failed to meet the target bound within max_terms.

    The partial result is attached so callers can inspect how far the
    evaluation got.
    """

    def __init__(self, message: str, partial: "ApproxValue" | None = None):
        super().__init__(message)
        self.partial = partial


class BranchError(RuntimeError):
    """Logarithm branch tracking failed while assembling an analytic quantity."""


@dataclass(frozen=True)
class PrecisionPolicy:
    """Caller-chosen accuracy knobs passed to every evaluator.

    epsilon        target absolute truncation error
    max_terms      hard cap on series terms before giving up
    lattice_radius cutoff radius for lattice-sum evaluators
    digits         0 runs in machine doubles; > 0 runs the same series
                   in mpmath with that many working digits
    """

    epsilon: float = 1e-12
    max_terms: int = 10**6
    lattice_radius: int = 100
    digits: int = 0

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise DomainError("epsilon must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if self.lattice_radius < 1:
            raise DomainError("lattice_radius must be at least 1")
        if self.digits < 0:
            raise DomainError("digits must be nonnegative")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class ApproxValue:
    """A numerical result with a certified truncation bound.

    |value - exact| <= err_bound up to floating-point rounding; terms_used
    counts the series terms (or lattice points) actually summed.
    """

    value: complex
    err_bound: float
    terms_used: int


def expi(w: complex, digits: int = 0):
    """exp(2 pi i w) in the active backend (complex or mpmath.mpc)."""
    if digits:
        return mp.exp(2j * mp.pi * mp.mpc(w))
    return cmath.exp(2j * math.pi * complex(w))


def upper_gamma_int(p: int, x: float) -> float:
    """Upper incomplete gamma at integer shape, Gamma(p+1, x) for p >= 0.

    Closed form p! e^{-x} sum_{m=0}^{p} x^m / m!, exact for integer p.
    """
    if p < 0:
        raise DomainError("p must be nonnegative")
    if x < 0:
        raise DomainError("x must be nonnegative")
    term = 1.0
    acc = 1.0
    for m in range(1, p + 1):
        term *= x / m
        acc += term
    return math.factorial(p) * math.exp(-x) * acc


def power_tail_bound(p: int, rho: float, j0: int) -> float:
    """Upper bound for sum_{j >= j0} j^p rho^j with 0 <= rho < 1.

    f(t) = t^p rho^t is unimodal with peak at t* = p / ln(1/rho), so the
    tail is at most the largest term on [j0, inf) plus the full integral:

        sum_{j >= j0} f(j) <= f(max(j0, t*)) + Gamma(p+1, lam*j0) / lam^{p+1}

    with lam = ln(1/rho).  Both pieces are monotone decreasing in j0.
    """
    if not (0 <= rho < 1):
        raise DomainError("rho must satisfy 0 <= rho < 1")
    if j0 < 1:
        raise DomainError("j0 must be at least 1")
    if rho == 0.0:
        return 0.0
    lam = -math.log(rho)
    t_peak = max(float(j0), p / lam)
    try:
        peak = t_peak**p * rho**t_peak
    except OverflowError:
        peak = math.exp(p * math.log(t_peak) - lam * t_peak)
    integral = upper_gamma_int(p, lam * j0) / lam ** (p + 1)
    return peak + integral


def qseries_tail_bound(k: int, rho: float, j0: int) -> float:
    """Tail bound for the shared q-series shape with two Lambert denominators.

    Bounds sum_{j >= j0} j^{k-1} rho^j / (1 - rho^j)^2 using
    (1 - rho^j) >= (1 - rho^{j0}) for j >= j0 and the power-tail bound on
    the numerator.  Decreasing in j0 and -> 0 as j0 -> inf.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if not (0 <= rho < 1):
        raise DomainError("rho must satisfy 0 <= rho < 1")
    if j0 < 1:
        raise DomainError("j0 must be at least 1")
    if rho == 0.0:
        return 0.0
    denom = (1.0 - rho**j0) ** 2
    return power_tail_bound(k - 1, rho, j0) / denom


def em_power_tail(offset: complex, k: int, n: int):
    """sum_{m > n} (offset + m)^{-k} by Euler-Maclaurin at a = n + 1.

    a^{1-k}/(k-1) + a^{-k}/2 + k a^{-k-1}/12 - k(k+1)(k+2) a^{-k-3}/720
      + k(k+1)(k+2)(k+3)(k+4) a^{-k-5}/30240
    with a = n + 1 + offset.  Requires Re(offset) + n + 1 > 0 so no summand
    sits on the branch cut.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    a = offset + (n + 1)
    inv = 1.0 / a
    powk = inv**k
    rising = float(k)
    out = a * powk / (k - 1) + powk / 2.0 + rising * powk * inv / 12.0
    rising *= (k + 1) * (k + 2)
    out -= rising * powk * inv**3 / 720.0
    rising *= (k + 3) * (k + 4)
    out += rising * powk * inv**5 / 30240.0
    return out


def em_power_tail_err(k: int, n: int) -> float:
    """Magnitude of the first omitted Euler-Maclaurin correction."""
    a = float(n + 1)
    rising = 1.0
    for i in range(7):
        rising *= k + i
    return rising * a ** (-k - 7) / 1209600.0


def _zeta_terms_needed(k: int, eps: float) -> int:
    # choose n so the first omitted EM order sits below eps
    n = 16
    while em_power_tail_err(k, n) > eps and n < 10**6:
        n *= 2
    return n


def zeta_int(k: int, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Riemann zeta at an integer k >= 2 by direct Dirichlet partial sums.

    The partial sum over n <= N is completed with the Euler-Maclaurin tail
    of the same series, so one scheme covers even and odd k alike.  The
    bare integral-bounded partial sum cannot reach epsilon = 1e-12 for
    k = 2 inside any realistic term cap (it needs N ~ 1e12), so the tail
    correction is part of the contract here; err_bound is twice the first
    omitted correction order, which the remainder never exceeds.
    """
    if k < 2:
        raise DomainError("zeta_int requires k >= 2")
    if prec.digits:
        with mp.workdps(prec.digits):
            val, err, n = _zeta_backend(k, prec.digits)
            return ApproxValue(complex(val), err, n)
    n = min(prec.max_terms, _zeta_terms_needed(k, prec.epsilon))
    acc = 0.0
    for m in range(n, 0, -1):  # ascending magnitude for clean rounding
        acc += float(m) ** (-k)
    val = acc + em_power_tail(0.0, k, n).real
    return ApproxValue(complex(val), 2 * em_power_tail_err(k, n), n)


def _zeta_backend(k: int, digits: int):
    """zeta(k) in the current mpmath working precision via the same scheme."""
    eps = 10.0 ** (-digits - 4)
    n = 16
    while em_power_tail_err(k, n) > eps and n < 10**6:
        n *= 2
    acc = mp.mpf(0)
    for m in range(n, 0, -1):
        acc += mp.mpf(m) ** (-k)
    return acc + em_power_tail(mp.mpf(0), k, n), 2 * em_power_tail_err(k, n), n


@lru_cache(maxsize=None)
def euler_gamma_const() -> float:
    """Euler's constant to better than 1e-12.

    gamma = H_n - ln n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4) + ...; at
    n = 10^4 the first omitted term is ~ 1/(252 n^6) ~ 4e-27, far below
    the 12-decimal target.
    """
    n = 10**4
    h = 0.0
    for m in range(n, 0, -1):
        h += 1.0 / m
    nf = float(n)
    return h - math.log(nf) - 1.0 / (2 * nf) + 1.0 / (12 * nf**2) - 1.0 / (120 * nf**4)
