"""Divisor-power q-series, the theta_0 triple-product factor, and lattice
Eisenstein sums.

The central object is

    D_k(q) = (-2 pi i)^k / (k-1)! * sum_{n >= 1} sigma_{k-1}(n) q^n
           = (-2 pi i)^k / (k-1)! * sum_{j >= 1} j^{k-1} q^j / (1 - q^j)

where sigma_{k-1}(n) sums the (k-1)-th powers of the divisors of n.  Both
routes are implemented and kept as independent strategies so they can be
checked against each other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .core import (
    DEFAULT_POLICY,
    ApproxValue,
    DomainError,
    PrecisionPolicy,
    TruncationError,
    expi,
    power_tail_bound,
    zeta_int,
    _zeta_backend,
)


@dataclass(frozen=True)
class UpperHalfPoint:
    """A point tau with Im(tau) > 0."""

    tau: complex

    def __post_init__(self):
        if not (complex(self.tau).imag > 0):
            raise DomainError("tau must have positive imaginary part")

    @property
    def nome(self) -> complex:
        """q = exp(2 pi i tau), strictly inside the unit disk."""
        return expi(self.tau)


@dataclass(frozen=True)
class NomePoint:
    """A nome q with |q| < 1."""

    q: complex

    def __post_init__(self):
        if not (abs(complex(self.q)) < 1):
            raise DomainError("nome must satisfy |q| < 1")


def sigma_power(n: int, p: int) -> int:
    """Divisor power sum sigma_p(n) = sum_{d | n} d^p, exact.

    Divisors are enumerated in pairs up to sqrt(n).
    """
    if n <= 0:
        raise DomainError("n must be a positive integer")
    if p < 0:
        raise DomainError("p must be nonnegative")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**p
            e = n // d
            if e != d:
                total += e**p
        d += 1
    return total


def _coerce_nome(q) -> complex:
    if isinstance(q, NomePoint):
        return complex(q.q)
    q = complex(q)
    if not (abs(q) < 1):
        raise DomainError("nome must satisfy |q| < 1")
    return q


def _dk_lambert(k: int, q, rho: float, eps: float, max_terms: int, pref_abs: float):
    """Generic Lambert-series loop; q may be complex or mpmath.mpc.

    Tail after j0 terms: sum_{j > j0} j^{k-1} rho^j / (1 - rho^{j0+1}),
    bounded with the shared power-tail estimate.
    """
    s = q * 0
    qj = 1
    j = 0
    while True:
        j += 1
        qj = qj * q
        s += j ** (k - 1) * qj / (1 - qj)
        rnext = rho ** (j + 1)
        bound = pref_abs * power_tail_bound(k - 1, rho, j + 1) / (1.0 - rnext)
        if bound <= eps:
            return s, bound, j
        if j >= max_terms:
            raise TruncationError(
                "Lambert series for D_k did not reach the target bound",
                partial=ApproxValue(complex(_dk_prefactor(k) * complex(s)), bound, j),
            )


def _sigma_sieve(k: int, n_max: int) -> list[int]:
    """sigma_{k-1}(n) for n = 1..n_max by the divisor sieve, exact."""
    coeffs = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d ** (k - 1)
        for m in range(d, n_max + 1, d):
            coeffs[m] += dp
    return coeffs


def _dk_sigma(k: int, q, rho: float, eps: float, max_terms: int, pref_abs: float):
    """sigma-coefficient route: sum_{n <= N} sigma_{k-1}(n) q^n.

    sigma_{k-1}(n) <= n^k gives the tail bound sum_{n > N} n^k rho^n.
    """
    n = 16
    while pref_abs * power_tail_bound(k, rho, n + 1) > eps and n < max_terms:
        n = min(2 * n, max_terms)
    bound = pref_abs * power_tail_bound(k, rho, n + 1)
    coeffs = _sigma_sieve(k, n)
    s = q * 0
    qn = 1
    for m in range(1, n + 1):
        qn = qn * q
        s += coeffs[m] * qn
    if bound > eps:
        raise TruncationError(
            "sigma-coefficient series for D_k did not reach the target bound",
            partial=ApproxValue(complex(_dk_prefactor(k) * complex(s)), bound, n),
        )
    return s, bound, n


def _dk_prefactor(k: int, digits: int = 0):
    if digits:
        return (-2j * mp.pi) ** k / mp.factorial(k - 1)
    return (-2j * math.pi) ** k / math.factorial(k - 1)


def d_k(
    k: int,
    q,
    prec: PrecisionPolicy = DEFAULT_POLICY,
    strategy: str = "lambert",
) -> ApproxValue:
    """Divisor-sum q-series D_k(q) for k >= 1, |q| < 1.

    strategy "lambert" sums j^{k-1} q^j / (1 - q^j); strategy "sigma" sums
    sigma_{k-1}(n) q^n with sieved integer coefficients.  The two must
    agree within their combined err_bounds.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if strategy not in ("lambert", "sigma"):
        raise DomainError("strategy must be 'lambert' or 'sigma'")
    qc = _coerce_nome(q)
    rho = abs(qc)
    if rho == 0.0:
        return ApproxValue(0j, 0.0, 0)
    pref_abs = (2 * math.pi) ** k / math.factorial(k - 1)
    runner = _dk_lambert if strategy == "lambert" else _dk_sigma
    if prec.digits:
        with mp.workdps(prec.digits):
            s, bound, j = runner(k, mp.mpc(qc), rho, prec.epsilon, prec.max_terms, pref_abs)
            val = _dk_prefactor(k, prec.digits) * s
            return ApproxValue(complex(val), bound, j)
    s, bound, j = runner(k, qc, rho, prec.epsilon, prec.max_terms, pref_abs)
    return ApproxValue(_dk_prefactor(k) * s, bound, j)


def theta0(z: complex, tau: complex, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """theta_0(z, tau) = prod_{j >= 0} (1 - q^{j+1} e^{-2 pi i z})(1 - q^j e^{2 pi i z}).

    Vanishes at z in Z + Z tau (the j = 0 factor kills z = 0) and is
    1-periodic in z.  Truncated once |q|^j e^{2 pi |Im z|} drops below
    epsilon; err_bound is the running product times the dropped-factor
    tail.
    """
    tau = complex(tau)
    if not (tau.imag > 0):
        raise DomainError("tau must have positive imaginary part")
    digits = prec.digits
    if digits:
        with mp.workdps(digits):
            return _theta0_impl(z, tau, prec, digits)
    return _theta0_impl(z, tau, prec, 0)


def _theta0_impl(z, tau, prec, digits):
    q = expi(tau, digits)
    x = expi(z, digits)
    xinv = 1 / x
    rho = float(abs(q))
    mx = max(float(abs(x)), float(abs(xinv)))
    prod = 1 + q * 0
    qj = 1 + q * 0
    j = 0
    while True:
        prod = prod * (1 - qj * q * xinv) * (1 - qj * x)
        if rho ** (j + 1) * mx < prec.epsilon:
            break
        j += 1
        qj = qj * q
        if j >= prec.max_terms:
            raise TruncationError(
                "theta_0 product did not reach the target bound",
                partial=ApproxValue(complex(prod), rho**j * mx, j),
            )
    rel_tail = mx * (rho ** (j + 2) + rho ** (j + 1)) / (1.0 - rho)
    err = abs(complex(prod)) * 2.0 * rel_tail
    return ApproxValue(complex(prod), err, j + 1)


def eisenstein_lattice(k: int, tau: complex, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Absolutely convergent lattice Eisenstein sum for even k >= 4,

        G_k(tau) = (1/2) sum_{(m, n) != (0, 0)} (m tau + n)^{-k},

    summed over square shells max(|m|, |n|) = s up to the policy radius.
    Odd k is rejected: the shell sums vanish by symmetry and the series
    carries no information.  err_bound extrapolates the last shell's
    absolute sum, |shell(R)| * R / (k - 3).
    """
    if k % 2 != 0:
        raise DomainError("eisenstein_lattice requires even k (odd-k shells cancel pairwise)")
    if k < 4:
        raise DomainError("eisenstein_lattice requires k >= 4 for absolute convergence")
    tau = complex(tau)
    if not (tau.imag > 0):
        raise DomainError("tau must have positive imaginary part")
    radius = prec.lattice_radius
    coords = np.arange(-radius, radius + 1)
    m_grid, n_grid = np.meshgrid(coords, coords, indexing="ij")
    shell = np.maximum(np.abs(m_grid), np.abs(n_grid)).ravel()
    w = (m_grid * tau + n_grid).ravel()
    origin = shell == 0
    w[origin] = 1.0  # placeholder, masked out below
    vals = w ** (-k)
    vals[origin] = 0.0
    shell_re = np.bincount(shell, weights=vals.real, minlength=radius + 1)
    shell_im = np.bincount(shell, weights=vals.imag, minlength=radius + 1)
    shell_abs = np.bincount(shell, weights=np.abs(vals), minlength=radius + 1)
    total = 0.5 * complex(shell_re.sum(), shell_im.sum())
    err = 0.5 * shell_abs[radius] * radius / (k - 3)
    return ApproxValue(total, float(err), (2 * radius + 1) ** 2 - 1)


def gk_qexp(k: int, tau: complex, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """G_k(tau) = zeta(k) + D_k(e^{2 pi i tau}) for even k >= 2.

    The q-expansion route; agrees with eisenstein_lattice for k >= 4 and
    extends down to the quasi-modular weight k = 2.
    """
    if k % 2 != 0 or k < 2:
        raise DomainError("gk_qexp requires even k >= 2")
    tau = complex(tau)
    if not (tau.imag > 0):
        raise DomainError("tau must have positive imaginary part")
    if prec.digits:
        with mp.workdps(prec.digits):
            val, err, terms = _gk_backend(k, tau, prec)
            return ApproxValue(complex(val), err, terms)
    z = zeta_int(k, prec)
    d = d_k(k, expi(tau), prec)
    return ApproxValue(z.value + d.value, z.err_bound + d.err_bound, z.terms_used + d.terms_used)


def _gk_backend(k: int, tau, prec: PrecisionPolicy):
    """gk_qexp in the current mpmath working precision; returns an mpc."""
    zval, zerr, zterms = _zeta_backend(k, prec.digits)
    q = expi(tau, prec.digits)
    rho = float(abs(q))
    pref_abs = (2 * math.pi) ** k / math.factorial(k - 1)
    if rho == 0.0:
        return zval, zerr, zterms
    s, derr, dterms = _dk_lambert(k, q, rho, prec.epsilon, prec.max_terms, pref_abs)
    return zval + _dk_prefactor(k, prec.digits) * s, zerr + derr, zterms + dterms
