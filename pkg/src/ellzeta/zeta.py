"""Elliptic zeta values Z_k(tau, sigma) and their alternative routes.

The primary series, for tau and sigma in the upper half plane H with
q = e^{2 pi i tau}, r = e^{2 pi i sigma}, is

    Z_k(tau, sigma) = -(2 pi i)^k / (k-1)! *
        sum_{j >= 1} j^{k-1} (q^j - (-1)^k r^j) / ((1 - q^j)(1 - r^j)).

Z_k is antisymmetric up to parity, Z_k(tau, sigma) = -(-1)^k Z_k(sigma, tau),
and splits into divisor series: for even k as D_k(r) - D_k(q), for odd k as
D_k(q) + D_k(r) + 2 sum over coprime (a, b) of D_k(q^a r^b).  For odd
k >= 5 an absolutely convergent signed lattice sum gives an independent
route.  The domain extends to Im tau != 0, Im sigma != 0 by the reflection
rules Z_k(-tau, sigma) = Z_k(tau, -sigma) = (-1)^k Z_k(tau, sigma), and a
homogeneous three-variable form divides out the last coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .core import (
    DEFAULT_POLICY,
    ApproxValue,
    DomainError,
    PrecisionPolicy,
    TruncationError,
    em_power_tail,
    em_power_tail_err,
    expi,
    power_tail_bound,
    qseries_tail_bound,
)
from .divisor import d_k, _dk_prefactor


@dataclass(frozen=True)
class WedgePair:
    """An ordered pair (tau, sigma) with derived membership flags.

    in_h_pair: both imaginary parts positive.
    in_wedge:  additionally Im(sigma / tau) > 0, the cone on which the
               modular three-term relation keeps all arguments in H.
    """

    tau: complex
    sigma: complex

    @property
    def in_h_pair(self) -> bool:
        return complex(self.tau).imag > 0 and complex(self.sigma).imag > 0

    @property
    def in_wedge(self) -> bool:
        if not self.in_h_pair:
            return False
        return complex(complex(self.sigma) / complex(self.tau)).imag > 0


@dataclass(frozen=True)
class ExtendedPair:
    """A pair with both imaginary parts nonzero (either sign)."""

    tau: complex
    sigma: complex

    def __post_init__(self):
        if complex(self.tau).imag == 0 or complex(self.sigma).imag == 0:
            raise DomainError("extended domain requires Im(tau) != 0 and Im(sigma) != 0")


@dataclass(frozen=True)
class HomogeneousTriple:
    """Arguments (x1, x2, x3) of the homogeneous form, x3 != 0 and both
    ratios x1/x3, x2/x3 off the real axis."""

    x1: complex
    x2: complex
    x3: complex

    def __post_init__(self):
        x3 = complex(self.x3)
        if x3 == 0:
            raise DomainError("x3 must be nonzero")
        for label, x in (("x1", self.x1), ("x2", self.x2)):
            if complex(complex(x) / x3).imag == 0:
                raise DomainError(f"Im({label}/x3) must be nonzero")


def _zk_prefactor(k: int, digits: int = 0):
    if digits:
        return -((2j * mp.pi) ** k) / mp.factorial(k - 1)
    return -((2j * math.pi) ** k) / math.factorial(k - 1)


def _zk_backend(k: int, tau, sigma, prec: PrecisionPolicy):
    """Primary series in the active backend; returns (value, err_bound, terms).

    The caller is responsible for Im(tau) > 0, Im(sigma) > 0 and, in the
    mpmath case, for the enclosing working-precision context.
    """
    digits = prec.digits
    q = expi(tau, digits)
    r = expi(sigma, digits)
    rho = max(float(abs(q)), float(abs(r)))
    pref_abs = 2 * (2 * math.pi) ** k / math.factorial(k - 1)
    sgn = (-1) ** k
    s = q * 0
    qj = 1
    rj = 1
    j = 0
    while True:
        j += 1
        qj = qj * q
        rj = rj * r
        s += j ** (k - 1) * (qj - sgn * rj) / ((1 - qj) * (1 - rj))
        bound = pref_abs * qseries_tail_bound(k, rho, j + 1)
        if bound <= prec.epsilon:
            break
        if j >= prec.max_terms:
            raise TruncationError(
                "elliptic zeta series did not reach the target bound",
                partial=ApproxValue(complex(_zk_prefactor(k) * complex(s)), bound, j),
            )
    return _zk_prefactor(k, digits) * s, bound, j


def z_k(k: int, pair: WedgePair, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Elliptic zeta value Z_k(tau, sigma) for an H pair, any k >= 1."""
    if k < 1:
        raise DomainError("k must be at least 1")
    if not pair.in_h_pair:
        raise DomainError("z_k requires Im(tau) > 0 and Im(sigma) > 0")
    if prec.digits:
        with mp.workdps(prec.digits):
            val, err, terms = _zk_backend(k, pair.tau, pair.sigma, prec)
            return ApproxValue(complex(val), err, terms)
    val, err, terms = _zk_backend(k, complex(pair.tau), complex(pair.sigma), prec)
    return ApproxValue(val, err, terms)


def z_k_even_split(k: int, pair: WedgePair, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Even-k split Z_k = D_k(r) - D_k(q), a two-term divisor-series route."""
    if k < 2 or k % 2 != 0:
        raise DomainError("even split requires even k >= 2")
    if not pair.in_h_pair:
        raise DomainError("even split requires an H pair")
    half = PrecisionPolicy(prec.epsilon / 2, prec.max_terms, prec.lattice_radius, prec.digits)
    dq = d_k(k, expi(pair.tau), half)
    dr = d_k(k, expi(pair.sigma), half)
    return ApproxValue(dr.value - dq.value, dq.err_bound + dr.err_bound, dq.terms_used + dr.terms_used)


def _halfpow_constant(k: int) -> float:
    # K_k = sum_{j >= 1} j^{k-1} 2^{-(j-1)}, used to bound |D_k(x)| <= 2 C_k K_k |x|
    # on |x| <= 1/2
    acc = 0.0
    for j in range(1, 400):
        acc += j ** (k - 1) * 0.5 ** (j - 1)
    return acc


def z_k_odd_split(k: int, pair: WedgePair, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Odd-k split over coprime powers of the two nomes,

        Z_k = D_k(q) + D_k(r) + 2 sum_{a,b >= 1, gcd(a,b)=1} D_k(q^a r^b).

    The coprime box is grown until the discarded double tail, bounded via
    |D_k(x)| <= 2 C_k K_k |x| on |x| <= 1/2, drops below epsilon / 2.
    """
    if k % 2 != 1:
        raise DomainError("odd split requires odd k")
    if not pair.in_h_pair:
        raise DomainError("odd split requires an H pair")
    q = expi(pair.tau)
    r = expi(pair.sigma)
    rho_q = abs(q)
    rho_r = abs(r)
    ck = (2 * math.pi) ** k / math.factorial(k - 1)
    base_eps = prec.epsilon / 6
    inner = PrecisionPolicy(base_eps, prec.max_terms, prec.lattice_radius, prec.digits)
    dq = d_k(k, q, inner)
    dr = d_k(k, r, inner)
    value = dq.value + dr.value
    err = dq.err_bound + dr.err_bound
    terms = dq.terms_used + dr.terms_used
    if rho_q == 0.0 or rho_r == 0.0:
        return ApproxValue(value, err, terms)

    kk = _halfpow_constant(k)
    geo_q = rho_q / (1 - rho_q)
    geo_r = rho_r / (1 - rho_r)

    def box_tail(a_cut: int, b_cut: int) -> float:
        # discarded coprime terms have |x| <= max(rho_q^{a+1}, rho_r^{b+1}) <= 1/2
        return 4 * ck * kk * (
            rho_q ** (a_cut + 1) / (1 - rho_q) * geo_r
            + geo_q * rho_r ** (b_cut + 1) / (1 - rho_r)
        )

    a_cut = max(1, math.ceil(math.log(0.5) / math.log(rho_q)))
    b_cut = max(1, math.ceil(math.log(0.5) / math.log(rho_r)))
    while box_tail(a_cut, b_cut) > prec.epsilon / 2:
        a_cut += 1
        b_cut += 1
        if max(a_cut, b_cut) > 10_000:
            raise TruncationError(
                "coprime box for the odd split grew past 10000",
                partial=ApproxValue(value, box_tail(a_cut, b_cut), terms),
            )

    q_pows = [1.0 + 0j] * (a_cut + 1)
    for a in range(1, a_cut + 1):
        q_pows[a] = q_pows[a - 1] * q
    r_pows = [1.0 + 0j] * (b_cut + 1)
    for b in range(1, b_cut + 1):
        r_pows[b] = r_pows[b - 1] * r
    n_cross = sum(
        1 for a in range(1, a_cut + 1) for b in range(1, b_cut + 1) if math.gcd(a, b) == 1
    )
    cross_eps = prec.epsilon / (6 * max(1, n_cross))
    cross_prec = PrecisionPolicy(cross_eps, prec.max_terms, prec.lattice_radius, prec.digits)
    for a in range(1, a_cut + 1):
        for b in range(1, b_cut + 1):
            if math.gcd(a, b) != 1:
                continue
            dx = d_k(k, q_pows[a] * r_pows[b], cross_prec)
            value += 2 * dx.value
            err += 2 * dx.err_bound
            terms += dx.terms_used
    return ApproxValue(value, err + box_tail(a_cut, b_cut), terms)


def epsilon_sign(n: int) -> int:
    """Sign function: 1 for n > 0, -1 for n < 0, 0 at n = 0."""
    if n > 0:
        return 1
    if n < 0:
        return -1
    return 0


def epsilon_pair(a: int, b: int) -> Fraction:
    """Averaged sign (epsilon(a) + epsilon(b)) / 2, exact rational.

    Vanishes whenever a and b have strictly opposite signs or both are
    zero, which is what makes the signed lattice sum absolutely convergent.
    """
    return Fraction(epsilon_sign(a) + epsilon_sign(b), 2)


def z_k_lattice(k: int, pair: WedgePair, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Signed lattice route for odd k >= 5,

        Z_k(tau, sigma) = sum_{(a,b,c) != 0} eps(a, b) (a tau + b sigma + c)^{-k},

    summed over cube shells max(|a|, |b|, |c|) = s.  The pairing of
    (a, b, c) with (-a, -b, -c) is exploited: representatives with
    a, b >= 0 carry weight 2 eps(a, b) in {0, 1, 2}, so mixed-sign terms
    never enter and every denominator on shell s has modulus of order s.

    k even is rejected (eps-weighted terms cancel the even symmetrization
    only formally; the series is not absolutely convergent there), and so
    are k in {1, 3}, where the sum converges only conditionally and no
    shell bound certifies a value.  err_bound is |last shell| * radius /
    (k - 4) with the shell measured in absolute value.
    """
    if k % 2 == 0:
        raise DomainError("z_k_lattice requires odd k; even k is not absolutely summable here")
    if k < 5:
        raise DomainError("z_k_lattice requires k >= 5; k in {1, 3} converges only conditionally")
    if not pair.in_h_pair:
        raise DomainError("z_k_lattice requires an H pair")
    tau = complex(pair.tau)
    sigma = complex(pair.sigma)
    radius = prec.lattice_radius
    ab = np.arange(0, radius + 1)
    cc = np.arange(-radius, radius + 1)
    a_g, b_g, c_g = np.meshgrid(ab, ab, cc, indexing="ij")
    a_g = a_g.ravel()
    b_g = b_g.ravel()
    c_g = c_g.ravel()
    # 2 * eps(a, b) for a, b >= 0 reduces to sign(a) + sign(b)
    weight = np.sign(a_g) + np.sign(b_g)
    shell = np.maximum(np.maximum(a_g, b_g), np.abs(c_g))
    keep = (weight > 0) & (shell > 0)
    a_g, b_g, c_g, weight, shell = (arr[keep] for arr in (a_g, b_g, c_g, weight, shell))
    denom = a_g * tau + b_g * sigma + c_g
    vals = weight * denom ** (-k)
    shell_re = np.bincount(shell, weights=vals.real, minlength=radius + 1)
    shell_im = np.bincount(shell, weights=vals.imag, minlength=radius + 1)
    shell_abs = np.bincount(shell, weights=np.abs(vals), minlength=radius + 1)
    total = complex(shell_re.sum(), shell_im.sum())
    err = shell_abs[radius] * radius / (k - 4)
    return ApproxValue(total, float(err), int(keep.sum()))


def _reflect(k: int, tau, sigma):
    """Map an extended pair into H x H, returning (tau, sigma, sign)."""
    sign = 1
    if complex(tau).imag < 0:
        tau = -tau
        sign *= (-1) ** k
    if complex(sigma).imag < 0:
        sigma = -sigma
        sign *= (-1) ** k
    return tau, sigma, sign


def z_k_extended(k: int, pair, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Z_k on the extended domain Im(tau) != 0, Im(sigma) != 0.

    Uses Z_k(-tau, sigma) = Z_k(tau, -sigma) = (-1)^k Z_k(tau, sigma) to
    reflect into H x H, then the primary series.  Accepts an ExtendedPair
    (or any object with tau / sigma attributes).
    """
    tau, sigma = complex(pair.tau), complex(pair.sigma)
    if tau.imag == 0 or sigma.imag == 0:
        raise DomainError("z_k_extended requires Im(tau) != 0 and Im(sigma) != 0")
    tau, sigma, sign = _reflect(k, tau, sigma)
    inner = z_k(k, WedgePair(tau, sigma), prec)
    return ApproxValue(sign * inner.value, inner.err_bound, inner.terms_used)


def _zk_extended_backend(k: int, tau, sigma, prec: PrecisionPolicy):
    """Extended-domain evaluation in the active backend (value, err, terms)."""
    if complex(tau).imag == 0 or complex(sigma).imag == 0:
        raise DomainError("extended evaluation requires Im(tau) != 0 and Im(sigma) != 0")
    tau, sigma, sign = _reflect(k, tau, sigma)
    val, err, terms = _zk_backend(k, tau, sigma, prec)
    return sign * val, err, terms


def z_k_homogeneous(
    k: int, triple: HomogeneousTriple, prec: PrecisionPolicy = DEFAULT_POLICY
) -> ApproxValue:
    """Homogeneous form of degree -k,

        Zt_k(x1, x2, x3) = x3^{-k} Z_k(x1 / x3, x2 / x3),

    so Zt_k(c x) = c^{-k} Zt_k(x) and Zt_k(tau, sigma, 1) = Z_k(tau, sigma).
    """
    x3 = complex(triple.x3)
    inner = z_k_extended(
        k, ExtendedPair(complex(triple.x1) / x3, complex(triple.x2) / x3), prec
    )
    scale = x3 ** (-k)
    return ApproxValue(scale * inner.value, abs(scale) * inner.err_bound, inner.terms_used)


def anomaly_a(k: int, tau, sigma):
    """Closed-form anomaly coefficient a_k(tau, sigma) for k in {1, 2, 3}.

    a_1 = -1/2 + 1/(2 tau) - 1/(2 sigma) + sigma/(6 tau) + tau/(6 sigma)
          + 1/(6 tau sigma)
    a_2 = -1/tau + 1/sigma - 1/(tau sigma)
    a_3 = 1/(tau sigma)

    Works transparently on complex or mpmath scalars; callers attach the
    i pi factor.
    """
    if k not in (1, 2, 3):
        raise DomainError("anomaly coefficients exist only for k in {1, 2, 3}")
    if complex(tau) == 0 or complex(sigma) == 0:
        raise DomainError("tau and sigma must be nonzero")
    if k == 1:
        return (
            -0.5
            + 1 / (2 * tau)
            - 1 / (2 * sigma)
            + sigma / (6 * tau)
            + tau / (6 * sigma)
            + 1 / (6 * tau * sigma)
        )
    if k == 2:
        return -1 / tau + 1 / sigma - 1 / (tau * sigma)
    return 1 / (tau * sigma)


def lipschitz_both_sides(
    k: int, rho: complex, prec: PrecisionPolicy = DEFAULT_POLICY
) -> tuple[ApproxValue, ApproxValue]:
    """Both sides of the Lipschitz summation identity for k >= 2, Im(rho) > 0:

        sum_{n in Z} (rho + n)^{-k}
            = (-2 pi i)^k / (k-1)! * sum_{j >= 1} j^{k-1} e^{2 pi i rho j}.

    The left side cuts the integer sum at the policy lattice radius and
    completes both tails with the Euler-Maclaurin estimate; a bare cutoff
    at radius 1e4 would leave an O(1e-4) hole for k = 2, far above the
    agreement this identity is held to.  The right side is a plain
    exponential series with the shared power-tail bound.
    """
    if k < 2:
        raise DomainError("lipschitz_both_sides requires k >= 2")
    rho = complex(rho)
    if not (rho.imag > 0):
        raise DomainError("rho must have positive imaginary part")
    radius = prec.lattice_radius
    if radius < abs(rho.real) + 2:
        raise DomainError("lattice_radius must exceed |Re rho| + 2")
    n = np.arange(-radius, radius + 1)
    terms = (rho + n) ** (-1.0 * k)
    left_val = complex(terms.sum())
    left_val += em_power_tail(rho, k, radius) + (-1) ** k * em_power_tail(-rho, k, radius)
    left = ApproxValue(left_val, 4 * em_power_tail_err(k, radius), 2 * radius + 1)

    x = expi(rho)
    rho_x = abs(x)
    pref_abs = (2 * math.pi) ** k / math.factorial(k - 1)
    s = 0j
    xj = 1.0 + 0j
    j = 0
    while True:
        j += 1
        xj = xj * x
        s += j ** (k - 1) * xj
        bound = pref_abs * power_tail_bound(k - 1, rho_x, j + 1)
        if bound <= prec.epsilon:
            break
        if j >= prec.max_terms:
            raise TruncationError(
                "Lipschitz exponential series did not reach the target bound",
                partial=ApproxValue(_dk_prefactor(k) * s, bound, j),
            )
    right = ApproxValue(_dk_prefactor(k) * s, bound, j)
    return left, right
