"""The elliptic gamma function, its stable logarithm, and the analytic
probes built on top of them.

With q = e^{2 pi i tau}, r = e^{2 pi i sigma}, x = e^{2 pi i z}, the
double product

    Gamma(z, tau, sigma) = prod_{j,l >= 0} (1 - q^{j+1} r^{l+1} / x)
                                         / (1 - q^j r^l x)

converges for any z off the pole set as long as tau, sigma lie in H.  On
the strip 0 < Im z < Im(tau + sigma) its logarithm has the single-valued
series

    ln Gamma(z, tau, sigma)
        = sum_{j >= 1} (x^j - y^j) / (j (1 - q^j)(1 - r^j)),
          y = e^{2 pi i (tau + sigma - z)} = q r / x,

a termwise rearrangement of the sine-quotient form
-(i/2) sum_j sin(pi j (2z - tau - sigma)) / (j sin(pi j tau) sin(pi j sigma))
that avoids the overflowing sines and fixes a canonical branch.  The
classical Euler gamma enters through a truncated Weierstrass product whose
tail is restored by a zeta-series remainder.
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
    BranchError,
    DomainError,
    PoleError,
    PrecisionPolicy,
    TruncationError,
    em_power_tail,
    euler_gamma_const,
    expi,
    zeta_int,
)
from .divisor import theta0
from .zeta import WedgePair

_POLE_EPS = 1e-13  # modulus threshold that flags a denominator factor as a pole


@dataclass(frozen=True)
class GammaArg:
    """Argument triple (z, tau, sigma) with tau, sigma in H; z unrestricted."""

    z: complex
    tau: complex
    sigma: complex

    def __post_init__(self):
        if not (complex(self.tau).imag > 0 and complex(self.sigma).imag > 0):
            raise DomainError("tau and sigma must have positive imaginary part")


@dataclass(frozen=True)
class TaylorSlice:
    """Taylor coefficients c_1..c_k_max of ln(Gamma(z + sigma)/Gamma(sigma))
    around z = 0, extracted on a circle of the stored radius."""

    coefficients: tuple[complex, ...]
    radius: float


@dataclass(frozen=True)
class CubicFit:
    """Least-squares cubic c0 + c1 z + c2 z^2 + c3 z^3 with its residual.

    Coefficients are those of the polynomial Q-hat multiplying i pi; the
    residual is measured on the fitted log quantity itself.
    """

    c0: complex
    c1: complex
    c2: complex
    c3: complex
    fit_residual: float


def ell_gamma(arg: GammaArg, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Elliptic gamma by the double product.

    Factor rectangles are truncated once |q|^J and |r|^L, scaled by the
    largest factor magnitude, drop below epsilon; err_bound is the running
    value times the dropped-factor tail.  A denominator factor with
    modulus below 1e-13 raises PoleError carrying its (j, l) index.
    """
    q = expi(arg.tau)
    r = expi(arg.sigma)
    x = expi(arg.z)
    rho_q = abs(q)
    rho_r = abs(r)
    ax = abs(x)
    m2 = ax + rho_q * rho_r / ax
    mx = max(m2, 1.0)

    def cutoff(rho: float) -> int:
        if rho == 0.0:
            return 1
        return max(1, math.ceil(math.log(prec.epsilon / mx) / math.log(rho)))

    j_cut = cutoff(rho_q)
    l_cut = cutoff(rho_r)
    if j_cut * l_cut > prec.max_terms:
        raise TruncationError(
            "elliptic gamma factor rectangle exceeds max_terms",
            partial=None,
        )
    num = 1.0 + 0j
    den = 1.0 + 0j
    qj = 1.0 + 0j
    qr = q * r
    for j in range(j_cut):
        t = qj
        for l in range(l_cut):
            fden = 1.0 - t * x
            if abs(fden) < _POLE_EPS:
                raise PoleError(
                    f"denominator factor vanishes at (j, l) = ({j}, {l})", (j, l)
                )
            num *= 1.0 - t * qr / x
            den *= fden
            t = t * r
        qj = qj * q
    value = num / den
    tail = 0.0
    if rho_q > 0.0:
        tail += m2 * rho_q**j_cut / ((1 - rho_q) * (1 - rho_r))
    if rho_r > 0.0:
        tail += m2 * rho_r**l_cut / ((1 - rho_q) * (1 - rho_r))
    err = abs(value) * 2.0 * tail
    return ApproxValue(value, err, j_cut * l_cut)


def log_ell_gamma_sum(arg: GammaArg, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Canonical single-valued ln Gamma on the strip 0 < Im z < Im(tau + sigma),

        sum_{j >= 1} (x^j - y^j) / (j (1 - q^j)(1 - r^j)),  y = q r / x.

    Both |x| and |y| are < 1 exactly on the strip, so the series converges
    geometrically and never touches an overflowing sine quotient.
    """
    z = complex(arg.z)
    tau = complex(arg.tau)
    sigma = complex(arg.sigma)
    height = (tau + sigma).imag
    if not (0 < z.imag < height):
        raise DomainError("log_ell_gamma_sum requires 0 < Im z < Im(tau + sigma)")
    if prec.digits:
        with mp.workdps(prec.digits):
            val, err, terms = _log_ell_gamma_impl(z, tau, sigma, prec, prec.digits)
            return ApproxValue(complex(val), err, terms)
    return ApproxValue(*_log_ell_gamma_impl(z, tau, sigma, prec, 0))


def _log_ell_gamma_impl(z, tau, sigma, prec, digits):
    q = expi(tau, digits)
    r = expi(sigma, digits)
    x = expi(z, digits)
    y = q * r / x
    rho_q = float(abs(q))
    rho_r = float(abs(r))
    rho_x = float(abs(x))
    rho_y = float(abs(y))
    dfloor = (1 - rho_q) * (1 - rho_r)
    s = q * 0
    xj = 1
    yj = 1
    qj = 1
    rj = 1
    j = 0
    while True:
        j += 1
        xj = xj * x
        yj = yj * y
        qj = qj * q
        rj = rj * r
        s += (xj - yj) / (j * (1 - qj) * (1 - rj))
        bound = (
            rho_x ** (j + 1) / (1 - rho_x) + rho_y ** (j + 1) / (1 - rho_y)
        ) / ((j + 1) * dfloor)
        if bound <= prec.epsilon:
            return s, bound, j
        if j >= prec.max_terms:
            raise TruncationError(
                "log elliptic gamma series did not reach the target bound",
                partial=ApproxValue(complex(s), bound, j),
            )


def euler_gamma_fn(z: complex, prec: PrecisionPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Euler gamma at z + 1 by the Weierstrass product,

        Gamma(z+1) = e^{-gamma z} prod_{j >= 1} e^{z/j} / (1 + z/j),

    truncated at J = max(100, 20 |z|) factors with the tail restored
    through the log remainder sum_{m >= 2} (-1)^m z^m zeta_{>J}(m) / m,
    where zeta_{>J}(m) is the Euler-Maclaurin tail of sum j^{-m}.  Poles
    of Gamma(z+1) sit at z in {-1, -2, ...}.
    """
    z = complex(z)
    if z.real < -0.5:
        nearest = round(z.real)
        if nearest <= -1 and abs(z - nearest) < _POLE_EPS:
            raise PoleError(f"Gamma(z+1) pole at z = {nearest}", (int(-nearest),))
    j_cut = max(100, math.ceil(20 * abs(z)))
    prod = 1.0 + 0j
    for j in range(1, j_cut + 1):
        prod *= cmath.exp(z / j) / (1 + z / j)
    az = abs(z)
    tail = 0.0 + 0j
    m = 1
    zm = z * -1.0
    rel_target = min(1e-16, prec.epsilon)
    while True:
        m += 1
        zm = zm * -z
        zt = em_power_tail(0.0, m, j_cut).real
        term = zm * zt / m
        tail += term
        # next-term magnitude bounds the remainder of this alternating-style sum
        nxt = az ** (m + 1) * em_power_tail(0.0, m + 1, j_cut).real / (m + 1)
        if nxt < rel_target or m > 60:
            break
    value = cmath.exp(-euler_gamma_const() * z + tail) * prod
    err = abs(value) * 2.0 * nxt
    return ApproxValue(value, err, j_cut + m)


def log_euler_gamma_series(
    z: complex, k_max: int, prec: PrecisionPolicy = DEFAULT_POLICY
) -> ApproxValue:
    """Taylor series of ln Gamma(z+1) about 0 for |z| < 1,

        ln Gamma(z+1) = -gamma z + sum_{j=2}^{k_max} zeta(j)/j (-z)^j,

    with remainder bound |z|^{k_max+1} / (1 - |z|); the coefficient
    magnitudes zeta(j)/j all sit below 1, which is what makes that bound
    valid.
    """
    z = complex(z)
    az = abs(z)
    if not (az < 1):
        raise DomainError("log_euler_gamma_series requires |z| < 1")
    if k_max < 2:
        raise DomainError("k_max must be at least 2")
    s = -euler_gamma_const() * z
    zj = -z  # tracks (-z)^j, completed to j = 2 on first pass
    zeta_err = 0.0
    for j in range(2, k_max + 1):
        zj = zj * -z
        zv = zeta_int(j, prec)
        s += zv.value / j * zj
        zeta_err += zv.err_bound * az**j / j
    rem = az ** (k_max + 1) / (1 - az)
    return ApproxValue(s, rem + zeta_err, k_max - 1)


def taylor_z_extraction(
    pair: WedgePair,
    k_max: int,
    prec: PrecisionPolicy = DEFAULT_POLICY,
    radius: float | None = None,
) -> TaylorSlice:
    """Circle-sampling extraction of the Taylor coefficients of

        f(z) = ln( Gamma(z + sigma, tau, sigma) / Gamma(sigma, tau, sigma) )

    around z = 0.  Samples N = max(64, 8 k_max) points on |z| = radius,
    takes continuous logarithms by unwrapping the phase along the circle,
    and inverts with a discrete Fourier transform.  The radius must stay
    below min(1, Im sigma) so the sample circle avoids the nearest pole.
    """
    if k_max < 1:
        raise DomainError("k_max must be at least 1")
    if not pair.in_h_pair:
        raise DomainError("taylor_z_extraction requires an H pair")
    sigma = complex(pair.sigma)
    limit = min(1.0, sigma.imag)
    if radius is None:
        radius = 0.5 * limit
    if not (0 < radius < limit):
        raise DomainError("radius must lie in (0, min(1, Im sigma))")
    n = max(64, 8 * k_max)
    base = ell_gamma(GammaArg(sigma, pair.tau, sigma), prec).value
    ratios = np.empty(n, dtype=complex)
    for m in range(n):
        zm = radius * cmath.exp(2j * math.pi * m / n)
        ratios[m] = ell_gamma(GammaArg(zm + sigma, pair.tau, sigma), prec).value / base
    w = np.log(np.abs(ratios)) + 1j * np.unwrap(np.angle(ratios))
    spectrum = np.fft.fft(w) / n
    coeffs = tuple(complex(spectrum[j]) / radius**j for j in range(1, k_max + 1))
    return TaylorSlice(coeffs, radius)


def scl_limit_probe(
    z: complex,
    sigma_list,
    tau_large: complex,
    prec: PrecisionPolicy = DEFAULT_POLICY,
) -> list[complex]:
    """Shrinking-sigma probe of the classical-limit formula,

        theta_0(sigma, tau)^{1-z} * Gamma(sigma z, tau, sigma)
                                  / Gamma(sigma, tau, sigma),

    evaluated at each sigma in sigma_list with tau held high in H.  As
    Im tau -> inf and then sigma -> 0 this approaches Euler's Gamma(z);
    the probe reports the raw values and leaves rate checks to callers.
    The power uses the principal branch.  Premise: z in a bounded window,
    |z| <= 3, away from the nonpositive integers.
    """
    z = complex(z)
    if abs(z) > 3.0 + 1e-9:
        raise DomainError("probe window restricted to |z| <= 3")
    tau_large = complex(tau_large)
    if not (tau_large.imag > 0):
        raise DomainError("tau_large must lie in H")
    out = []
    for sigma in sigma_list:
        sigma = complex(sigma)
        if not (sigma.imag > 0):
            raise DomainError("every sigma must lie in H")
        th = theta0(sigma, tau_large, prec).value
        g_num = ell_gamma(GammaArg(sigma * z, tau_large, sigma), prec).value
        g_den = ell_gamma(GammaArg(sigma, tau_large, sigma), prec).value
        out.append(cmath.exp((1 - z) * cmath.log(th)) * g_num / g_den)
    return out


def three_term_product_residual(arg: GammaArg, prec: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Relative residual of the multiplicative three-term identity

        Gamma(z, tau, sigma) = Gamma(z + tau, tau, sigma + tau)
                             * Gamma(z, tau + sigma, sigma),

    which requires the pair (tau, sigma) to lie in the wedge so every
    argument pair stays in H.
    """
    tau = complex(arg.tau)
    sigma = complex(arg.sigma)
    if not WedgePair(tau, sigma).in_wedge:
        raise DomainError("three-term product requires a wedge pair")
    g = ell_gamma(arg, prec).value
    g1 = ell_gamma(GammaArg(complex(arg.z) + tau, tau, sigma + tau), prec).value
    g2 = ell_gamma(GammaArg(arg.z, tau + sigma, sigma), prec).value
    return abs(g - g1 * g2) / abs(g)


def _strip_margin(z: complex, tau: complex, sigma: complex) -> float:
    """Distance (in z units) from z to the nearest boundary of the three
    log strips entering the modular cubic; positive means all-interior."""
    h1 = (tau + sigma).imag
    w2 = z / tau
    h2 = ((sigma - 1) / tau).imag
    w3 = (z - tau) / sigma
    h3 = (-(tau + 1) / sigma).imag
    g2 = abs(1 / tau)
    g3 = abs(1 / sigma)
    return min(
        z.imag,
        h1 - z.imag,
        w2.imag / g2,
        (h2 - w2.imag) / g2,
        w3.imag / g3,
        (h3 - w3.imag) / g3,
    )


def fit_Q_cubic(
    pair: WedgePair,
    sample_count: int = 16,
    prec: PrecisionPolicy = DEFAULT_POLICY,
) -> CubicFit:
    """Fit the polynomial Q-hat in the modular three-term identity

        ln Gamma(z/tau, -1/tau, sigma/tau)
            - ln Gamma((z-tau)/sigma, -tau/sigma, -1/sigma)
            - ln Gamma(z, tau, sigma)  =  i pi Q-hat(z)   (mod 2 pi i),

    by least squares over sample_count points on a circle inside the
    common strip of all three logarithm series.  The sample center is
    placed to maximize the minimal strip margin; the circle radius is
    a fixed fraction of that margin, so the fitted coefficients are
    radius-stable.  Returns the cubic's coefficients (of Q-hat itself)
    and the maximal absolute fit residual on the log scale.
    """
    if sample_count < 8:
        raise DomainError("sample_count must be at least 8 for a stable cubic fit")
    if not pair.in_wedge:
        raise DomainError("fit_Q_cubic requires a wedge pair")
    tau = complex(pair.tau)
    sigma = complex(pair.sigma)
    height = (tau + sigma).imag
    best_z = None
    best_margin = -math.inf
    for re_i in range(41):
        for im_i in range(1, 40):
            z = complex(-1.5 + 3.0 * re_i / 40, height * im_i / 40)
            margin = _strip_margin(z, tau, sigma)
            if margin > best_margin:
                best_margin = margin
                best_z = z
    if best_margin <= 0:
        raise DomainError("no common strip interior found for the three logarithms")
    center = best_z
    rad = 0.4 * best_margin

    def f_val(z: complex) -> complex:
        b = log_ell_gamma_sum(GammaArg(z / tau, -1 / tau, sigma / tau), prec).value
        c = log_ell_gamma_sum(GammaArg((z - tau) / sigma, -tau / sigma, -1 / sigma), prec).value
        a = log_ell_gamma_sum(GammaArg(z, tau, sigma), prec).value
        return b - c - a

    us = np.array(
        [rad * cmath.exp(2j * math.pi * m / sample_count) for m in range(sample_count)]
    )
    fs = np.array([f_val(center + u) for u in us])
    jumps = np.abs(np.diff(np.concatenate([fs, fs[:1]])))
    if jumps.max() > 3.0:
        raise BranchError(
            "adjacent samples jump by more than a branch step; shrink the sample disk"
        )
    vander = np.column_stack([np.ones_like(us), us, us**2, us**3])
    sol, *_ = np.linalg.lstsq(vander, fs, rcond=None)
    resid = float(np.max(np.abs(vander @ sol - fs)))
    # recenter from powers of (z - center) to powers of z
    b0, b1, b2, b3 = (complex(v) for v in sol)
    zc = center
    c3 = b3
    c2 = b2 - 3 * b3 * zc
    c1 = b1 - 2 * b2 * zc + 3 * b3 * zc**2
    c0 = b0 - b1 * zc + b2 * zc**2 - b3 * zc**3
    ip = 1j * math.pi
    return CubicFit(c0 / ip, c1 / ip, c2 / ip, c3 / ip, resid)
