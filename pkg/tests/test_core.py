"""Scalar infrastructure: tail bounds, integer zeta values, Euler's constant."""

import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from ellzeta import (
    ApproxValue,
    DEFAULT_POLICY,
    DomainError,
    PrecisionPolicy,
    em_power_tail,
    euler_gamma_const,
    euler_gamma_fn,
    power_tail_bound,
    qseries_tail_bound,
    zeta_int,
)
from ellzeta.core import em_power_tail_err, expi, upper_gamma_int

GAMMA_REF = 0.57721566490153286  # harmonic-minus-log limit, frozen reference


def test_policy_defaults():
    p = PrecisionPolicy()
    assert p.epsilon == 1e-12
    assert p.max_terms == 10 ** 6
    assert p.lattice_radius == 100
    assert p.digits == 0
    assert DEFAULT_POLICY == p


def test_policy_rejects_bad_fields():
    with pytest.raises(DomainError):
        PrecisionPolicy(epsilon=0.0)
    with pytest.raises(DomainError):
        PrecisionPolicy(epsilon=-1e-9)
    with pytest.raises(DomainError):
        PrecisionPolicy(max_terms=0)
    with pytest.raises(DomainError):
        PrecisionPolicy(lattice_radius=0)
    with pytest.raises(DomainError):
        PrecisionPolicy(digits=-1)


def test_policy_and_approx_value_are_frozen():
    p = PrecisionPolicy()
    with pytest.raises(AttributeError):
        p.epsilon = 1e-6
    av = ApproxValue(1 + 2j, 1e-12, 7)
    with pytest.raises(AttributeError):
        av.value = 0j
    assert av.value == 1 + 2j and av.err_bound == 1e-12 and av.terms_used == 7


def test_expi_quarter_turn_and_period():
    assert abs(expi(0.25) - 1j) < 1e-15
    assert abs(expi(0.5) + 1.0) < 1e-15
    rng = random.Random(7)
    for _ in range(20):
        w = complex(rng.uniform(-2, 2), rng.uniform(0, 1))
        assert abs(expi(w + 1) - expi(w)) <= 1e-14 * abs(expi(w))


def test_upper_gamma_matches_mpmath():
    for p in (0, 1, 2, 3, 5):
        for x in (0.1, 0.5, 2.0, 10.0):
            ref = float(mpmath.gammainc(p + 1, x, mpmath.inf))
            got = upper_gamma_int(p, x)
            assert abs(got - ref) <= 1e-12 * ref
    with pytest.raises(DomainError):
        upper_gamma_int(-1, 1.0)
    with pytest.raises(DomainError):
        upper_gamma_int(2, -0.5)


def test_power_tail_bound_dominates_brute_tail():
    for p, rho, j0 in [(0, 0.5, 3), (1, 0.5, 10), (2, 0.9, 1), (3, 0.3, 5), (2, 0.95, 40)]:
        j = np.arange(j0, j0 + 6000)
        brute = float(np.sum(j.astype(float) ** p * rho ** j))
        assert brute <= power_tail_bound(p, rho, j0)


def test_power_tail_bound_monotone_and_vanishing():
    rng = random.Random(11)
    for _ in range(100):
        p = rng.randrange(0, 6)
        rho = rng.uniform(0.05, 0.95)
        j0 = rng.randrange(1, 60)
        assert power_tail_bound(p, rho, j0 + 1) <= power_tail_bound(p, rho, j0)
    assert power_tail_bound(2, 0.5, 400) < 1e-100


def test_qseries_bound_geometric_regime():
    # k=1, rho=1/2: the tail is essentially geometric, so 2^(2-j0) dominates it
    for j0 in (10, 20, 40):
        assert qseries_tail_bound(1, 0.5, j0) <= 2.0 ** (2 - j0)


def test_qseries_bound_dominates_first_term():
    assert qseries_tail_bound(2, 0.9, 1) >= 1 * 0.9 / (1 - 0.9) ** 2


def test_qseries_bound_dominates_brute_tail():
    # with q = r = rho the summand magnitude is j^(k-1) rho^j / (1-rho^j)^2
    for k, rho, j0 in [(1, 0.3, 1), (2, 0.9, 1), (3, 0.5, 4), (4, 0.7, 10)]:
        brute = sum(j ** (k - 1) * rho ** j / (1 - rho ** j) ** 2
                    for j in range(j0, j0 + 4000))
        assert brute <= qseries_tail_bound(k, rho, j0)


def test_qseries_bound_monotone_seeded():
    rng = random.Random(23)
    for _ in range(100):
        k = rng.randrange(1, 7)
        rho = rng.uniform(0.05, 0.95)
        j0 = rng.randrange(1, 60)
        assert qseries_tail_bound(k, rho, j0 + 1) <= qseries_tail_bound(k, rho, j0)


def test_tail_bound_domain_errors():
    with pytest.raises(DomainError):
        power_tail_bound(1, 1.0, 5)
    with pytest.raises(DomainError):
        power_tail_bound(1, 0.5, 0)
    with pytest.raises(DomainError):
        qseries_tail_bound(0, 0.5, 5)
    with pytest.raises(DomainError):
        qseries_tail_bound(2, -0.1, 5)


def test_zeta_matches_closed_forms():
    v2 = zeta_int(2)
    assert abs(v2.value - math.pi ** 2 / 6) <= v2.err_bound
    assert abs(v2.value - math.pi ** 2 / 6) < 5e-13
    v4 = zeta_int(4)
    assert abs(v4.value - math.pi ** 4 / 90) <= v4.err_bound
    v3 = zeta_int(3)
    assert abs(v3.value - 1.2020569031595943) < 5e-13


def test_zeta_err_bound_honest_against_mpmath():
    for k in range(2, 10):
        av = zeta_int(k)
        ref = float(mpmath.zeta(k))
        assert abs(av.value - ref) <= av.err_bound


def test_zeta_decreasing_and_tends_to_one():
    vals = [zeta_int(k).value.real for k in range(2, 13)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    v20 = zeta_int(20).value.real
    assert v20 > 1.0
    assert v20 - 1.0 < 1e-5


def test_zeta_rejects_small_k():
    with pytest.raises(DomainError):
        zeta_int(1)


def test_zeta_high_precision_path_consistent():
    lo = zeta_int(3)
    hi = zeta_int(3, PrecisionPolicy(digits=30))
    assert abs(lo.value - hi.value) < 1e-13


def test_euler_gamma_constant_digits():
    assert abs(euler_gamma_const() - GAMMA_REF) < 1e-12


def test_euler_gamma_constant_vs_coarse_harmonic_sum():
    # independent low-order oracle: H_n - ln n - 1/(2n) at n = 10^5
    n = 10 ** 5
    h = math.fsum(1.0 / j for j in range(1, n + 1))
    coarse = h - math.log(n) - 1.0 / (2 * n)
    assert abs(euler_gamma_const() - coarse) < 1e-9


def test_euler_gamma_const_consistent_with_gamma_function():
    # Gamma(1+h) = 1 - gamma h + O(h^2)
    h = 1e-4
    g = euler_gamma_fn(h).value
    assert abs(g - (1.0 - euler_gamma_const() * h)) < 1e-7


def test_em_power_tail_matches_brute_sum_real_offset():
    c, k, n = 0.25, 4, 20
    m = np.arange(n + 1, 10 ** 6 + 1, dtype=float)
    brute = float(np.sum((c + m) ** (-k)))
    got = em_power_tail(c, k, n)
    assert abs(got - brute) <= em_power_tail_err(k, n) + 1e-14


def test_em_power_tail_matches_brute_sum_complex_offset():
    c, k, n = 0.3 + 0.2j, 3, 40
    m = np.arange(n + 1, 2 * 10 ** 6 + 1, dtype=float)
    brute = complex(np.sum((c + m) ** (-k)))
    got = em_power_tail(c, k, n)
    # the brute force cutoff itself leaves ~(2e6)^-2/2 in the real part
    assert abs(got - brute) <= em_power_tail_err(k, n) + 2e-13


def test_em_power_tail_err_decreases():
    errs = [em_power_tail_err(3, n) for n in (10, 20, 40, 80)]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    with pytest.raises(DomainError):
        em_power_tail(0.5, 1, 10)
