"""Identity checks, generator-word algebra, cocycle evaluation, limit probes."""

import random

import pytest

from ellzeta import (
    DomainError,
    GeneratorWord,
    HomogeneousTriple,
    IntegerMatrix3,
    ResidualReport,
    STANDARD_SIGMA,
    STANDARD_TAU,
    WedgePair,
    check_prop1_forward,
    check_three_term_additive,
    check_three_term_modular,
    cocycle_eval,
    limit_euler_gamma_probe,
    limit_zeta_probe,
    word_to_matrix,
    z_k_homogeneous,
)

STD = WedgePair(STANDARD_TAU, STANDARD_SIGMA)

IDENTITY_ROWS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _rand_pair(rng):
    return WedgePair(
        complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.4)),
        complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.4)),
    )


def test_standard_pair_is_in_wedge():
    assert STD.in_wedge


def test_residual_report_derives_pass_flag():
    ok = ResidualReport("x", {}, 1e-10, 1e-9)
    bad = ResidualReport("x", {}, 1e-8, 1e-9)
    assert ok.passed and not bad.passed


def test_additive_three_term_all_k():
    for k in range(1, 9):
        rep = check_three_term_additive(k, STD)
        assert rep.passed, "k=%d residual %.3e" % (k, rep.residual)
        assert rep.residual < 1e-9


def test_additive_three_term_random_pairs():
    rng = random.Random(9000)
    for _ in range(8):
        pair = _rand_pair(rng)
        k = rng.randrange(1, 9)
        rep = check_three_term_additive(k, pair)
        assert rep.passed


def test_additive_rejects_non_h_pair():
    with pytest.raises(DomainError):
        check_three_term_additive(2, WedgePair(1j, -1j))


def test_modular_three_term_all_k_with_anomaly():
    for k in range(1, 9):
        rep = check_three_term_modular(k, STD)
        assert rep.passed, "k=%d residual %.3e" % (k, rep.residual)
        assert rep.residual < 1e-8


def test_modular_anomaly_is_necessary_for_low_k():
    for k in (2, 3):
        rep = check_three_term_modular(k, STD, include_anomaly=False)
        assert not rep.passed
        assert rep.residual > 1e-3
        assert rep.identity.endswith("-no-anomaly")


def test_modular_anomaly_flag_irrelevant_for_high_k():
    with_term = check_three_term_modular(5, STD)
    without = check_three_term_modular(5, STD, include_anomaly=False)
    assert with_term.passed and without.passed


def test_modular_rejects_non_wedge():
    with pytest.raises(DomainError):
        check_three_term_modular(3, WedgePair(STANDARD_SIGMA, STANDARD_TAU))


def test_prop1_forward_even_k():
    for k in (4, 6):
        rep = check_prop1_forward(k, STD)
        assert rep.passed
        assert rep.residual < 1e-9


def test_prop1_rejects_odd_or_small_k():
    with pytest.raises(DomainError):
        check_prop1_forward(5, STD)
    with pytest.raises(DomainError):
        check_prop1_forward(2, STD)


def test_limit_zeta_probe_rows_decrease():
    sigmas = [0.05j, 0.02j, 0.01j]
    for k in (2, 3):
        rows = limit_zeta_probe(k, sigmas, 40j)
        assert [s for s, _ in rows] == sigmas
        errs = [e for _, e in rows]
        assert all(isinstance(e, float) and e >= 0 for e in errs)
        assert errs[0] > errs[1] > errs[2]


def test_limit_zeta_probe_rejects_k_one():
    with pytest.raises(DomainError):
        limit_zeta_probe(1, [0.02j], 40j)


def test_limit_euler_gamma_probe_rows_decrease():
    rows = limit_euler_gamma_probe([0.05j, 0.02j, 0.01j], 40j)
    errs = [e for _, e in rows]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 5e-2


def test_limit_euler_gamma_probe_needs_imaginary_sigma():
    with pytest.raises(DomainError):
        limit_euler_gamma_probe([0.01 + 0.02j], 40j)


def test_integer_matrix_validation_and_apply():
    m = IntegerMatrix3(((1, 1, 0), (0, 1, 0), (0, 0, 1)))
    out = m.apply((1j, 2j, 1.0 + 0j))
    assert out[0] == 1j + 2j and out[1] == 2j and out[2] == 1.0 + 0j
    with pytest.raises(DomainError):
        IntegerMatrix3(((2, 0, 0), (0, 1, 0), (0, 0, 1)))  # det 2
    with pytest.raises(DomainError):
        IntegerMatrix3(((1, 0), (0, 1), (0, 0)))


def test_word_parse_round_trip():
    w = GeneratorWord.parse("e12 e23^-1, e13")
    assert w.letters == ((1, 2, 1), (2, 3, -1), (1, 3, 1))


def test_word_parse_rejections():
    for bad in ("e11", "e12^2", "x21", "", "e140"):
        with pytest.raises(DomainError):
            GeneratorWord.parse(bad)


def test_word_to_matrix_generators():
    e12 = word_to_matrix(GeneratorWord.parse("e12"))
    assert e12.rows == ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    e32 = word_to_matrix(GeneratorWord.parse("e32"))
    assert e32.rows == ((1, 0, 0), (0, 1, 0), (0, 1, 1))
    cancel = word_to_matrix(GeneratorWord.parse("e21 e21^-1"))
    assert cancel.rows == IDENTITY_ROWS


def test_word_commutator_is_e13():
    w = GeneratorWord.parse("e12 e23 e12^-1 e23^-1")
    assert word_to_matrix(w).rows == ((1, 0, 1), (0, 1, 0), (0, 0, 1))


def test_cocycle_vanishes_on_cancelling_word():
    x = HomogeneousTriple(0.3 + 1.1j, -0.2 + 0.4j, 1.0 + 0j)
    for word in ("e12 e12^-1", "e23 e23^-1", "e32 e32^-1"):
        v = cocycle_eval(6, GeneratorWord.parse(word), x)
        assert abs(v) < 1e-12


def test_cocycle_composition_rule_for_squared_letter():
    # phi_{g^2}(x) = phi_g(x) + phi_g(g^-1 x) checked against direct values
    x = HomogeneousTriple(0.3 + 1.1j, -0.2 + 0.4j, 1.0 + 0j)
    k = 6
    composed = cocycle_eval(k, GeneratorWord.parse("e12 e12"), x)

    def phi_e12(y):
        return z_k_homogeneous(k, HomogeneousTriple(y[0] - y[1], y[0], y[2])).value

    g_inv = IntegerMatrix3(((1, -1, 0), (0, 1, 0), (0, 0, 1)))
    y = (x.x1, x.x2, x.x3)
    direct = phi_e12(y) + phi_e12(g_inv.apply(y))
    assert abs(composed - direct) < 1e-11


def test_cocycle_commutator_matches_direct_letter():
    # the e13 commutator word must reproduce the direct e13 value (zero)
    word = GeneratorWord.parse("e12 e23 e12^-1 e23^-1")
    direct = GeneratorWord.parse("e13")
    points = [
        HomogeneousTriple(0.3 + 1.1j, -0.2 + 0.4j, 1.0 + 0j),
        HomogeneousTriple(0.1 + 0.9j, 0.4 + 0.6j, 1.0 + 0j),
        HomogeneousTriple(-0.5 + 1.3j, 0.2 + 0.5j, 1.0 + 0j),
        HomogeneousTriple(0.3 + 1.1j, -0.2 + 0.4j, 0.9 - 0.1j),
        HomogeneousTriple(0.7 + 0.8j, -0.4 + 1.2j, 1.1 + 0j),
    ]
    for x in points:
        v1 = cocycle_eval(6, word, x)
        v2 = cocycle_eval(6, direct, x)
        assert abs(v1 - v2) < 1e-8, "x=%s diff %.3e" % (x, abs(v1 - v2))


def test_cocycle_domain_exit_names_the_letter():
    x = HomogeneousTriple(1 + 1j, 1j, 1.0 + 0j)  # x1 - x2 real: e12 leaves domain
    with pytest.raises(DomainError, match="letter 0"):
        cocycle_eval(6, GeneratorWord.parse("e12"), x)


def test_cocycle_requires_k_at_least_four():
    x = HomogeneousTriple(0.3 + 1.1j, -0.2 + 0.4j, 1.0 + 0j)
    with pytest.raises(DomainError):
        cocycle_eval(3, GeneratorWord.parse("e12"), x)
