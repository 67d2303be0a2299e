"""Machine-checkable verification harness for the identity suite.

Every checker evaluates an identity's two sides through the public
evaluators, reports the absolute residual against a stated tolerance, and
never weakens either side.  The modular three-term checkers climb to
elevated working precision internally: at machine doubles the k = 7, 8
residuals at the reference pair are dominated by cancellation noise above
the 1e-8 tolerance, so the same series are run through mpmath instead.

The reference pair used across the test suite is tau = 0.2 + 1.0i,
sigma = 0.1 + 0.8i, which lies in the wedge Im(sigma / tau) > 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath as mp

from .core import (
    DEFAULT_POLICY,
    DomainError,
    PrecisionPolicy,
    euler_gamma_const,
    zeta_int,
)
from .divisor import _gk_backend
from .zeta import (
    HomogeneousTriple,
    WedgePair,
    anomaly_a,
    z_k,
    z_k_homogeneous,
    _zk_extended_backend,
)

STANDARD_TAU = complex(0.2, 1.0)
STANDARD_SIGMA = complex(0.1, 0.8)


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one identity check; passed is derived, never caller-set."""

    identity: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", self.residual <= self.tolerance)


@dataclass(frozen=True)
class IntegerMatrix3:
    """3x3 integer matrix with determinant 1."""

    rows: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise DomainError("rows must form a 3x3 matrix")
        if _det3(self.rows) != 1:
            raise DomainError("matrix must have determinant 1")

    def apply(self, vec):
        return tuple(sum(self.rows[i][j] * vec[j] for j in range(3)) for i in range(3))


def _det3(rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _elem(i: int, j: int, exponent: int):
    rows = [[1 if a == b else 0 for b in range(3)] for a in range(3)]
    rows[i - 1][j - 1] = exponent
    return tuple(tuple(r) for r in rows)


def _matmul3(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


@dataclass(frozen=True)
class GeneratorWord:
    """Word in the elementary generators e_ij, letters (i, j, exponent).

    Exponents are restricted to +1 and -1; higher powers are spelled as
    repeated letters.
    """

    letters: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for i, j, e in self.letters:
            if i not in (1, 2, 3) or j not in (1, 2, 3) or i == j:
                raise DomainError(f"invalid generator index pair ({i}, {j})")
            if e not in (1, -1):
                raise DomainError("letter exponents must be +1 or -1")

    @classmethod
    def parse(cls, text: str) -> "GeneratorWord":
        """Parse words like 'e12 e23 e12^-1 e23^-1' (commas also split)."""
        letters = []
        for token in text.replace(",", " ").split():
            body = token
            exponent = 1
            if "^" in token:
                body, _, tail = token.partition("^")
                if tail not in ("1", "-1"):
                    raise DomainError(f"unsupported exponent in token '{token}'")
                exponent = int(tail)
            if len(body) != 3 or body[0] != "e" or not body[1:].isdigit():
                raise DomainError(f"malformed generator token '{token}'")
            letters.append((int(body[1]), int(body[2]), exponent))
        if not letters:
            raise DomainError("empty generator word")
        return cls(tuple(letters))


def word_to_matrix(word: GeneratorWord) -> IntegerMatrix3:
    """Multiply out a generator word into its integer matrix."""
    acc = _elem(1, 1, 1)  # identity
    for i, j, e in word.letters:
        acc = _matmul3(acc, _elem(i, j, e))
    return IntegerMatrix3(acc)


def _phi_letter(k: int, i: int, j: int, y, prec: PrecisionPolicy) -> complex:
    # generator images: the two letters tied to the homogeneous form are
    # nonzero, every other e_ij is sent to the zero function (additive
    # convention, fixed here once for the whole cocycle)
    if (i, j) == (1, 2):
        triple = HomogeneousTriple(y[0] - y[1], y[0], y[2])
    elif (i, j) == (3, 2):
        triple = HomogeneousTriple(y[1] - y[2], y[2], y[0])
    else:
        return 0j
    return z_k_homogeneous(k, triple, prec).value


def cocycle_eval(
    k: int,
    word: GeneratorWord,
    x: HomogeneousTriple,
    prec: PrecisionPolicy = DEFAULT_POLICY,
) -> complex:
    """Evaluate the degree-k cocycle along a generator word at x,

        phi_{gh}(x) = phi_g(x) + phi_h(g^{-1} x),

    unrolled left to right; inverse letters use phi_{g^{-1}}(y) =
    -phi_g(g y).  Points that leave the domain of the homogeneous form at
    some letter raise DomainError naming that letter.
    """
    if k < 4:
        raise DomainError("cocycle evaluation requires k >= 4")
    vec = (complex(x.x1), complex(x.x2), complex(x.x3))
    prefix_inv = _elem(1, 1, 1)
    total = 0j
    for idx, (i, j, e) in enumerate(word.letters):
        y = IntegerMatrix3(prefix_inv).apply(vec)
        try:
            if e == 1:
                total += _phi_letter(k, i, j, y, prec)
            else:
                ly = IntegerMatrix3(_elem(i, j, 1)).apply(y)
                total -= _phi_letter(k, i, j, ly, prec)
        except DomainError as exc:
            sup = "" if e == 1 else "^-1"
            raise DomainError(
                f"letter {idx} (e{i}{j}{sup}) leaves the evaluation domain: {exc}"
            ) from exc
        prefix_inv = _matmul3(_elem(i, j, -e), prefix_inv)
    return total


def check_three_term_additive(
    k: int, pair: WedgePair, prec: PrecisionPolicy = DEFAULT_POLICY
) -> ResidualReport:
    """Residual of Z_k(tau, sigma) = Z_k(tau, tau+sigma) + Z_k(tau+sigma, sigma)."""
    if not pair.in_h_pair:
        raise DomainError("additive three-term check requires an H pair")
    tau, sigma = complex(pair.tau), complex(pair.sigma)
    z0 = z_k(k, pair, prec).value
    z1 = z_k(k, WedgePair(tau, tau + sigma), prec).value
    z2 = z_k(k, WedgePair(tau + sigma, sigma), prec).value
    residual = abs(z0 - z1 - z2)
    return ResidualReport(
        "three-term-additive",
        {"k": k, "tau": tau, "sigma": sigma},
        residual,
        1e-9,
    )


def check_three_term_modular(
    k: int,
    pair: WedgePair,
    prec: PrecisionPolicy = DEFAULT_POLICY,
    include_anomaly: bool = True,
) -> ResidualReport:
    """Residual of the modular three-term relation

        Z_k(tau, sigma) = tau^{-k} Z_k(-1/tau, sigma/tau)
                        + (-sigma)^{-k} Z_k(-tau/sigma, -1/sigma)
                        + [k <= 3] i pi a_k(tau, sigma),

    on wedge pairs, where all transformed pairs remain evaluable.  Inner
    values go through the extended-domain evaluator at elevated working
    precision (default 40 digits; prec.digits overrides when positive).
    include_anomaly=False drops the a_k term so its necessity for
    k in {1, 2, 3} can be demonstrated.
    """
    if not pair.in_wedge:
        raise DomainError("modular three-term check requires a wedge pair")
    digits = prec.digits if prec.digits else 40
    inner = PrecisionPolicy(
        min(prec.epsilon, 1e-20), prec.max_terms, prec.lattice_radius, digits
    )
    with mp.workdps(digits):
        tau = mp.mpc(complex(pair.tau))
        sigma = mp.mpc(complex(pair.sigma))
        z0, _, _ = _zk_extended_backend(k, tau, sigma, inner)
        z1, _, _ = _zk_extended_backend(k, -1 / tau, sigma / tau, inner)
        z2, _, _ = _zk_extended_backend(k, -tau / sigma, -1 / sigma, inner)
        res = z0 - tau ** (-k) * z1 - (-sigma) ** (-k) * z2
        if include_anomaly and k <= 3:
            res -= 1j * mp.pi * anomaly_a(k, tau, sigma)
        residual = float(abs(res))
    return ResidualReport(
        "three-term-modular" + ("" if include_anomaly else "-no-anomaly"),
        {"k": k, "tau": complex(pair.tau), "sigma": complex(pair.sigma)},
        residual,
        1e-8,
    )


def check_prop1_forward(
    k: int, pair: WedgePair, prec: PrecisionPolicy = DEFAULT_POLICY
) -> ResidualReport:
    """Both three-term relations for the Eisenstein difference

        Z(tau, sigma) = G_k(sigma) - G_k(tau),   k even >= 4,

    additive on (tau, sigma, tau+sigma) and modular with weight-k factors
    tau^{-k}, sigma^{-k}.  Reported residual is the larger of the two.
    Runs at elevated working precision (default 30 digits) because the
    Eisenstein values near the wedge edge reach 1e7 and cancel.
    """
    if k % 2 != 0 or k < 4:
        raise DomainError("check_prop1_forward requires even k >= 4")
    if not pair.in_wedge:
        raise DomainError("check_prop1_forward requires a wedge pair")
    digits = prec.digits if prec.digits else 30
    inner = PrecisionPolicy(
        min(prec.epsilon, 1e-18), prec.max_terms, prec.lattice_radius, digits
    )
    with mp.workdps(digits):
        tau = mp.mpc(complex(pair.tau))
        sigma = mp.mpc(complex(pair.sigma))

        def g(t):
            return _gk_backend(k, t, inner)[0]

        def zz(a, b):
            return g(b) - g(a)

        r_add = abs(zz(tau, sigma) - zz(tau, tau + sigma) - zz(tau + sigma, sigma))
        r_mod = abs(
            zz(tau, sigma)
            - tau ** (-k) * zz(-1 / tau, sigma / tau)
            - sigma ** (-k) * zz(-tau / sigma, -1 / sigma)
        )
        residual = float(max(r_add, r_mod))
    return ResidualReport(
        "eisenstein-difference-three-term",
        {"k": k, "tau": complex(pair.tau), "sigma": complex(pair.sigma)},
        residual,
        1e-9,
    )


def limit_zeta_probe(
    k: int,
    sigma_list,
    tau_large: complex,
    prec: PrecisionPolicy = DEFAULT_POLICY,
) -> list[tuple[complex, float]]:
    """Error table for sigma^k Z_k(tau, sigma) -> zeta(k) as sigma -> 0
    with tau held high in H; rows are (sigma, |sigma^k Z_k - zeta(k)|).

    The error should decrease down a shrinking sigma list; callers assert
    rates, this just measures.
    """
    if k < 2:
        raise DomainError("the zeta limit needs k >= 2")
    tau_large = complex(tau_large)
    if not (tau_large.imag > 0):
        raise DomainError("tau_large must lie in H")
    target = zeta_int(k, prec).value.real
    rows = []
    for sigma in sigma_list:
        sigma = complex(sigma)
        val = sigma**k * z_k(k, WedgePair(tau_large, sigma), prec).value
        rows.append((sigma, abs(val - target)))
    return rows


def limit_euler_gamma_probe(
    sigma_list,
    tau_large: complex,
    prec: PrecisionPolicy = DEFAULT_POLICY,
) -> list[tuple[complex, float]]:
    """Error table for sigma Z_1(tau, sigma) + ln(-2 pi i sigma) -> gamma
    on the positive imaginary sigma axis; rows are (sigma, error)."""
    tau_large = complex(tau_large)
    if not (tau_large.imag > 0):
        raise DomainError("tau_large must lie in H")
    target = euler_gamma_const()
    rows = []
    for sigma in sigma_list:
        sigma = complex(sigma)
        if sigma.real != 0 or sigma.imag <= 0:
            raise DomainError("the k = 1 limit is stated on the positive imaginary axis")
        w = sigma * z_k(1, WedgePair(tau_large, sigma), prec).value + cmath.log(
            -2j * math.pi * sigma
        )
        rows.append((sigma, abs(w - target)))
    return rows
