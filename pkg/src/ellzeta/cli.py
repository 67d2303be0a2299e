"""Command-line surface for evaluation, verification, and table emission.

Four subcommands:

  ezv eval TARGET      single-value evaluation (zk, zk_lattice, dk, theta0,
                       ellgamma, loggamma_sum, eisenstein, zeta, gk)
  ezv verify TARGET    identity check with residual and pass flag
                       (three-term-add, three-term-mod, func-eq, prop1, logEG,
                       thm2-first, thm2-Q, lipschitz, cocycle)
  ezv limits TARGET    limit tables, one envelope per sigma
                       (zeta-limit, gamma-limit, scl-limit)
  ezv table TARGET     CSV tables (divisors, dk-coeffs, zk-grid)

Every eval/verify/limits result is a ResultEnvelope with fixed key order:
request, value, err_bound, residual, pass, terms_used, precision,
wall_time_ms.  JSON output is one object per line with floats printed to 17
significant digits, so identical requests give byte-identical output apart
from wall_time_ms.  Complex literals on the command line are "re,im" or
"a+bi" text; scientific notation is accepted.

Exit codes: 0 success / verified, 1 clean verification failure, 2 domain or
usage error, 3 pole, 4 truncation budget exhausted, 5 output I/O error.
The EZV_PRECISION environment variable overrides the default epsilon; the
--epsilon flag overrides both.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from .core import (
    ApproxValue,
    BranchError,
    DomainError,
    PoleError,
    PrecisionPolicy,
    TruncationError,
    zeta_int,
)
from .divisor import _dk_prefactor, d_k, eisenstein_lattice, gk_qexp, sigma_power, theta0
from .gamma import (
    GammaArg,
    ell_gamma,
    euler_gamma_fn,
    fit_Q_cubic,
    log_ell_gamma_sum,
    scl_limit_probe,
    three_term_product_residual,
)
from .harness import (
    STANDARD_SIGMA,
    STANDARD_TAU,
    GeneratorWord,
    check_prop1_forward,
    check_three_term_additive,
    check_three_term_modular,
    cocycle_eval,
    limit_euler_gamma_probe,
    limit_zeta_probe,
    word_to_matrix,
)
from .zeta import HomogeneousTriple, WedgePair, lipschitz_both_sides, z_k, z_k_lattice

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_DOMAIN = 2
EXIT_POLE = 3
EXIT_TRUNCATION = 4
EXIT_IO = 5

EVAL_TARGETS = (
    "zk", "zk_lattice", "dk", "theta0", "ellgamma",
    "loggamma_sum", "eisenstein", "zeta", "gk",
)
VERIFY_TARGETS = (
    "three-term-add", "three-term-mod", "func-eq", "prop1", "logEG",
    "thm2-first", "thm2-Q", "lipschitz", "cocycle",
)
LIMIT_TARGETS = ("zeta-limit", "gamma-limit", "scl-limit")
TABLE_TARGETS = ("divisors", "dk-coeffs", "zk-grid")

# pass thresholds for the verify targets that are composed here rather than
# delegated to a harness check (those carry their own tolerance)
_VERIFY_TOL = {
    "func-eq": 1e-10,
    "logEG": 1e-10,
    "thm2-first": 1e-10,
    "thm2-Q": 1e-7,
    "lipschitz": 1e-10,
    "cocycle": 1e-8,
}

# per-target default for --k when the flag is omitted
_DEFAULT_K = {
    "zk": 2, "zk_lattice": 5, "dk": 2, "eisenstein": 4, "zeta": 2, "gk": 4,
    "three-term-add": 2, "three-term-mod": 3, "prop1": 4, "lipschitz": 2,
    "cocycle": 6, "zeta-limit": 2, "zk-grid": 5, "dk-coeffs": 2,
}


def _complex_arg(text: str) -> complex:
    """Parse "re,im", "a+bi", "a+bj", or a bare real."""
    t = text.strip()
    try:
        if "," in t:
            re_s, im_s = t.split(",", 1)
            return complex(float(re_s), float(im_s))
        return complex(t.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            "malformed complex literal %r (use re,im or a+bi)" % text)


def _float_list_arg(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("malformed number list %r" % text)
    if not vals:
        raise argparse.ArgumentTypeError("empty number list")
    return vals


def _grid_arg(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("grid must look like 3x3")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("grid must look like 3x3")
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("grid dimensions must be positive")
    return a, b


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _json_text(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats.

    Insertion order of dicts is preserved, which is what makes envelope
    output diffable; the stdlib encoder is bypassed only to control float
    formatting.
    """
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _g17(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ("%s:%s" % (json.dumps(k), _json_text(v)) for k, v in obj.items())
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_text(v) for v in obj) + "]"
    raise TypeError("unserializable value %r" % (obj,))


def _cfmt(c: complex) -> str:
    return "%s,%s" % (_g17(c.real), _g17(c.imag))


def _policy_from(args: argparse.Namespace) -> PrecisionPolicy:
    eps = args.epsilon
    if eps is None:
        env = os.environ.get("EZV_PRECISION")
        if env is not None:
            try:
                eps = float(env)
            except ValueError:
                raise DomainError("EZV_PRECISION is not a number: %r" % env)
    if eps is None:
        eps = 1e-12
    return PrecisionPolicy(
        epsilon=eps,
        max_terms=args.max_terms if args.max_terms is not None else 10 ** 6,
        lattice_radius=args.radius if args.radius is not None else 100,
    )


def _envelope(sub: str, target: str, params: dict, policy: PrecisionPolicy,
              t0: float, value: complex | None = None,
              err_bound: float | None = None, residual: float | None = None,
              passed: bool | None = None, terms: int | None = None) -> dict:
    return {
        "request": {
            "subcommand": sub,
            "target": target,
            "params": {k: params[k] for k in sorted(params)},
        },
        "value": None if value is None else {"re": value.real, "im": value.imag},
        "err_bound": err_bound,
        "residual": residual,
        "pass": passed,
        "terms_used": terms,
        "precision": {
            "epsilon": policy.epsilon,
            "max_terms": policy.max_terms,
            "lattice_radius": policy.lattice_radius,
            "digits": policy.digits,
        },
        "wall_time_ms": (time.perf_counter() - t0) * 1000.0,
    }


_CSV_FIELDS = (
    "subcommand", "target", "params", "value_re", "value_im", "err_bound",
    "residual", "pass", "terms_used", "epsilon", "max_terms",
    "lattice_radius", "digits", "wall_time_ms",
)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _g17(v)
    return str(v)


def _render_envelopes(envs: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(_json_text(e) + "\n" for e in envs)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(_CSV_FIELDS)
    for e in envs:
        req, prec = e["request"], e["precision"]
        params = ";".join("%s=%s" % (k, v) for k, v in req["params"].items())
        val = e["value"]
        w.writerow([_csv_cell(x) for x in (
            req["subcommand"], req["target"], params,
            None if val is None else val["re"],
            None if val is None else val["im"],
            e["err_bound"], e["residual"], e["pass"], e["terms_used"],
            prec["epsilon"], prec["max_terms"], prec["lattice_radius"],
            prec["digits"], e["wall_time_ms"],
        )])
    return buf.getvalue()


def _render_table(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        out = []
        for row in rows:
            out.append(_json_text(dict(zip(header, row))) + "\n")
        return "".join(out)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _fill_defaults(args: argparse.Namespace) -> None:
    if getattr(args, "k", None) is None:
        args.k = _DEFAULT_K.get(args.target, 2)
    if args.tau is None:
        args.tau = 40j if args.subcommand == "limits" else STANDARD_TAU
    if getattr(args, "sigma", None) is None:
        args.sigma = STANDARD_SIGMA
    if getattr(args, "z", None) is None:
        args.z = 2.0 + 0j if args.target == "scl-limit" else 0.3 + 0.2j


def _run_eval(args: argparse.Namespace, policy: PrecisionPolicy):
    t0 = time.perf_counter()
    target = args.target
    if target in ("zk", "zk_lattice"):
        pair = WedgePair(args.tau, args.sigma)
        fn = z_k if target == "zk" else z_k_lattice
        av = fn(args.k, pair, policy)
        params = {"k": args.k, "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
    elif target == "dk":
        av = d_k(args.k, args.q, policy, strategy=args.strategy)
        params = {"k": args.k, "q": _cfmt(args.q), "strategy": args.strategy}
    elif target == "theta0":
        av = theta0(args.z, args.tau, policy)
        params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau)}
    elif target == "ellgamma":
        av = ell_gamma(GammaArg(args.z, args.tau, args.sigma), policy)
        params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
    elif target == "loggamma_sum":
        av = log_ell_gamma_sum(GammaArg(args.z, args.tau, args.sigma), policy)
        params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
    elif target == "eisenstein":
        av = eisenstein_lattice(args.k, args.tau, policy)
        params = {"k": args.k, "tau": _cfmt(args.tau)}
    elif target == "zeta":
        av = zeta_int(args.k, policy)
        params = {"k": args.k}
    else:  # gk
        av = gk_qexp(args.k, args.tau, policy)
        params = {"k": args.k, "tau": _cfmt(args.tau)}
    env = _envelope("eval", target, params, policy, t0, value=av.value,
                    err_bound=av.err_bound, terms=av.terms_used)
    return [env], EXIT_OK


def _verify_composed(args: argparse.Namespace, policy: PrecisionPolicy):
    """Residual, pass flag, and payload for the non-harness verify targets."""
    target = args.target
    pair = WedgePair(args.tau, args.sigma)
    if target == "func-eq":
        g = ell_gamma(GammaArg(args.z, args.tau, args.sigma), policy)
        shifted = ell_gamma(GammaArg(args.z + args.sigma, args.tau, args.sigma), policy)
        th = theta0(args.z, args.tau, policy)
        rhs = th.value * g.value
        scale = max(abs(shifted.value), abs(rhs), 1e-300)
        residual = abs(shifted.value - rhs) / scale
        err = shifted.err_bound + abs(th.value) * g.err_bound + abs(g.value) * th.err_bound
        params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
        return residual, shifted.value, err, None, params
    if target == "logEG":
        s = log_ell_gamma_sum(GammaArg(args.z, args.tau, args.sigma), policy)
        p = ell_gamma(GammaArg(args.z, args.tau, args.sigma), policy)
        import cmath
        residual = abs(cmath.exp(s.value) - p.value) / max(abs(p.value), 1e-300)
        params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
        return residual, s.value, s.err_bound + p.err_bound, s.terms_used + p.terms_used, params
    if target == "thm2-first":
        residual = three_term_product_residual(GammaArg(args.z, args.tau, args.sigma), policy)
        params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
        return residual, None, None, None, params
    if target == "thm2-Q":
        fit = fit_Q_cubic(pair, args.samples, policy)
        params = {"samples": args.samples, "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
        return fit.fit_residual, fit.c3, None, args.samples, params
    if target == "lipschitz":
        left, right = lipschitz_both_sides(args.k, args.rho, policy)
        residual = abs(left.value - right.value)
        params = {"k": args.k, "rho": _cfmt(args.rho)}
        return (residual, left.value, left.err_bound + right.err_bound,
                left.terms_used + right.terms_used, params)
    # cocycle: two words for the same group element must give the same value
    w1 = GeneratorWord.parse(args.word)
    w2 = GeneratorWord.parse(args.word2)
    if word_to_matrix(w1).rows != word_to_matrix(w2).rows:
        raise DomainError("--word and --word2 describe different group elements")
    x = HomogeneousTriple(args.x1, args.x2, args.x3)
    v1 = cocycle_eval(args.k, w1, x, policy)
    v2 = cocycle_eval(args.k, w2, x, policy)
    params = {"k": args.k, "word": args.word, "word2": args.word2,
              "x1": _cfmt(args.x1), "x2": _cfmt(args.x2), "x3": _cfmt(args.x3)}
    return abs(v1 - v2), v1, None, None, params


def _run_verify(args: argparse.Namespace, policy: PrecisionPolicy):
    t0 = time.perf_counter()
    target = args.target
    if target in ("three-term-add", "three-term-mod", "prop1"):
        pair = WedgePair(args.tau, args.sigma)
        if target == "three-term-add":
            rep = check_three_term_additive(args.k, pair, policy)
        elif target == "three-term-mod":
            rep = check_three_term_modular(args.k, pair, policy,
                                           include_anomaly=not args.no_anomaly)
        else:
            rep = check_prop1_forward(args.k, pair, policy)
        params = {"k": args.k, "tau": _cfmt(args.tau), "sigma": _cfmt(args.sigma)}
        if args.no_anomaly and target == "three-term-mod":
            params["no_anomaly"] = "true"
        residual, passed = rep.residual, rep.passed
        value = err = terms = None
    else:
        residual, value, err, terms, params = _verify_composed(args, policy)
        passed = residual <= _VERIFY_TOL[target]
    env = _envelope("verify", target, params, policy, t0, value=value,
                    err_bound=err, residual=residual, passed=passed, terms=terms)
    return [env], EXIT_OK if passed else EXIT_VERIFY_FAIL


def _run_limits(args: argparse.Namespace, policy: PrecisionPolicy):
    t0 = time.perf_counter()
    target = args.target
    ts = args.sigmas if args.sigmas is not None else (0.05, 0.02, 0.01)
    sigmas = [1j * t for t in ts]
    envs = []
    if target == "zeta-limit":
        rows = limit_zeta_probe(args.k, sigmas, args.tau, policy)
        for sig, err in rows:
            params = {"k": args.k, "tau": _cfmt(args.tau), "sigma": _cfmt(sig)}
            envs.append(_envelope("limits", target, params, policy, t0, residual=err))
    elif target == "gamma-limit":
        rows = limit_euler_gamma_probe(sigmas, args.tau, policy)
        for sig, err in rows:
            params = {"tau": _cfmt(args.tau), "sigma": _cfmt(sig)}
            envs.append(_envelope("limits", target, params, policy, t0, residual=err))
    else:  # scl-limit
        vals = scl_limit_probe(args.z, sigmas, args.tau, policy)
        target_gamma = euler_gamma_fn(args.z - 1, policy).value
        for sig, v in zip(sigmas, vals):
            params = {"z": _cfmt(args.z), "tau": _cfmt(args.tau), "sigma": _cfmt(sig)}
            err = abs(v - target_gamma) / abs(target_gamma)
            envs.append(_envelope("limits", target, params, policy, t0,
                                  value=v, residual=err))
    return envs, EXIT_OK


def _run_table(args: argparse.Namespace, policy: PrecisionPolicy):
    target = args.target
    if target == "divisors":
        kmax = args.kmax if args.kmax is not None else 4
        nmax = args.nmax if args.nmax is not None else 10
        header = ["n"] + ["sigma_%d" % (k - 1) for k in range(1, kmax + 1)]
        rows = [[n] + [sigma_power(n, k - 1) for k in range(1, kmax + 1)]
                for n in range(1, nmax + 1)]
        return header, rows
    if target == "dk-coeffs":
        nmax = args.nmax if args.nmax is not None else 8
        pref = _dk_prefactor(args.k, 0)
        header = ["n", "coeff_re", "coeff_im"]
        rows = []
        for n in range(1, nmax + 1):
            c = pref * sigma_power(n, args.k - 1)
            rows.append([n, float(c.real), float(c.imag)])
        return header, rows
    # zk-grid: Im(tau) x Im(sigma) mesh, real parts taken from the flags
    g1, g2 = args.grid if args.grid is not None else (3, 3)
    header = ["tau_re", "tau_im", "sigma_re", "sigma_im",
              "value_re", "value_im", "err_bound", "terms_used"]
    rows = []
    for a in range(g1):
        tau_im = 1.0 + (1.0 * a / max(g1 - 1, 1))
        for b in range(g2):
            sig_im = 0.8 + (0.8 * b / max(g2 - 1, 1))
            pair = WedgePair(complex(args.tau.real, tau_im),
                             complex(args.sigma.real, sig_im))
            av = z_k(args.k, pair, policy)
            rows.append([pair.tau.real, pair.tau.imag, pair.sigma.real,
                         pair.sigma.imag, av.value.real, av.value.imag,
                         av.err_bound, av.terms_used])
    return header, rows


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _error_object(kind: str, message: str) -> str:
    return _json_text({"error": {"type": kind, "message": message}}) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ezv",
        description="Elliptic zeta values, the elliptic gamma function, and "
                    "machine-checkable residuals for their identities.")

    def common(sp, fmt_default):
        sp.add_argument("--k", type=int, default=None, help="series weight")
        sp.add_argument("--tau", type=_complex_arg, default=None,
                        help="first modulus (re,im), default 0.2,1.0 (limits: 0,40)")
        sp.add_argument("--sigma", type=_complex_arg, default=None,
                        help="second modulus (re,im), default 0.1,0.8")
        sp.add_argument("--z", type=_complex_arg, default=None,
                        help="argument point (re,im), default 0.3,0.2")
        sp.add_argument("--epsilon", type=float, default=None,
                        help="target truncation error (default 1e-12 or EZV_PRECISION)")
        sp.add_argument("--max-terms", type=int, default=None, dest="max_terms",
                        help="series term budget (default 1000000)")
        sp.add_argument("--radius", type=int, default=None,
                        help="lattice cutoff for direct sums (default 100)")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--out", default=None, help="write output to this path")

    sub = p.add_subparsers(dest="subcommand", required=True)

    pe = sub.add_parser("eval", help="evaluate one quantity")
    pe.add_argument("target", choices=EVAL_TARGETS)
    common(pe, "json")
    pe.add_argument("--q", type=_complex_arg, default=0.3 + 0.4j,
                    help="nome for dk (re,im), default 0.3,0.4")
    pe.add_argument("--strategy", choices=("lambert", "sigma"), default="lambert",
                    help="dk summation route")

    pv = sub.add_parser("verify", help="check one identity, exit 0 iff it holds")
    pv.add_argument("target", choices=VERIFY_TARGETS)
    common(pv, "json")
    pv.add_argument("--no-anomaly", action="store_true", dest="no_anomaly",
                    help="drop the weight 1..3 correction term in three-term-mod")
    pv.add_argument("--rho", type=_complex_arg, default=0.3 + 0.7j,
                    help="upper half-plane point for lipschitz")
    pv.add_argument("--samples", type=int, default=16,
                    help="sample count per ring for thm2-Q")
    pv.add_argument("--word", default="e12 e23 e12^-1 e23^-1",
                    help="generator word for cocycle")
    pv.add_argument("--word2", default="e13",
                    help="second word for the same group element")
    pv.add_argument("--x1", type=_complex_arg, default=0.3 + 1.1j)
    pv.add_argument("--x2", type=_complex_arg, default=-0.2 + 0.4j)
    pv.add_argument("--x3", type=_complex_arg, default=1.0 + 0j)

    pl = sub.add_parser("limits", help="limit tables over a sigma sequence")
    pl.add_argument("target", choices=LIMIT_TARGETS)
    common(pl, "json")
    pl.add_argument("--sigmas", type=_float_list_arg, default=None,
                    help="comma-separated positive reals t; each row uses sigma = i*t "
                         "(default 0.05,0.02,0.01)")

    pt = sub.add_parser("table", help="emit a CSV table")
    pt.add_argument("target", choices=TABLE_TARGETS)
    common(pt, "csv")
    pt.add_argument("--kmax", type=int, default=None, help="max weight column")
    pt.add_argument("--nmax", type=int, default=None, help="max index row")
    pt.add_argument("--grid", type=_grid_arg, default=None,
                    help="AxB mesh for zk-grid (default 3x3)")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit 2 on their own
        return int(exc.code or 0)
    try:
        policy = _policy_from(args)
        _fill_defaults(args)
        if args.subcommand == "eval":
            envs, code = _run_eval(args, policy)
            text = _render_envelopes(envs, args.format)
        elif args.subcommand == "verify":
            envs, code = _run_verify(args, policy)
            text = _render_envelopes(envs, args.format)
        elif args.subcommand == "limits":
            envs, code = _run_limits(args, policy)
            text = _render_envelopes(envs, args.format)
        else:
            header, rows = _run_table(args, policy)
            text = _render_table(header, rows, args.format)
            code = EXIT_OK
    except PoleError as exc:
        sys.stdout.write(_error_object("pole", str(exc)))
        return EXIT_POLE
    except TruncationError as exc:
        sys.stdout.write(_error_object("truncation", str(exc)))
        return EXIT_TRUNCATION
    except (DomainError, BranchError, ValueError) as exc:
        sys.stdout.write(_error_object("domain", str(exc)))
        return EXIT_DOMAIN
    try:
        _write_out(text, args.out)
    except OSError as exc:
        sys.stdout.write(_error_object("io", str(exc)))
        return EXIT_IO
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
