"""Command-line front end for the diagnostic experiments.

Each subcommand runs one experiment, writes a JSON report (and an
optional CSV of level/value/flag rows) under the output directory, and
asserts the experiment's expected outcome:

    expsys-sweep      dual-expansion partial sums; asserts the
                      no-norm-convergence flag and constant term norms
    zak-validate      Zak transform unitarity, covariance, and the
                      theta cross-check; asserts all tolerances
    quotient-ladder   refinement ladder of a quotient integral; asserts
                      convergence for the cone numerator, divergence
                      for the constant numerator
    rp-check          random reproducing-pair normalisation; asserts
                      identity deviation and adjoint symmetry
    excess-n          head/tail excess identities on random pairs;
                      asserts all residuals within ten times the
                      working tolerance

Exit status: 0 when the asserted outcome holds, 2 when it fails, 1 on
usage or configuration errors.  Reports are deterministic for a fixed
seed; the only run-dependent content is the "metadata" field.  The env
var ZAKBENCH_THREADS caps worker threads for ladder levels.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ZakbenchError
from .expsys import (
    ExpSystem,
    PeriodicSignal,
    load_signal,
    save_signal,
    schauder_failure_sweep,
)
from .reports import ZakValidationReport, dump_report_json
from .reproducing import excess_n_identities, random_excess_pair, random_pair_check
from .zak import (
    ConeParams,
    ThetaParams,
    cone,
    enk,
    gaussian_atom,
    gaussian_zak_theta,
    load_grid_function,
    midpoint_meshgrid,
    modulated_translate,
    quotient_integral,
    save_grid_function,
    theta1_prime_zero,
    theta_grid,
    zak_transform,
)

USAGE_ERROR = 1
ASSERTION_FAILURE = 2


def _max_workers() -> int:
    raw = os.environ.get("ZAKBENCH_THREADS", "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"ZAKBENCH_THREADS must be an integer, got {raw!r}")
    if workers < 1:
        raise ValueError(f"ZAKBENCH_THREADS must be positive, got {workers}")
    return workers


def _metadata(args: argparse.Namespace) -> dict:
    return {
        "command": args.command,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seed": args.seed,
        "version": __version__,
    }


def _write_report(args: argparse.Namespace, stem: str, report, csv_rows=None) -> Path:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{stem}.json"
    json_path.write_text(dump_report_json(report, metadata=_metadata(args)))
    if args.csv:
        if csv_rows is None:
            csv_rows = []
        with open(out_dir / f"{stem}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["level", "value", "flag"])
            writer.writerows(csv_rows)
    return json_path


def _verdict(command: str, passed: bool, detail: str, path: Path) -> int:
    state = "PASS" if passed else "FAIL"
    print(f"{command}: {state} ({detail}) report={path}")
    return 0 if passed else ASSERTION_FAILURE


def _run_expsys_sweep(args: argparse.Namespace) -> int:
    if args.g_file is not None:
        weight = load_signal(args.g_file)
    else:
        weight = PeriodicSignal.from_name(args.g, args.N)
    system = ExpSystem(weight=weight, window=args.W, removed=args.k, anchor=args.t0)
    max_terms = args.max_terms if args.max_terms is not None else args.W
    report = schauder_failure_sweep(system, max_terms)
    if args.dump_weight is not None:
        save_signal(weight, args.dump_weight)

    g_norm = weight.norm()
    term_norms = [lv.term_norm for lv in report.levels if lv.term_norm > 0.0]
    norm_spread = max(abs(t - g_norm) for t in term_norms) if term_norms else float("inf")
    passed = report.flags.no_norm_convergence and norm_spread <= 1e-9 * max(g_norm, 1e-30)

    rows = [(lv.L, lv.residual, report.flags.no_norm_convergence) for lv in report.levels]
    path = _write_report(args, "expsys_sweep", report, rows)
    detail = (
        f"no_norm_convergence={report.flags.no_norm_convergence}, "
        f"term norm spread {norm_spread:.3e}"
    )
    return _verdict(args.command, passed, detail, path)


def _run_zak_validate(args: argparse.Namespace) -> int:
    params = ThetaParams(truncation=args.K)
    direct = zak_transform(gaussian_atom, args.M, args.J)
    theta = theta_grid(args.M, params)

    shifted = zak_transform(modulated_translate(gaussian_atom, 0, args.shift), args.M, args.J)

    # Covariance: modulation by n and translation by k multiply the
    # transform by the plane wave with indices (n, k).
    X, XI = midpoint_meshgrid(args.M)
    cov_dev = 0.0
    r = args.cov_range
    for n in range(-r, r + 1):
        for k in range(-r, r + 1):
            lhs = zak_transform(modulated_translate(gaussian_atom, n, k), args.M, args.J)
            rhs = enk(n, k, X, XI) * direct.samples
            cov_dev = max(cov_dev, float(np.max(np.abs(lhs.samples - rhs))))

    theta_dev = float(np.max(np.abs(theta.samples - direct.samples)))
    center_abs = abs(gaussian_zak_theta(0.5, 0.5, params))
    corner = abs(gaussian_zak_theta(0.0, 0.0, params))
    prime = theta1_prime_zero(params)
    prime_oracle = theta1_prime_zero(ThetaParams(truncation=20))
    prime_rel = abs(prime - prime_oracle) / abs(prime_oracle)

    checks = {
        "gaussian_norm": abs(direct.norm() - 1.0) <= 1e-6,
        "translated_norm": abs(shifted.norm() - 1.0) <= 1e-6,
        "covariance": cov_dev <= 1e-10,
        "theta_vs_series": theta_dev <= 1e-10,
        "center_zero": center_abs <= 1e-12,
        "theta_prime": prime_rel <= 1e-13 and prime >= 0.9,
    }

    if args.theta_file is not None:
        stored = load_grid_function(args.theta_file)
        reference = theta_grid(stored.M, params)
        checks["theta_file"] = (
            float(np.max(np.abs(stored.samples - reference.samples))) <= 1e-12
        )

    report = ZakValidationReport(
        M=args.M,
        J=args.J,
        truncation_K=args.K,
        gaussian_norm=direct.norm(),
        translated_norm=shifted.norm(),
        translate_shift=float(args.shift),
        covariance_range=r,
        covariance_max_dev=cov_dev,
        theta_vs_series_max_dev=theta_dev,
        center_zero_abs=float(center_abs),
        corner_value=float(corner),
        theta_prime_value=float(prime),
        theta_prime_oracle_rel_dev=float(prime_rel),
        passed=all(checks.values()),
    )
    if args.dump_theta is not None:
        save_grid_function(theta, args.dump_theta)

    rows = [
        ("gaussian_norm", report.gaussian_norm, checks["gaussian_norm"]),
        ("translated_norm", report.translated_norm, checks["translated_norm"]),
        ("covariance_max_dev", report.covariance_max_dev, checks["covariance"]),
        ("theta_vs_series_max_dev", report.theta_vs_series_max_dev, checks["theta_vs_series"]),
        ("center_zero_abs", report.center_zero_abs, checks["center_zero"]),
        ("theta_prime_oracle_rel_dev", report.theta_prime_oracle_rel_dev, checks["theta_prime"]),
    ]
    path = _write_report(args, "zak_validate", report, rows)
    failing = sorted(name for name, ok in checks.items() if not ok)
    detail = "all checks passed" if report.passed else f"failing: {', '.join(failing)}"
    return _verdict(args.command, report.passed, detail, path)


def _run_quotient_ladder(args: argparse.Namespace) -> int:
    ladder = [int(part) for part in args.ladder.split(",") if part.strip()]
    params = ThetaParams(truncation=args.K)
    denominator = lambda x, xi: gaussian_zak_theta(x, xi, params)  # noqa: E731
    if args.numerator == "cone":
        centre = ConeParams()
        numerator = lambda x, xi: cone(centre, x, xi)  # noqa: E731
        expect = "converges"
    else:
        numerator = lambda x, xi: np.ones_like(np.asarray(x, dtype=float))  # noqa: E731
        expect = "diverges"
    report = quotient_integral(
        numerator,
        denominator,
        ladder,
        numerator_name=args.numerator,
        denominator_name="gaussian_zak",
        max_workers=_max_workers(),
    )
    passed = report.converges if expect == "converges" else report.diverges

    flag = "converges" if report.converges else ("diverges" if report.diverges else "undecided")
    rows = [(M, est, flag) for M, est in zip(report.ladder, report.estimates)]
    path = _write_report(args, f"quotient_ladder_{args.numerator}", report, rows)
    detail = f"expected {expect}, converges={report.converges}, diverges={report.diverges}"
    return _verdict(args.command, passed, detail, path)


def _run_rp_check(args: argparse.Namespace) -> int:
    report = random_pair_check(dim=args.dim, pairs=args.pairs, trials=args.trials, seed=args.seed)
    rows = [
        ("max_identity_deviation", report.max_identity_deviation, report.passed),
        ("max_adjoint_asymmetry", report.max_adjoint_asymmetry, report.passed),
        ("min_invertibility_margin", report.min_invertibility_margin, report.passed),
    ]
    path = _write_report(args, "rp_check", report, rows)
    detail = (
        f"deviation {report.max_identity_deviation:.3e}, "
        f"asymmetry {report.max_adjoint_asymmetry:.3e}"
    )
    return _verdict(args.command, report.passed, detail, path)


def _run_excess_n(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    phi, psi = random_excess_pair(args.dim, args.n, rng, dependent_head=args.dependent_head)
    report = excess_n_identities(
        phi, psi, args.n, tol=args.tol, trials=args.trials, seed=args.seed
    )
    limit = 10.0 * args.tol
    passed = all(value <= limit for value in report.residuals.values())

    rows = [(name, value, value <= limit) for name, value in sorted(report.residuals.items())]
    path = _write_report(args, "excess_n", report, rows)
    worst = max(report.residuals.values())
    detail = f"worst residual {worst:.3e} against limit {limit:.1e}, final n={report.n}"
    return _verdict(args.command, passed, detail, path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zakbench",
        description="diagnostics for weighted exponential systems, Zak transforms, "
        "and reproducing pairs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument("--out", default="./reports", help="report output directory")
    common.add_argument("--csv", action="store_true", help="also write level,value,flag rows")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "expsys-sweep",
        parents=[common],
        help="partial sums of the dual expansion of the removed element",
    )
    p.add_argument("--g", default="linear", help="weight name: linear, one, or sqrt")
    p.add_argument("--g-file", default=None, help="sampled weight file (overrides --g)")
    p.add_argument("--N", type=int, default=256, help="grid size, even")
    p.add_argument("--W", type=int, default=16, help="frequency window half-width")
    p.add_argument("--k", type=int, default=0, help="removed index")
    p.add_argument("--t0", type=float, default=0.25, help="anchor point in [0, 1)")
    p.add_argument("--max-terms", type=int, default=None, help="sweep levels, default W")
    p.add_argument("--dump-weight", default=None, help="write the weight samples to this file")
    p.set_defaults(run=_run_expsys_sweep)

    p = sub.add_parser(
        "zak-validate",
        parents=[common],
        help="unitarity, covariance, and theta cross-checks of the Zak transform",
    )
    p.add_argument("--M", type=int, default=128, help="grid resolution per axis, even")
    p.add_argument("--J", type=int, default=6, help="translation cutoff of the direct sum")
    p.add_argument("--K", type=int, default=8, help="theta series truncation")
    p.add_argument("--shift", type=int, default=1, help="integer translate for the norm check")
    p.add_argument("--cov-range", type=int, default=2, help="covariance index range")
    p.add_argument("--dump-theta", default=None, help="write the theta-form grid to this file")
    p.add_argument("--theta-file", default=None, help="check a stored grid file against the theta form")
    p.set_defaults(run=_run_zak_validate)

    p = sub.add_parser(
        "quotient-ladder",
        parents=[common],
        help="refinement ladder for a quotient integral against |Z phi|^2",
    )
    p.add_argument("--numerator", choices=("cone", "one"), required=True)
    p.add_argument("--ladder", default="64,128,256,512", help="comma-separated even resolutions")
    p.add_argument("--K", type=int, default=8, help="theta series truncation")
    p.set_defaults(run=_run_quotient_ladder)

    p = sub.add_parser(
        "rp-check",
        parents=[common],
        help="normalisation of random reproducing pairs",
    )
    p.add_argument("--dim", type=int, default=8, help="ambient dimension")
    p.add_argument("--pairs", type=int, default=20, help="random pairs to test")
    p.add_argument("--trials", type=int, default=8, help="random probes per pair")
    p.set_defaults(run=_run_rp_check)

    p = sub.add_parser(
        "excess-n",
        parents=[common],
        help="head/tail excess identities on a random reproducing pair",
    )
    p.add_argument("--dim", type=int, default=8, help="ambient dimension")
    p.add_argument("--n", type=int, default=1, help="head length")
    p.add_argument("--tol", type=float, default=1e-11, help="working tolerance")
    p.add_argument("--trials", type=int, default=20, help="random probes")
    p.add_argument(
        "--dependent-head",
        action="store_true",
        help="duplicate a head direction to exercise the reduction path",
    )
    p.set_defaults(run=_run_excess_n)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else USAGE_ERROR
    try:
        return args.run(args)
    except (ZakbenchError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
