"""Command-line surface.

Subcommands: g0, gcurve, gdet, decompose, commoninfo, multiletter, generate,
validate. Exit codes: 0 success, 1 validation failure, 2 infeasible or guard
refusal, 64 usage error. Identical argv + input files + seed reproduce
byte-identical reports; stochastic subcommands therefore require --seed.
"""
from __future__ import annotations

import argparse
import sys

from .errors import InstanceTooLargeError, ValidationError
from .io import build_report, parse_distribution, quantity, render_csv, render_json
from .multiletter import multiletter_evaluate
from .perfect import g0
from .privateinfo import (
    common_info_bundle,
    decompose,
    distinct_posteriors,
    exact_generation_check,
)
from .prob import entropy_bits, mutual_information
from .tradeoff import g_eps_curve, g_eps_deterministic

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_REFUSED = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(p: _Parser, seed_required: bool = False):
    p.add_argument("path", help="distribution file")
    p.add_argument("--tol", type=float, default=1e-9, help="posterior/rank tolerance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, required=seed_required, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--z-card", type=int, default=None, dest="z_card")


def _build_parser() -> _Parser:
    parser = _Parser(prog="ratepriv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("validate", help="check a distribution file"))
    _add_common(sub.add_parser("g0", help="perfect-privacy utility g_0"))
    p = sub.add_parser("gdet", help="deterministic-filter tradeoff at one eps")
    _add_common(p)
    p.add_argument("--eps", type=float, required=True)
    p = sub.add_parser("gcurve", help="tradeoff curve over an eps grid")
    _add_common(p, seed_required=True)
    p.add_argument("--eps-grid", required=True, help="comma-separated ascending eps values")
    _add_common(sub.add_parser("decompose", help="T^X(Y), C_X(Y), D_X(Y)"))
    _add_common(sub.add_parser("commoninfo", help="information-measure chain bundle"), seed_required=True)
    p = sub.add_parser("multiletter", help="near-uniform binning report")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    _add_common(sub.add_parser("generate", help="exact two-processor generation check"))
    return parser


def _filter_payload(point):
    return {
        "matrix": [[float(v) for v in row] for row in point.filter.matrix],
        "deterministic": point.filter.deterministic,
        "method": point.method,
    }


def _run(args, warnings: list[str]) -> dict:
    j = parse_distribution(args.path, warnings)
    tol = args.tol
    results: dict = {}

    if args.command == "validate":
        results["valid"] = True
        results["n_x"] = quantity(j.n_x, unit="symbols")
        results["n_y"] = quantity(j.n_y, unit="symbols")
        results["mutual_information"] = quantity(mutual_information(j), tolerance=tol)

    elif args.command == "g0":
        point = g0(j, args.z_card)
        results["g0"] = quantity(point.utility, tolerance=tol)
        results["leakage"] = quantity(point.achieved_leakage, tolerance=1e-9)
        results["filter"] = _filter_payload(point)

    elif args.command == "gdet":
        point = g_eps_deterministic(j, args.eps)
        results["eps"] = quantity(args.eps, tolerance=None)
        results["g_det"] = quantity(point.utility, tolerance=tol)
        results["leakage"] = quantity(point.achieved_leakage, tolerance=1e-6)
        results["filter"] = _filter_payload(point)
        results["notes"] = list(point.notes)

    elif args.command == "gcurve":
        grid = [float(tok) for tok in args.eps_grid.split(",") if tok.strip()]
        curve = g_eps_curve(
            j, grid, restarts=args.restarts or 32, seed=args.seed, z_card=args.z_card
        )
        results["points"] = [
            {
                "eps": quantity(p.epsilon, tolerance=None),
                "utility": quantity(p.utility, tolerance=1e-6),
                "leakage": quantity(p.achieved_leakage, tolerance=1e-6),
                "method": p.method,
            }
            for p in curve.points
        ]

    elif args.command == "decompose":
        dec = decompose(j, tol)
        results["c_x"] = quantity(dec.c_x, tolerance=tol)
        results["d_x"] = quantity(dec.d_x, tolerance=tol)
        results["h_y"] = quantity(entropy_bits(j.p_y), tolerance=tol)
        results["distinct_posteriors"] = distinct_posteriors(j, tol)
        results["blocks"] = [list(b) for b in dec.statistic.block_labels()]

    elif args.command == "commoninfo":
        bundle = common_info_bundle(j, seed=args.seed, restarts=args.restarts or 8)
        results["mi"] = quantity(bundle.mi, tolerance=tol)
        results["cw_upper"] = quantity(bundle.cw_upper, tolerance=1e-9, bound="upper")
        results["g_upper"] = quantity(bundle.g_upper, tolerance=1e-9, bound="upper")
        results["c_x"] = quantity(bundle.c_x, tolerance=tol)
        results["h_y"] = quantity(bundle.h_y, tolerance=tol)
        results["gacs_korner"] = quantity(bundle.gk, tolerance=tol)
        results["m"] = quantity(bundle.m, tolerance=1e-9, bound="lower")
        results["h_dagger"] = quantity(bundle.h_dagger, tolerance=tol)
        results["markov_defect_cw"] = quantity(bundle.markov_defect_cw, tolerance=1e-6)
        results["markov_defect_g"] = quantity(bundle.markov_defect_g, tolerance=1e-6)

    elif args.command == "multiletter":
        rep = multiletter_evaluate(j, args.n, args.delta)
        results["h_inf"] = quantity(rep.h_inf, tolerance=tol)
        results["r"] = quantity(rep.r, unit="bits", tolerance=None)
        results["s"] = quantity(rep.s, unit="bits", tolerance=None)
        results["rate"] = quantity(rep.rate, unit="bits/symbol", tolerance=None)
        results["degenerate"] = rep.degenerate
        results["analytic_bound"] = quantity(rep.analytic_bound, unit="tv", tolerance=None)
        results["per_symbol_tv"] = [quantity(v, unit="tv", tolerance=None) for v in rep.per_symbol_tv]
        results["pairwise_tv_max"] = quantity(rep.pairwise_tv_max, unit="tv", tolerance=None)
        results["joint_tv"] = quantity(rep.joint_tv, unit="tv", tolerance=None)
        results["leakage"] = quantity(rep.leakage, tolerance=tol)
        results["decoder_error_prob"] = quantity(rep.decoder_error_prob, unit="probability", tolerance=None)

    elif args.command == "generate":
        deviation = exact_generation_check(j)
        dec = decompose(j, tol)
        results["max_deviation"] = quantity(deviation, unit="probability", tolerance=1e-12)
        results["n_blocks"] = quantity(dec.statistic.n_blocks, unit="symbols")
        results["exact"] = bool(deviation < 1e-12)

    return build_report(
        args.command,
        args.path,
        args.seed,
        {"validation": 1e-9, "posterior": tol, "file_mass": 1e-6},
        results,
        warnings,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        parser_usage = parser.format_usage()
        sys.stderr.write(parser_usage)
        return EXIT_USAGE
    warnings: list[str] = []
    try:
        report = _run(args, warnings)
    except InstanceTooLargeError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EXIT_REFUSED
    except (ValidationError, FileNotFoundError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_VALIDATION
    text = render_json(report) if args.format == "json" else render_csv(report)
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
