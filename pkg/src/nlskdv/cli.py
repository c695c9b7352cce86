"""Command-line entry point.

Subcommands: ``run <config>``, ``scenario <t13|t14a|t14b>``,
``validate-boundary-ops``, ``converge``, ``airy <x>``.

Exit status: 0 success / verdict pass, 1 usage or configuration error,
2 verdict fail, 3 hypotheses not met, 4 blow-up halt.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .airy import airy_standard
from .boundary_ops import build_validation_report
from .config import load_config
from .errors import BlowUpError, ConfigError, OutOfRangeError, QuadratureConvergenceError
from .scenarios import (
    convergence_study,
    scenario_global_right,
    scenario_growth_left,
    write_report,
)
from .stepper import run as run_sim

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_NO_HYPOTHESES = 3
EXIT_HALT = 4

_STATUS_CODES = {
    "pass": EXIT_OK,
    "fail": EXIT_FAIL,
    "hypotheses-not-met": EXIT_NO_HYPOTHESES,
    "halted": EXIT_HALT,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract is 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="nlskdv",
                     description="Coupled Schrodinger-KdV half-line laboratory")
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="integrate a configured simulation")
    p_run.add_argument("config", help="path to a key = value config file")
    p_run.add_argument("--override", action="append", default=[],
                       metavar="SECTION.KEY=VALUE")
    p_run.add_argument("--outdir", default="out")

    p_sc = sub.add_parser("scenario", help="run a theorem scenario")
    p_sc.add_argument("name", choices=["t13", "t14a", "t14b"])
    p_sc.add_argument("--override", action="append", default=[],
                      metavar="SECTION.KEY=VALUE")
    p_sc.add_argument("--outdir", default="out")

    p_val = sub.add_parser("validate-boundary-ops",
                           help="trace/residual/cross-validation report for the "
                                "linear boundary operators")
    p_val.add_argument("--outdir", default="out")
    p_val.add_argument("--fast", action="store_true",
                       help="smaller cross-validation ladder")

    p_cv = sub.add_parser("converge", help="manufactured-solution convergence study")
    p_cv.add_argument("--outdir", default="out")
    p_cv.add_argument("--base-cells", type=int, default=256)
    p_cv.add_argument("--base-dt", type=float, default=8e-3)
    p_cv.add_argument("--levels", type=int, default=3)

    p_airy = sub.add_parser("airy", help="evaluate the Airy function Ai")
    p_airy.add_argument("x", type=float)
    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(args)
    except (ConfigError, OutOfRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BlowUpError as exc:
        print(f"halted: {exc}", file=sys.stderr)
        return EXIT_HALT


def _dispatch(args) -> int:
    if args.command == "airy":
        print(f"{airy_standard(args.x):.10f}")
        return EXIT_OK

    if args.command == "run":
        config = load_config(args.config, args.override)
        result = run_sim(config)
        result.write_outputs(args.outdir)
        _print_summary(result)
        return EXIT_HALT if result.halted else EXIT_OK

    if args.command == "scenario":
        if args.name == "t13":
            verdict, result = scenario_global_right(args.override)
        else:
            verdict, result = scenario_growth_left(args.name[-1], args.override)
        outdir = Path(args.outdir)
        result.write_outputs(outdir)
        verdict.write(outdir / "verdict.json")
        _print_summary(result)
        print(f"scenario {verdict.scenario}: {verdict.status}"
              + (f" (margin {verdict.margin:.4g}, slack {verdict.slack:.4g})"
                 if verdict.margin is not None else ""))
        return _STATUS_CODES[verdict.status]

    if args.command == "validate-boundary-ops":
        report = build_validation_report(fast=args.fast)
        outdir = Path(args.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_report(report, outdir / "boundary_ops.json")
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK

    if args.command == "converge":
        resolutions = [(args.base_cells * 2**k, args.base_dt / 2**k)
                       for k in range(args.levels)]
        report = convergence_study(resolutions)
        outdir = Path(args.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        write_report(report, outdir / "convergence.json")
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


def _print_summary(result) -> None:
    s = result.summary()
    res = s["max_residuals"]
    print(f"run '{s['config']['tag']}': direction {s['direction']}, "
          f"t_end {s['t_end']:g}, samples {s['n_samples']}")
    print(f"  residuals: mass {res['r_mass']:.3e}, moment {res['r_moment']:.3e}, "
          f"energy {res['r_energy']:.3e}")
    if s["halted"]:
        print(f"  HALTED at t = {s['halt_time']:.6g} (blow-up flagged)")
    if s["radiation_warning"]:
        print(f"  warning: radiation reached the artificial boundary "
              f"at t = {s['radiation_first_time']:.6g}")


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
