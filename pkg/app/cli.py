"""Command-line entry point: python -m app.cli {simulate,limit-cdf,compare,verify}.

Exit status is 0 on success, 1 when a tolerance is exceeded and 2 on usage errors.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from app.config import settings
from app.core.errors import DimensionMismatchError, LabError, LatticeRangeError, ParameterWindowError
from app.repositories.report_repository import ReportRepository, format_float
from app.schemas.experiment import ExperimentConfig
from app.services.experiment_service import ExperimentService
from app.services.verification_service import PROFILES, VerificationService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2

# short keys accepted in config files, next to the ExperimentConfig field names
CONFIG_ALIASES = {"r": "r_list", "s": "s_grid", "smax": "window", "out": "output"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override its values")
    common.add_argument("--t", type=float, help="macroscopic time")
    common.add_argument("--delta", type=float, help="step parameter, 0 for the stationary law")
    common.add_argument("--r", type=float, action="append", help="label r_k (repeatable)")
    common.add_argument("--s", type=float, action="append", help="position s_k or grid point (repeatable)")
    common.add_argument("--trials", type=int, help="Monte Carlo trials")
    common.add_argument("--nodes", type=int, help="quadrature nodes per block")
    common.add_argument("--smax", type=float, help="core window S_max - cut of every block")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--workers", type=int, help="local worker processes")
    common.add_argument("--format", choices=["csv", "json"], help="report format")
    common.add_argument("--out", help="output path")
    common.add_argument("--log-level", default=settings.log_level)

    parser = argparse.ArgumentParser(
        prog="kpz-lab",
        description="Reflected Brownian motions against the finite-step and stationary Airy laws.",
    )
    commands = parser.add_subparsers(dest="mode", required=True)
    commands.add_parser("simulate", parents=[common], help="write rescaled samples as CSV")
    commands.add_parser("limit-cdf", parents=[common], help="evaluate the limit distribution")
    commands.add_parser("compare", parents=[common], help="Monte Carlo against the formula")
    verify = commands.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--profile", choices=sorted(PROFILES), default="full")
    verify.add_argument("--check", action="append", help="run only this check (repeatable)")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file values overridden by the flags that were given."""
    values: Dict[str, Any] = {}
    if args.config:
        for key, value in dotenv_values(args.config).items():
            key = key.lower()
            values[CONFIG_ALIASES.get(key, key)] = value
    flags = {
        "t": args.t,
        "delta": args.delta,
        "r_list": args.r,
        "s_grid": args.s,
        "trials": args.trials,
        "nodes": args.nodes,
        "window": args.smax,
        "seed": args.seed,
        "workers": args.workers,
        "format": args.format,
        "output": args.out,
    }
    values.update({key: value for key, value in flags.items() if value is not None})
    values["mode"] = args.mode
    return ExperimentConfig.model_validate(values)


def _write_lines(lines: List[str], path: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run_simulate(config: ExperimentConfig) -> int:
    samples = ExperimentService(config).simulate()
    ReportRepository().write_samples(samples, config.r_list, config.output)
    return EXIT_OK


def run_limit_cdf(config: ExperimentConfig) -> int:
    """One joint value when one s is given per label; a table over s for a single label."""
    service = ExperimentService(config)
    m = len(config.r_list)
    if len(config.s_grid) == m:
        value, law = service.limit_cdf(config.s_grid)
        lines = [f"law,{law}", "F," + format_float(value)]
    elif m == 1:
        lines = ["s,F"]
        for s in config.s_grid:
            value, _ = service.limit_cdf([s])
            lines.append(f"{format_float(s)},{format_float(value)}")
    else:
        raise ValueError(f"{m} labels need exactly {m} --s values")
    _write_lines(lines, config.output)
    return EXIT_OK


def run_compare(config: ExperimentConfig) -> int:
    report = ExperimentService(config).run_compare()
    ReportRepository().emit_report(report, config.format, config.output)
    print(f"ks={report.ks:.6f} tolerance={report.tolerance:.6f} samples={report.n_samples}")
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def run_verify(config: ExperimentConfig, args: argparse.Namespace) -> int:
    service = VerificationService(
        seed=config.seed,
        profile=PROFILES[args.profile],
        nodes=config.nodes,
        window=config.window,
        workers=config.workers,
    )
    summary = service.run_verify(args.check)
    print(f"{'check':<34}{'measured':>14}{'allowed':>14}  result")
    for check in summary.checks:
        print(f"{check.name:<34}{check.measured:>14.3e}{check.allowed:>14.3e}  "
              f"{'ok' if check.passed else 'FAILED'}")
    print(f"{len(summary.checks) - len(summary.failures)}/{len(summary.checks)} passed "
          f"in {summary.runtime:.1f}s")
    if config.output:
        ReportRepository().write_summary(summary, config.format, config.output)
    return EXIT_OK if summary.passed else EXIT_TOLERANCE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=args.log_level, format=settings.log_format)
    try:
        config = load_config(args)
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.mode == "simulate":
            return run_simulate(config)
        if args.mode == "limit-cdf":
            return run_limit_cdf(config)
        if args.mode == "compare":
            return run_compare(config)
        return run_verify(config, args)
    except (ParameterWindowError, DimensionMismatchError, LatticeRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LabError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_TOLERANCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
