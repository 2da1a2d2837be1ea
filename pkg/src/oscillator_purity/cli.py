"""
Command-line interface.

    oscillator-purity spectrum --eta 0.5 --theta 1.2 --n-max 3
    oscillator-purity purity --n1 1 --n2 1 --eta 1 --theta 1.5707963 --route oracle
    oscillator-purity sweep --coherent --eta-range -4 4 81 --theta-range 0 3.1416 61
    oscillator-purity validate --max-order 3

Exit codes are 0 on success, 1 when validation fails or the oracle does not
converge, and 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from oscillator_purity import __version__
from oscillator_purity.config import RunConfig, workers_from_env
from oscillator_purity.errors import OscillatorPurityError
from oscillator_purity.model import (
    CanonicalParams,
    OscillatorSystem,
    QuantumNumbers,
    from_synthetic,
    rescale,
    spectrum_table,
)
from oscillator_purity.purity import Route, purity
from oscillator_purity.states import CoherentLabel
from oscillator_purity.sweep import AxisRange, SweepRequest, run_sweep, write_table
from oscillator_purity.utils import format_float
from oscillator_purity.validate import validate

logger = logging.getLogger("oscillator_purity")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

PERTURBATION = 1e-6


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Flat JSON file of settings.")
    common.add_argument("--output", type=Path, help="Write results here, not stdout.")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings only.")

    system = common.add_argument_group("system")
    system.add_argument("--eta", type=float, default=0.0, help="Coupling strength.")
    system.add_argument(
        "--theta", type=float, default=math.pi / 2, help="Mixing angle (radians)."
    )
    system.add_argument(
        "--degrees", action="store_true", help="Read every angle in degrees."
    )
    system.add_argument("--m", type=float, help="Reduced mass.")
    system.add_argument("--k", type=float, help="Effective stiffness.")
    system.add_argument("--hbar", type=float, help="Planck constant.")
    for name in ("m1", "m2", "C1", "C2", "C3"):
        system.add_argument(
            f"--{name}",
            type=float,
            help="Physical mass or stiffness; given all five, replaces --eta/--theta.",
        )

    state = common.add_argument_group("state")
    state.add_argument("--n1", type=int, default=0)
    state.add_argument("--n2", type=int, default=0)
    state.add_argument(
        "--coherent", action="store_true", help="Use a coherent state."
    )
    state.add_argument("--alpha", type=float, default=0.0, help="Real displacement.")
    state.add_argument("--beta", type=float, default=0.0, help="Real displacement.")
    state.add_argument(
        "--route", choices=[r.value for r in Route], default=Route.CLOSED_FORM.value
    )
    state.add_argument("--grid-points", type=int, help="Oracle base grid size.")
    state.add_argument("--cap", type=int, help="Largest n1 + n2 accepted.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscillator-purity",
        description="Entanglement purity of two coupled harmonic oscillators.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = _common_arguments()
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser(
        "spectrum", parents=[common], help="Tabulate the energy spectrum."
    )
    spectrum.add_argument("--n-max", type=int, default=2)

    commands.add_parser(
        "purity", parents=[common], help="Evaluate one purity by any route."
    )

    sweep = commands.add_parser(
        "sweep", parents=[common], help="Tabulate purities over an (eta, theta) grid."
    )
    sweep.add_argument(
        "--eta-range", nargs=3, type=float, metavar=("MIN", "MAX", "STEPS")
    )
    sweep.add_argument(
        "--theta-range", nargs=3, type=float, metavar=("MIN", "MAX", "STEPS")
    )
    sweep.add_argument(
        "--routes", help="Comma separated routes, defaults to --route."
    )

    check = commands.add_parser(
        "validate", parents=[common], help="Cross-check every route."
    )
    check.add_argument("--max-order", type=int, default=3)
    check.add_argument(
        "--skip-oracle", action="store_true", help="Leave out the grid oracle."
    )
    check.add_argument("--perturb-u", action="store_true", help=argparse.SUPPRESS)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    return config.updated(
        hbar=args.hbar,
        m=args.m,
        k=args.k,
        grid_points=args.grid_points,
        cap=args.cap,
        workers=workers_from_env(),
    )


def _angle(value: float, args: argparse.Namespace) -> float:
    return math.radians(value) if args.degrees else value


def _params(args: argparse.Namespace, config: RunConfig) -> CanonicalParams:
    physical = [getattr(args, name) for name in ("m1", "m2", "C1", "C2", "C3")]
    if all(v is not None for v in physical):
        return rescale(OscillatorSystem(*physical))
    if any(v is not None for v in physical):
        raise ValueError("--m1, --m2, --C1, --C2 and --C3 must be given together")
    return from_synthetic(
        args.eta, _angle(args.theta, args), config.m, config.k, division_safe=False
    )


def _state(args: argparse.Namespace) -> QuantumNumbers | None:
    return None if args.coherent else QuantumNumbers(args.n1, args.n2)


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, newline="\n")
        logger.info("Wrote %s", output)


def cmd_spectrum(args: argparse.Namespace, config: RunConfig) -> int:
    p = _params(args, config)
    table = spectrum_table(p, args.n_max, config.hbar)
    _emit(write_table(table, None, args.format), args.output)
    return EXIT_OK


def cmd_purity(args: argparse.Namespace, config: RunConfig) -> int:
    p = _params(args, config)
    result = purity(
        p.eta,
        p.theta,
        n=_state(args),
        route=args.route,
        mk_over_hbar2=p.mk_over_hbar2(config.hbar),
        cap=config.cap,
        label=CoherentLabel(args.alpha, args.beta),
        grid_points=config.grid_points,
        params=p,
        hbar=config.hbar,
    )
    fields = {
        "purity": result.value,
        "route": result.route.value,
        "error_estimate": result.error_estimate,
        "linear_entropy": result.linear_entropy,
    }
    if args.format == "json":
        text = json.dumps(fields, indent=2) + "\n"
    else:
        text = "".join(
            f"{key}: {format_float(v) if isinstance(v, float) else v}\n"
            for key, v in fields.items()
        )
    _emit(text, args.output)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    def axis(values, fixed):
        if values is None:
            return AxisRange(fixed, fixed, 1)
        low, high, steps = values
        if steps != int(steps):
            raise ValueError(f"STEPS must be an integer, got {steps}")
        return AxisRange(low, high, int(steps))

    theta_range = args.theta_range
    if theta_range is not None:
        theta_range = [_angle(theta_range[0], args), _angle(theta_range[1], args)] + [
            theta_range[2]
        ]
    routes = (args.routes or args.route).split(",")
    request = SweepRequest(
        eta_range=axis(args.eta_range, args.eta),
        theta_range=axis(theta_range, _angle(args.theta, args)),
        n=_state(args),
        routes=tuple(Route(r.strip()) for r in routes),
        output=args.output,
        format=args.format,
        label=CoherentLabel(args.alpha, args.beta),
    )
    table = run_sweep(request, config)
    text = write_table(table, None, request.format)
    _emit(text, request.output)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    report = validate(
        config,
        max_order=args.max_order,
        u_scale=1 + PERTURBATION if args.perturb_u else 1.0,
        include_oracle=not args.skip_oracle,
    )
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.output)
    if report.passed:
        logger.info("All identities hold")
        return EXIT_OK
    worst = report.worst
    logger.error(
        "Identity %s failed: max_error=%.3g at %s (tolerance %.3g)",
        worst.name,
        worst.max_error,
        worst.worst_point,
        worst.tolerance,
    )
    return EXIT_FAILED


COMMANDS = {
    "spectrum": cmd_spectrum,
    "purity": cmd_purity,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        config = _load_config(args)
        return COMMANDS[args.command](args, config)
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except OscillatorPurityError as e:
        logger.error("%s", e)
        return EXIT_FAILED
