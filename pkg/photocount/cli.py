from __future__ import annotations

import argparse
import asyncio
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List

from pydantic import ValidationError
from termcolor import colored

from photocount.config import PhotocountSettings, get_settings, set_settings
from photocount.distribution import approx_dist, error_bound, sweep
from photocount.distribution.special import BesselPack
from photocount.exceptions import ConfigurationError, PhotocountError
from photocount.moments import ModelParams, moments
from photocount.serialization import document, emit
from photocount.simulation import estimate_pn, sample_energies_async
from photocount.types import Backend
from photocount.verify import DEFAULT_TAUS, run_verification_async

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_COMPUTATION = 3


def _positive_float(value: str) -> float:
    try:
        number = float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from exc
    if not (math.isfinite(number) and number > 0):
        raise argparse.ArgumentTypeError(f"must be a finite number > 0, got {value}")
    return number


def _non_negative_float(value: str) -> float:
    try:
        number = float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from exc
    if not (math.isfinite(number) and number >= 0):
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0, got {value}")
    return number


def _int_at_least(minimum: int) -> Callable[[str], int]:
    def parse(value: str) -> int:
        try:
            number = int(value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from exc
        if number < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {number}")
        return number

    return parse


def _seed(value: str) -> int:
    try:
        number = int(value, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be decimal or 0x-hex, got {value!r}") from exc
    if not 0 <= number < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {value}")
    return number


def _comma_list(item: Callable[[str], Any]) -> Callable[[str], List[Any]]:
    def parse(value: str) -> List[Any]:
        parts = [p.strip() for p in value.split(",") if p.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        return [item(p) for p in parts]

    return parse


def _params(args: argparse.Namespace) -> ModelParams:
    return ModelParams(nu=args.nu, sigma=args.sigma, t_phys=args.t_phys)


def _params_dict(params: ModelParams) -> Dict[str, float]:
    return {**params.model_dump(), "tau": params.tau, "theta": params.theta}


def _backend(args: argparse.Namespace) -> Backend:
    return Backend.MULTIPRECISION if getattr(args, "precision", "float") == "mp" else Backend.FLOAT


def _emit(args: argparse.Namespace, doc: Dict[str, Any]) -> None:
    emit(doc, args.format or get_settings().output_format, args.output)


def _sim_options(args: argparse.Namespace) -> Dict[str, Any]:
    options: Dict[str, Any] = {}
    if getattr(args, "workers", None):
        options["workers"] = args.workers
    if getattr(args, "progress", False):
        options["progress"] = True
    return options


async def handle_moments(args: argparse.Namespace) -> int:
    params = _params(args)
    order = args.order if args.order is not None else get_settings().default_order
    table = moments(order, params, backend=_backend(args), dps=args.dps)
    _emit(args, document("moments", _params_dict(params), table.rows(), route=table.route.value))
    return EXIT_OK


async def handle_dist(args: argparse.Namespace) -> int:
    params = _params(args)
    order = args.order if args.order is not None else get_settings().default_order
    dist = approx_dist(order, params, backend=_backend(args), dps=args.dps)
    _emit(args, document(
        "dist", _params_dict(params), dist.as_rows(),
        order=order, zeta=dist.zeta, bound=dist.bound, bound_available=dist.accuracy.available,
        negative_mass=dist.negative_mass,
    ))
    return EXIT_OK


async def handle_bound(args: argparse.Namespace) -> int:
    params = _params(args)
    order = args.order if args.order is not None else get_settings().default_order
    pack = BesselPack.at(params.tau)
    bounds = [error_bound(N, params) for N in range(order + 1)]
    rows = [{"N": N, "bound": b.value, "available": b.available} for N, b in enumerate(bounds)]
    _emit(args, document(
        "bound", _params_dict(params), rows,
        zeta=bounds[0].zeta, psi=pack.psi, i0_tau=pack.i0_tau, prefactor=pack.prefactor,
    ))
    return EXIT_OK


async def handle_simulate(args: argparse.Namespace) -> int:
    settings = get_settings().simulation
    params = _params(args)
    samples = args.samples or settings.samples
    steps = args.steps or settings.steps
    seed = settings.seed if args.seed is None else args.seed
    energies = await sample_energies_async(params, samples, steps, seed, **_sim_options(args))
    estimates = estimate_pn(params, args.n_max, samples, steps, seed, energies=energies)
    rows = [{"n": n, "probability": e.value, "stderr": e.stderr} for n, e in enumerate(estimates)]
    _emit(args, document(
        "simulate", _params_dict(params), rows,
        samples=samples, steps=steps, seed=seed,
    ))
    return EXIT_OK


async def handle_verify(args: argparse.Namespace) -> int:
    settings = get_settings().simulation
    params = _params(args)
    report = await run_verification_async(
        taus=args.tau or DEFAULT_TAUS,
        max_m=args.max_m,
        params=params,
        samples=args.samples,
        steps=args.steps or settings.steps,
        seed=settings.seed if args.seed is None else args.seed,
        **_sim_options(args),
    )
    _emit(args, document("verify", _params_dict(params), report.rows(), passed=report.passed))
    for check in report.checks:
        status = colored("PASS", "green") if check.passed else colored("FAIL", "red")
        logger.info("%s %s", status, check.name)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures)
        print(colored(f"verification failed: {names}", "red"), file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


async def handle_sweep(args: argparse.Namespace) -> int:
    grid = [
        ModelParams.from_dimensionless(tau, ratio, nu=args.nu)
        for tau in args.tau_grid
        for ratio in args.sigma_grid
    ]
    rows = list(sweep(args.orders, grid))
    _emit(args, document("sweep", None, rows))
    return EXIT_OK


COMMAND_HANDLERS = {
    "moments": handle_moments,
    "dist": handle_dist,
    "bound": handle_bound,
    "simulate": handle_simulate,
    "verify": handle_verify,
    "sweep": handle_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photocount", description="Photocount statistics of Ornstein-Uhlenbeck light")
    parser.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level (stderr)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Shortcut for --log-level INFO")
    parser.add_argument("--config", type=Path, help="JSON settings file (overrides PHOTOCOUNT_CONFIG)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_output_arguments(sub, default_model: bool = False):
        sub.add_argument("--nu", type=_positive_float, required=not default_model, default=1.0 if default_model else None,
                         help="Relaxation rate")
        sub.add_argument("--sigma", type=_positive_float, required=not default_model, default=0.1 if default_model else None,
                         help="Noise intensity")
        sub.add_argument("--t-phys", dest="t_phys", type=_non_negative_float, required=not default_model,
                         default=0.5 if default_model else None, help="Registration time")
        sub.add_argument("--format", choices=["json", "csv"], help="Output format")
        sub.add_argument("--output", type=Path, help="Output path (default: stdout)")

    def add_precision_arguments(sub):
        sub.add_argument("--order", type=_int_at_least(0), help="Truncation order N")
        sub.add_argument("--precision", choices=["float", "mp"], default="float", help="Arithmetic backend")
        sub.add_argument("--dps", type=_int_at_least(15), help="Decimal digits for --precision mp")

    def add_sampling_arguments(sub):
        sub.add_argument("--samples", type=_int_at_least(1000), help="Monte-Carlo trajectories")
        sub.add_argument("--steps", type=_int_at_least(1), help="Grid intervals K")
        sub.add_argument("--seed", type=_seed, help="Root seed (decimal or 0x-hex)")
        sub.add_argument("--workers", type=_int_at_least(1), help="Sampling threads")
        sub.add_argument("--progress", action="store_true", help="Show a progress bar on stderr")

    moments_parser = subparsers.add_parser("moments", help="Moments M_n of the absorbed energy")
    add_output_arguments(moments_parser)
    add_precision_arguments(moments_parser)

    dist_parser = subparsers.add_parser("dist", help="Truncated photocount distribution P_n^(N)")
    add_output_arguments(dist_parser)
    add_precision_arguments(dist_parser)

    bound_parser = subparsers.add_parser("bound", help="Guaranteed accuracy for orders 0..N")
    add_output_arguments(bound_parser)
    bound_parser.add_argument("--order", type=_int_at_least(0), help="Largest order N")

    simulate_parser = subparsers.add_parser("simulate", help="Monte-Carlo photocount probabilities")
    add_output_arguments(simulate_parser)
    add_sampling_arguments(simulate_parser)
    simulate_parser.add_argument("--n-max", dest="n_max", type=_int_at_least(0), default=3, help="Largest n")

    verify_parser = subparsers.add_parser("verify", help="Run the verification checks")
    add_output_arguments(verify_parser, default_model=True)
    add_sampling_arguments(verify_parser)
    verify_parser.add_argument("--tau", type=_comma_list(_positive_float), help="Comma list of tau values for the estimates")
    verify_parser.add_argument("--max-m", dest="max_m", type=_int_at_least(2), default=30, help="Largest coefficient index")

    sweep_parser = subparsers.add_parser("sweep", help="Long-format P_n^(N) over a parameter grid")
    sweep_parser.add_argument("--tau-grid", dest="tau_grid", type=_comma_list(_non_negative_float), required=True)
    sweep_parser.add_argument("--sigma-grid", dest="sigma_grid", type=_comma_list(_positive_float), required=True,
                              help="Comma list of sigma / nu^2 ratios")
    sweep_parser.add_argument("--orders", type=_comma_list(_int_at_least(0)), required=True)
    sweep_parser.add_argument("--nu", type=_positive_float, default=1.0)
    sweep_parser.add_argument("--format", choices=["json", "csv"], help="Output format")
    sweep_parser.add_argument("--output", type=Path, help="Output path (default: stdout)")

    return parser


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


async def main_async(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = PhotocountSettings.load(args.config) if args.config else get_settings()
    except (ConfigurationError, ValidationError) as exc:
        print(f"photocount: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.config:
        set_settings(settings)
    setup_logging(args.log_level or ("INFO" if args.verbose else settings.log_level))

    handler = COMMAND_HANDLERS[args.command]
    try:
        return await handler(args)
    except (ValidationError, ConfigurationError) as exc:
        print(f"photocount {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhotocountError as exc:
        logger.debug("computation failed", exc_info=True)
        print(f"photocount {args.command}: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


def main(argv: list[str] | None = None) -> int:
    return asyncio.run(main_async(argv))


if __name__ == "__main__":
    sys.exit(main())
