"""Command-line front end.

Exit codes: 0 success, 1 failed acceptance check, 2 usage, descriptor or
validation error, 3 eigensolver non-convergence, 4 resolution error, 5 any
other library error.
"""
import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from src.application.commands import RunConfig
from src.commons.config import load_key_values
from src.commons.utils import logger, set_level
from src.domain.exceptions import ConvergenceError, DescriptorError, InputError, MeanSpecError, ResolutionError
from src.infrastructure import Container, create_container

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_RESOLUTION = 4
EXIT_ERROR = 5

DEFAULT_DENSITY_DOMAINS = ["box:1x1", "box:1x1x1", "disk:1", "ball3:1"]
LIST_KEYS = ("eps", "t", "content_t")
# flag or config-file key -> RunConfig field
ALIASES = {"h": "grid_h", "format": "output_format"}
CSV_COMMANDS = ("heat", "mc")


def float_list(text: str) -> List[float]:
    """Comma-separated numbers; an empty string gives an empty list"""
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        return [float(item) for item in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list: '{text}'") from None


def _parent(*adders) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    for add in adders:
        add(parser)
    return parser


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value file with defaults for any long flag")
    parser.add_argument("--output", "-o", help="output path (stdout when omitted)")
    parser.add_argument("--format", choices=["json", "csv"], help="output format")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--threads", type=int, help="worker threads (env MEANSPEC_THREADS)")
    parser.add_argument("--log-level", help="log level written to stderr")


def _geometry(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=["exact", "grid"], help="closed form or finite differences")
    parser.add_argument("--h", type=float, help="grid spacing for rasterized domains")


def _spectral(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="number of modes")
    parser.add_argument("--residual-tol", type=float, help="relative residual tolerance of grid solves")
    parser.add_argument("--interval", type=float, help="compose with [0, L] (product domain)")


def _census(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--convention", choices=["canonical", "cluster"], help="degenerate-cluster counting")
    parser.add_argument("--alpha", type=float, help="boundary-mass exponent of the margin")


def _strip(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eps", type=float_list, help="strip widths, comma-separated")
    parser.add_argument("--t", type=float_list, help="times, comma-separated")


def _heat(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--content-t", type=float_list, help="heat-content times, comma-separated")
    parser.add_argument("--c1", type=float, help="early time constant, t = c1·eps²")
    parser.add_argument("--c2", type=float, help="late time constant, t = c2·eps²")
    parser.add_argument("--c-cutoff", type=float, help="tail cutoff constant")


def _mc(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--paths", type=int, help="number of Brownian paths")
    parser.add_argument("--dt", type=float, help="time step (default (eps/10)²)")
    parser.add_argument("--bridge", action=argparse.BooleanOptionalAction, help="Brownian-bridge crossing test")
    parser.add_argument("--chunk-size", type=int, help="paths per random stream (env MEANSPEC_MC_CHUNK)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanspec",
                                     description="Dirichlet spectra and nonzero-mean eigenfunctions")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _parent(_common)

    spectrum = commands.add_parser("spectrum", help="JSON lines, one per mode",
                                   parents=[common, _parent(_geometry, _spectral)])
    spectrum.add_argument("domain")

    census = commands.add_parser("census", help="nonzero-mean census report",
                                 parents=[common, _parent(_geometry, _spectral, _census)])
    census.add_argument("domain")
    census.add_argument("--eps", type=float_list, help="strip widths for the boundary-mass fit")

    heat = commands.add_parser("heat", help="spectral heat mass, gap, heat content and tail tables",
                               parents=[common, _parent(_geometry, _strip, _heat)])
    heat.add_argument("domain")
    heat.add_argument("--n", type=int, help="number of grid modes")

    mc = commands.add_parser("mc", help="Monte Carlo survival or heat mass",
                             parents=[common, _parent(_geometry, _strip, _mc)])
    mc.add_argument("domain")

    density = commands.add_parser("density", help="N_A(n)/n across domains",
                                  parents=[common, _parent(_geometry, _spectral, _census)])
    density.add_argument("domains", nargs="*")

    check = commands.add_parser("check", help="run the acceptance suite", parents=[common])
    check.add_argument("--only", type=lambda text: [name for name in text.split(",") if name],
                       help="comma-separated criterion names")
    return parser


def _normalise(values: Dict[str, Any]) -> Dict[str, Any]:
    normalised = {}
    for key, value in values.items():
        key = key.replace("-", "_")
        normalised[ALIASES.get(key, key)] = value
    return normalised


def run_fields(args: argparse.Namespace, container: Container) -> Dict[str, Any]:
    """RunConfig fields: explicit flag > --config file > environment > defaults"""
    fields: Dict[str, Any] = {
        "threads": container.config.threads(),
        "chunk_size": container.config.chunk_size(),
    }
    if args.command in CSV_COMMANDS:
        fields["output_format"] = "csv"
    if getattr(args, "config", None):
        from_file = _normalise(load_key_values(args.config))
        from_file.pop("log_level", None)
        for key in LIST_KEYS:
            if key in from_file:
                try:
                    from_file[key] = float_list(from_file[key])
                except argparse.ArgumentTypeError as error:
                    raise DescriptorError(f"{args.config}: {key}: {error}") from None
        fields.update(from_file)
    flags = _normalise({key: value for key, value in vars(args).items()
                        if key not in ("command", "config", "log_level", "domain", "domains", "only")})
    fields.update(flags)
    return fields


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, (DescriptorError, InputError, ValidationError, ValueError)):
        return EXIT_USAGE
    if isinstance(error, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(error, ResolutionError):
        return EXIT_RESOLUTION
    return EXIT_ERROR


def _check(args: argparse.Namespace, container: Container) -> int:
    results = container.acceptance().execute(getattr(args, "only", None))
    for result in results:
        print(result.line())
    passed = sum(result.passed for result in results)
    failed = [result.name for result in results if not result.passed]
    print(f"{passed}/{len(results)} criteria passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def dispatch(args: argparse.Namespace, container: Container) -> int:
    if args.command == "check":
        return _check(args, container)
    fields = run_fields(args, container)
    if args.command == "density":
        domains = args.domains or DEFAULT_DENSITY_DOMAINS
        config = RunConfig(**{**fields, "domain": domains[0]})
        container.density_report().execute(config, domains)
        return EXIT_OK
    config = RunConfig(**{**fields, "domain": args.domain})
    services = {
        "spectrum": container.compute_spectrum,
        "census": container.run_census,
        "heat": container.run_heat,
        "mc": container.run_monte_carlo,
    }
    summary = services[args.command]().execute(config)
    logger.info("Command finished", extra={"command": args.command, **{k: v for k, v in summary.items()
                                                                       if isinstance(v, (int, float, str))}})
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the meanspec command"""
    args = build_parser().parse_args(argv)
    if getattr(args, "log_level", None):
        set_level(args.log_level)
    try:
        container = create_container()
        return dispatch(args, container)
    except (MeanSpecError, ValueError) as error:
        code = exit_code_for(error)
        logger.error("Command failed", extra={"command": args.command, "error": str(error), "exit_code": code})
        print(f"meanspec: error: {error}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
