"""
KlSpark - Main Launcher.

Command-line entry point: trace tables, monodromy tables, verification
suites, stability checks, replays of result files and the compute service.
"""

import sys
import argparse
import logging
from typing import List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from src.cli.commands import cmd_replay, run_command
from src.cli.models import OutputFormat, RunConfig, Suite
from src.core.config import get_settings
from src.core.models import GroupType
from src.sum_engine.models import CSV_COLUMNS


logger = logging.getLogger("klspark.main")


def configure_logging(verbose: bool = False) -> None:
    """Log to stderr so stdout stays machine-readable."""
    level = logging.DEBUG if verbose else getattr(logging, get_settings().log_level, logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


def _int_list(text: str) -> List[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def add_datum_arguments(parser: argparse.ArgumentParser, type_default: str = GroupType.UNITARY.value) -> None:
    parser.add_argument("--type", dest="type_tag", type=str, default=type_default,
                        choices=[t.value for t in GroupType], help="Group type")
    parser.add_argument("--n", type=int, help="Rank parameter n")
    parser.add_argument("--m", type=int, help="Regular elliptic number m")
    parser.add_argument("--d", type=int, help="Divisor parameter d (derived from m when omitted)")


def add_field_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=int, help="Field order q")
    parser.add_argument("--p", type=int, help="Characteristic p (with --e)")
    parser.add_argument("--e", type=int, default=1, help="Degree over F_p")
    parser.add_argument("--modulus", type=_int_list, help="Field modulus, coefficients high to low, comma-separated")
    parser.add_argument("--field-seed", type=int, default=0, help="Seed of the modulus search")


def add_sum_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phi", type=str, default="canonical",
                        help="canonical, canonical-degenerate, diag:v1,...,vk or matrices:path.json")
    parser.add_argument("--degenerate", action="store_true", help="Shorthand for --phi canonical-degenerate")
    parser.add_argument("--chi", type=_int_list, help="Character exponents in f' order, comma-separated")
    parser.add_argument("--psi", dest="psi_multiplier", type=int, default=1, help="Additive character multiplier a")
    parser.add_argument("--threads", type=int, default=get_settings().threads, help="Worker threads")
    parser.add_argument("--seed", type=int, default=get_settings().seed, help="Seed for searches and sampling")


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", type=str, default=OutputFormat.JSON.value,
                        choices=[f.value for f in OutputFormat], help="Output format")
    parser.add_argument("--output", type=str, help=f"Output path (default: under {get_settings().results_dir})")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description="KlSpark: generalized Kloosterman sums over finite fields")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    trace = commands.add_parser(
        "trace", help="Trace table S(t) over F_q^x",
        epilog=f"CSV columns: {', '.join(CSV_COLUMNS)}",
    )
    add_datum_arguments(trace)
    add_field_arguments(trace)
    add_sum_arguments(trace)
    add_output_arguments(trace)

    tables = commands.add_parser("tables", help="Unipotent monodromy and Springer fibre rows")
    tables.add_argument("--type", dest="type_tag", type=str, required=True,
                        choices=[t.value for t in GroupType], help="Group type")
    tables.add_argument("--n-max", type=int, help="Largest rank (classical types)")
    tables.add_argument("--oracle", action="store_true", help="Cross-check with matrix centralizers")
    add_output_arguments(tables)

    verify = commands.add_parser("verify", help="Run a verification suite")
    verify.add_argument("suite", type=str, choices=[s.value for s in Suite], help="Suite name")
    add_datum_arguments(verify)
    add_field_arguments(verify)
    add_sum_arguments(verify)
    verify.add_argument("--n-max", type=int, help="Largest rank (consistency)")
    verify.add_argument("--k-max", type=int, help="Number of power sums (euler)")
    verify.add_argument("--limit", type=int, help="Sampled domain points (reconstruction)")
    verify.add_argument("--oracle", action="store_true", help="Cross-check with matrix centralizers (consistency)")
    verify.add_argument("--output", type=str, help="Report path")

    stability = commands.add_parser("stability", help="Stability of a functional")
    add_datum_arguments(stability)
    add_field_arguments(stability)
    add_sum_arguments(stability)
    stability.add_argument("--output", type=str, help="Report path")

    replay = commands.add_parser("replay", help="Re-run a result file and compare bit-exactly")
    replay.add_argument("path", type=str, help="Result file")

    serve = commands.add_parser("serve", help="Start the compute service")
    serve.add_argument("--host", type=str, default=get_settings().host, help="Bind address")
    serve.add_argument("--port", type=int, default=get_settings().port, help="Port")

    return parser.parse_args(argv)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """RunConfig from parsed arguments; absent options keep the model defaults."""
    values = {k: v for k, v in vars(args).items() if v is not None and k not in ("verbose", "degenerate")}
    if getattr(args, "degenerate", False):
        values["phi"] = "canonical-degenerate"
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = parse_args(argv)
    configure_logging(args.verbose)

    if args.command == "replay":
        return cmd_replay(args.path)

    if args.command == "serve":
        from src.service.app import KlSparkService

        logger.info(f"Starting KlSpark service on {args.host}:{args.port}")
        try:
            KlSparkService(port=args.port).run(host=args.host)
        except KeyboardInterrupt:
            logger.info("KlSpark service stopped")
        return 0

    try:
        config = config_from_args(args)
    except ValueError as e:
        logger.error(f"Invalid arguments: {e}")
        return 2
    return run_command(config)


if __name__ == "__main__":
    sys.exit(main())
