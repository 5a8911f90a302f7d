import argparse
import logging
import sys
from typing import List, Optional, Tuple
from src.commands import bench_commands, count_commands, entropy_commands, verify_commands
from src.config.precision import PrecisionConfig
from src.config.settings import settings
from src.middleware.error_middleware import emit, error_response
from src.utils.errors import ValidationError
from src.utils.renderers import Renderers

COMMAND_MODULES = (count_commands, entropy_commands, verify_commands, bench_commands)
FORMATS = ("json", "csv", "plain")


class CommandParser(argparse.ArgumentParser):
    """Argument parser that raises usage errors instead of exiting."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(f"{self.prog}: {message}")


def _output_options(argv: Optional[List[str]]) -> Tuple[str, Optional[str]]:
    """Best-effort --format and --output, for reporting usage errors."""
    pre = CommandParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--format", default="json")
    pre.add_argument("--output", default=None)
    try:
        known, _ = pre.parse_known_args(argv)
    except ValidationError:
        return "json", None
    fmt = known.format if known.format in FORMATS else "json"
    return fmt, known.output


def build_parser() -> argparse.ArgumentParser:
    """Assemble the parser from the command modules."""
    parser = CommandParser(
        prog="treecount",
        description="Exact spanning-tree counts and tree entropies of scaled circulants and tori",
    )
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--output", default=None, help="Write output to FILE instead of stdout")
    parser.add_argument(
        "--precision-bits",
        dest="precision_bits",
        type=int,
        default=None,
        help="Initial interval precision (default from TREECOUNT_PRECISION_BITS)",
    )
    parser.add_argument("--log-level", dest="log_level", default=None)

    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch to the command handler.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        Exit code: 0 success, 1 usage or configuration, 2 verification mismatch,
        3 precision or quadrature budget exhausted
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValidationError as exc:
        fmt, output = _output_options(argv)
        failure = error_response(exc)
        emit(Renderers.render(failure, fmt), output)
        return failure.error.exit_code
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    PrecisionConfig.reset(args.precision_bits)
    return args.handler(args)


def run() -> None:
    """Console entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
