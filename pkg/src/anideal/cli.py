#!/usr/bin/env python3
import argparse
import importlib
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, NoReturn

import argcomplete
import yaml

from anideal import __version__
from anideal.exceptions import (
    AnidealError,
    DivisionByZeroConstant,
    ExpressionSyntaxError,
    InvalidParamsError,
    NotAnalyticError,
    OracleDisagreement,
    PointIdentityUndecidable,
    PrecisionExhausted,
    UndecidableError,
)
from anideal.models import Config
from anideal.utils.logger import configure_logging, logger_setup
from anideal.utils.tools import (
    parse_tolerance,
    positive_int,
    valid_precision,
    valid_tolerance,
)

log = logger_setup(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NOT_ANALYTIC = 3
EXIT_UNDECIDABLE = 4
EXIT_POINT_IDENTITY = 5
EXIT_ORACLE = 6


class UsageErrorParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def create_parser() -> argparse.ArgumentParser:
    """Creates the top-level argument parser."""
    parser = UsageErrorParser(
        prog="anideal",
        description="Rigorous zeros and ideals of real-analytic functions on [0,1].",
    )
    parser.add_argument(
        "--precision",
        dest="precision",
        type=valid_precision,
        help="Starting working precision in bits (53, 128, 256, 512 or 1024).",
    )
    parser.add_argument(
        "--max-precision",
        dest="max_precision",
        type=valid_precision,
        help="Precision cap in bits.",
    )
    parser.add_argument(
        "--tolerance",
        dest="tolerance",
        type=valid_tolerance,
        help="Maximum enclosure width, e.g. 2^-53.",
    )
    parser.add_argument(
        "--mult-cap",
        dest="mult_cap",
        type=positive_int,
        help="Highest multiplicity the engine tries to certify.",
    )
    parser.add_argument(
        "--format",
        dest="format",
        choices=["text", "json"],
        help="Output format.",
    )
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="Cross-check polynomial inputs against the exact rational oracle.",
    )
    parser.add_argument(
        "--workers",
        dest="workers",
        type=positive_int,
        help="Threads used for root isolation.",
    )
    parser.add_argument(
        "--config",
        dest="config",
        help="Path of the YAML configuration file.",
    )
    parser.add_argument(
        "--log-file",
        dest="log_file",
        help="Also write log records to this file.",
    )
    parser.add_argument(
        "--debug",
        "-d",
        action="store_true",
        help="Enable debug logging.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    return parser


def load_all_modules(parser: argparse.ArgumentParser) -> None:
    """Dynamically discovers and loads all subcommand modules."""
    subparsers = parser.add_subparsers(
        title="positional arguments",
        help="Help for the subprograms that this tool offers.",
    )
    package_path = Path(__file__).parent.resolve()
    module_names = []

    for path in package_path.iterdir():
        if (
            path.is_file()
            and path.name.endswith(".py")
            and not path.name.startswith("__")
        ):
            module_name = path.name[:-3]
            if module_name not in ["cli", "exceptions", "models"]:
                module_names.append(module_name)

    module_names.sort()

    for module_name in module_names:
        module = importlib.import_module(f".{module_name}", package="anideal")
        # Pass None for config, as it's not needed to build the parsers.
        module.build_parser(subparsers, None)


def get_config_path() -> str:
    """Determines the default path of the configuration file."""
    xdg_config_home = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))
    return str(xdg_config_home / "anideal" / "config.yaml")


def load_config(config_file_path: str, required: bool = False) -> Dict[str, Any]:
    """
    Loads the YAML configuration file.

    :param config_file_path: file to read
    :param required: exit if the file does not exist
    :return: the settings, empty when an optional file is missing
    """
    try:
        with open(config_file_path, "r") as f:
            config = yaml.safe_load(f)
            if config is not None and not isinstance(config, dict):
                print(
                    f"Error: '{config_file_path}' must contain a mapping.",
                    file=sys.stderr,
                )
                sys.exit(EXIT_USAGE)
            return config or {}
    except FileNotFoundError:
        if not required:
            return {}
        print(
            f"Error: Configuration file '{config_file_path}' not found.",
            file=sys.stderr,
        )
        sys.exit(EXIT_USAGE)
    except yaml.YAMLError as e:
        print(
            f"Error: Invalid YAML format in '{config_file_path}': {e}", file=sys.stderr
        )
        sys.exit(EXIT_USAGE)


def resolve_config(args: argparse.Namespace, settings: Dict[str, Any]) -> Config:
    """
    Merges command line, config file and defaults, in that order of precedence.

    :raises InvalidParamsError: for malformed or inconsistent values
    """
    defaults = Config()

    def pick(flag: Any, key: str, default: Any) -> Any:
        if flag is not None:
            return flag
        return settings.get(key, default)

    try:
        tolerance = pick(args.tolerance, "tolerance", defaults.tolerance)
        if not isinstance(tolerance, Fraction):
            tolerance = parse_tolerance(str(tolerance))
        config = Config(
            precision_start=int(pick(args.precision, "precision", defaults.precision_start)),
            precision_cap=int(pick(args.max_precision, "max_precision", defaults.precision_cap)),
            tolerance=tolerance,
            multiplicity_cap=int(pick(args.mult_cap, "mult_cap", defaults.multiplicity_cap)),
            output_format=pick(args.format, "format", defaults.output_format),
            oracle=bool(args.oracle),
            workers=int(pick(args.workers, "workers", defaults.workers)),
            debug=bool(args.debug or settings.get("debug", False)),
        )
    except (TypeError, ValueError) as e:
        raise InvalidParamsError(f"invalid configuration value: {e}") from e
    if config.output_format not in ("text", "json"):
        raise InvalidParamsError(f"unknown output format '{config.output_format}'")
    # validates ladder membership and ordering
    config.to_params()
    return config


def exit_code_for(error: AnidealError) -> int:
    match error:
        case ExpressionSyntaxError():
            return EXIT_PARSE
        case NotAnalyticError() | DivisionByZeroConstant():
            return EXIT_NOT_ANALYTIC
        case UndecidableError() | PrecisionExhausted():
            return EXIT_UNDECIDABLE
        case PointIdentityUndecidable():
            return EXIT_POINT_IDENTITY
        case OracleDisagreement():
            return EXIT_ORACLE
    return EXIT_USAGE


def main() -> None:
    """The main entry point for the anideal CLI."""
    parser = create_parser()
    # Load all subcommands so they are available for help messages.
    load_all_modules(parser)
    argcomplete.autocomplete(parser)

    args = parser.parse_args()

    # If no subcommand was provided, argparse will not set the 'func' attribute.
    if "func" not in vars(args):
        parser.print_help()
        sys.exit(EXIT_USAGE)

    config_path = args.config or get_config_path()
    settings = load_config(config_path, required=args.config is not None)

    try:
        config = resolve_config(args, settings)
    except InvalidParamsError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)

    configure_logging(config, log_file=args.log_file)
    log.debug("Using config file: %s", config_path)
    log.debug("Resolved configuration: %s", config)

    # --- Execute subcommand ---
    try:
        code = args.func(args, config)
    except AnidealError as e:
        log.debug("%s: %s", type(e).__name__, e)
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(exit_code_for(e))
    sys.exit(code or EXIT_OK)


if __name__ == "__main__":
    main()
