from argparse import Namespace
from typing import Any

from rich.console import Console

from anideal.engine.roots import isolate_zeros
from anideal.models import Config, Divisor, Undecidable
from anideal.utils.logger import logger_setup
from anideal.utils.pipeline import check_divisor, parse_analytic
from anideal.utils.render import emit_json, isolation_json, print_isolation

log = logger_setup(__name__)


def build_parser(parent_parser: Any, config: Config | None) -> None:
    """
    Builds the parser for this script. This is executed by the main CLI
    dynamically.

    :param parent_parser: subparsers object of the main parser
    :param config: unused while building parsers
    """
    subparser = parent_parser.add_parser(
        "roots",
        help="Certified divisor of an analytic function on [0,1].",
    )
    subparser.add_argument("expression", type=str, help="Expression in x.")
    subparser.set_defaults(func=main)


def main(args: Namespace, config: Config) -> int:
    """
    Isolates every zero of the expression on [0,1] and prints the divisor.

    :param args: Argparse Namespace that has all the arguments
    :param config: resolved configuration
    :return: exit code, 4 when the divisor is undecidable
    """
    params = config.to_params()
    status_console = Console(stderr=True)

    with status_console.status("[bold green]Isolating zeros..."):
        f = parse_analytic(args.expression, params)
        result = isolate_zeros(f, params=params)

    if config.oracle and isinstance(result, Divisor):
        check_divisor(f, result)

    if config.output_format == "json":
        emit_json(isolation_json(result))
    else:
        print_isolation(Console(), result, f"Zeros of {args.expression}")

    if isinstance(result, Undecidable):
        log.debug("undecidable: %s", result)
        return 4
    return 0
