from argparse import Namespace
from typing import Any

from rich.console import Console
from rich.table import Table

from anideal.engine.taylor import evaluate, exact_value
from anideal.models import Config
from anideal.utils.logger import logger_setup
from anideal.utils.pipeline import check_value, parse_analytic
from anideal.utils.render import DIGITS, emit_json, interval_json
from anideal.utils.tools import valid_unit_point

log = logger_setup(__name__)


def build_parser(parent_parser: Any, config: Config | None) -> None:
    """
    Builds the parser for this script. This is executed by the main CLI
    dynamically.

    :param parent_parser: subparsers object of the main parser
    :param config: unused while building parsers
    """
    subparser = parent_parser.add_parser(
        "eval",
        help="Rigorous enclosure of f at a rational point of [0,1].",
    )
    subparser.add_argument("expression", type=str, help="Expression in x.")
    subparser.add_argument(
        "point", type=valid_unit_point, help="Rational point such as 1/2 or 0.25."
    )
    subparser.set_defaults(func=main)


def main(args: Namespace, config: Config) -> int:
    """
    Prints the enclosure of f(point), with the exact value when substitution
    yields one.

    :param args: Argparse Namespace that has all the arguments
    :param config: resolved configuration
    :return: exit code
    """
    params = config.to_params()
    f = parse_analytic(args.expression, params)
    exact = exact_value(f, args.point)
    value = evaluate(f, args.point, params.precision_start, params.precision_cap)
    log.debug("enclosure %s at %s bits", value, value.precision)

    if config.oracle:
        check_value(f, args.point, value.lower, value.upper)

    if config.output_format == "json":
        payload = {
            "point": str(args.point),
            "exact": None if exact is None else str(exact),
            **interval_json(value),
        }
        emit_json(payload)
        return 0

    table = Table(title=f"{args.expression} at x = {args.point}", show_header=False)
    if exact is not None:
        table.add_row("Exact", str(exact))
    lo, hi = value.decimal_bounds(DIGITS)
    table.add_row("Lower", lo)
    table.add_row("Upper", hi)
    table.add_row("Width", value.decimal_width())
    Console().print(table)
    return 0
