from argparse import Namespace
from fractions import Fraction
from typing import Any

from rich.console import Console
from rich.table import Table

from anideal.engine.expr import Expr
from anideal.engine.oracle import RatPoly, poly_divmod
from anideal.engine.series import PiLinear
from anideal.engine.taylor import deflate, domination_check, exact_coeffs, taylor_coeffs
from anideal.exceptions import OracleDisagreement
from anideal.models import Config
from anideal.utils.logger import logger_setup
from anideal.utils.pipeline import parse_analytic, polynomial_of
from anideal.utils.render import DIGITS, emit_json, interval_json
from anideal.utils.tools import nonnegative_int, positive_int, valid_unit_point

log = logger_setup(__name__)


def build_parser(parent_parser: Any, config: Config | None) -> None:
    """
    Builds the parser for this script. This is executed by the main CLI
    dynamically.

    :param parent_parser: subparsers object of the main parser
    :param config: unused while building parsers
    """
    subparser = parent_parser.add_parser(
        "deflate",
        help="Taylor coefficients of (f(x) - f(gamma))/(x - gamma) at gamma.",
    )
    subparser.add_argument("expression", type=str, help="Expression in x.")
    subparser.add_argument(
        "gamma", type=valid_unit_point, help="Rational deflation point in [0,1]."
    )
    subparser.add_argument(
        "order",
        type=positive_int,
        help="Number of coefficients of the deflated function.",
    )
    subparser.add_argument(
        "--digits",
        type=nonnegative_int,
        default=DIGITS,
        help="Digits after the decimal point in text output.",
    )
    subparser.set_defaults(func=main)


def _check_against_oracle(f: Expr, gamma: Fraction, exact: list[PiLinear | None]) -> None:
    p = polynomial_of(f)
    if p is None:
        return
    quotient, _ = poly_divmod(p, RatPoly((-gamma, 1)))
    expected = quotient.shift(gamma).coeffs
    for n, value in enumerate(exact):
        want = expected[n] if n < len(expected) else 0
        if value is None or value.pi_coeff != 0 or value.rational != want:
            raise OracleDisagreement(
                f"deflated coefficient {n} is {value}, the exact quotient gives {want}"
            )


def main(args: Namespace, config: Config) -> int:
    """
    Prints the first `order` Taylor coefficients at gamma of the deflated
    function, exact where substitution allows, with enclosures and widths.

    :param args: Argparse Namespace that has all the arguments
    :param config: resolved configuration
    :return: exit code
    """
    params = config.to_params()
    f = parse_analytic(args.expression, params)
    n = args.order

    with Console(stderr=True).status("[bold green]Expanding..."):
        enclosures = taylor_coeffs(
            f, args.gamma, n, params.precision_start, params.precision_cap
        )
        exact = exact_coeffs(f, args.gamma, n)
    g_enclosures = deflate(enclosures)
    g_exact = deflate(exact)
    dominated = domination_check(enclosures, g_enclosures)
    log.debug("domination certificate: %s", dominated)

    if config.oracle:
        _check_against_oracle(f, args.gamma, g_exact)

    if config.output_format == "json":
        emit_json(
            {
                "gamma": str(args.gamma),
                "coefficients": [
                    {
                        "index": k,
                        "exact": None if e is None else str(e),
                        **interval_json(c),
                    }
                    for k, (c, e) in enumerate(zip(g_enclosures, g_exact))
                ],
                "dominated": dominated,
            }
        )
        return 0

    table = Table(title=f"Deflation of {args.expression} at {args.gamma}")
    table.add_column("n", justify="right")
    table.add_column("Exact")
    table.add_column("Lower")
    table.add_column("Upper")
    table.add_column("Width", justify="right")
    for k, (c, e) in enumerate(zip(g_enclosures, g_exact)):
        lo, hi = c.decimal_bounds(args.digits)
        table.add_row(str(k), "" if e is None else str(e), lo, hi, c.decimal_width())
    console = Console()
    console.print(table)
    console.print(f"Coefficient bound |g_n| <= (n+1)|f_(n+1)|: {'yes' if dominated else 'no'}")
    return 0
